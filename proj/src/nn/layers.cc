// Copyright 2026 The gotext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gotext/nn/layers.h"

#include <cmath>

namespace gotext::nn {
namespace {

Vector Sigmoid(const Vector& x) {
  return x.unaryExpr([](double v) {
    if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
  });
}

void RequireSize(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw ShapeMismatch(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                        std::to_string(v.size()));
  }
}

}  // namespace

LstmParams AddLstm(ParameterStore& store, const std::string& prefix, int input, int hidden) {
  LstmParams p;
  p.wx = &store.Add(prefix + ".wx", 4 * hidden, input);
  p.wh = &store.Add(prefix + ".wh", 4 * hidden, hidden);
  p.b = &store.Add(prefix + ".b", 4 * hidden, 1);
  p.input = input;
  p.hidden = hidden;
  return p;
}

LstmParams FindLstm(ParameterStore& store, const std::string& prefix) {
  LstmParams p;
  p.wx = &store.Get(prefix + ".wx");
  p.wh = &store.Get(prefix + ".wh");
  p.b = &store.Get(prefix + ".b");
  p.hidden = static_cast<int>(p.wh->value.cols());
  p.input = static_cast<int>(p.wx->value.cols());
  return p;
}

void InitLstm(const LstmParams& p, SplitMix64& rng) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.hidden));
  FillUniform(p.wx->value, scale, rng);
  FillUniform(p.wh->value, scale, rng);
  p.b->value.setZero();
  p.b->value.block(p.hidden, 0, p.hidden, 1).setOnes();
}

LstmState LstmStep(const LstmParams& p, const Vector& x, const Vector& h_prev, const Vector& c_prev,
                   LstmCache* cache) {
  RequireSize(x, p.input, "lstm input");
  RequireSize(h_prev, p.hidden, "lstm h_prev");
  RequireSize(c_prev, p.hidden, "lstm c_prev");
  const int n = p.hidden;
  Vector z = p.wx->value * x + p.wh->value * h_prev + p.b->value.col(0);
  Vector i = Sigmoid(z.segment(0, n));
  Vector f = Sigmoid(z.segment(n, n));
  Vector g = z.segment(2 * n, n).array().tanh();
  Vector o = Sigmoid(z.segment(3 * n, n));
  LstmState out;
  out.c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
  Vector tanh_c = out.c.array().tanh();
  out.h = o.cwiseProduct(tanh_c);
  if (cache) {
    cache->x = x;
    cache->h_prev = h_prev;
    cache->c_prev = c_prev;
    cache->i = std::move(i);
    cache->f = std::move(f);
    cache->g = std::move(g);
    cache->o = std::move(o);
    cache->c = out.c;
    cache->tanh_c = std::move(tanh_c);
  }
  return out;
}

LstmStepGrads LstmStepBackward(const LstmParams& p, const LstmCache& k, const Vector& dh,
                               const Vector& dc) {
  RequireSize(dh, p.hidden, "lstm dh");
  RequireSize(dc, p.hidden, "lstm dc");
  const int n = p.hidden;
  const Vector do_ = dh.cwiseProduct(k.tanh_c);
  const Vector dc_total =
      dc + dh.cwiseProduct(k.o).cwiseProduct((1.0 - k.tanh_c.array().square()).matrix());
  Vector dz(4 * n);
  dz.segment(0, n) = dc_total.cwiseProduct(k.g).cwiseProduct(k.i.cwiseProduct((1.0 - k.i.array()).matrix()));
  dz.segment(n, n) = dc_total.cwiseProduct(k.c_prev).cwiseProduct(k.f.cwiseProduct((1.0 - k.f.array()).matrix()));
  dz.segment(2 * n, n) = dc_total.cwiseProduct(k.i).cwiseProduct((1.0 - k.g.array().square()).matrix());
  dz.segment(3 * n, n) = do_.cwiseProduct(k.o.cwiseProduct((1.0 - k.o.array()).matrix()));

  if (p.wx->trainable) p.wx->Grad().noalias() += dz * k.x.transpose();
  if (p.wh->trainable) p.wh->Grad().noalias() += dz * k.h_prev.transpose();
  if (p.b->trainable) p.b->Grad().col(0) += dz;

  LstmStepGrads g;
  g.dx = p.wx->value.transpose() * dz;
  g.dh_prev = p.wh->value.transpose() * dz;
  g.dc_prev = dc_total.cwiseProduct(k.f);
  return g;
}

Vector Attention(const Vector& h_dec, const Matrix& H, AttentionCache* cache) {
  if (H.rows() < 1) throw ShapeMismatch("attention over an empty sequence");
  RequireSize(h_dec, H.cols(), "attention query");
  Vector weights = Softmax(H * h_dec);
  Vector c = H.transpose() * weights;
  if (cache) cache->weights = std::move(weights);
  return c;
}

void AttentionBackward(const Vector& h_dec, const Matrix& H, const AttentionCache& cache,
                       const Vector& dc, Vector& dh_dec, Matrix& dH) {
  const Vector& a = cache.weights;
  dH.noalias() += a * dc.transpose();
  const Vector da = H * dc;
  const Vector ds = a.cwiseProduct((da.array() - a.dot(da)).matrix());
  dh_dec.noalias() += H.transpose() * ds;
  dH.noalias() += ds * h_dec.transpose();
}

LinearParams AddLinear(ParameterStore& store, const std::string& prefix, int in, int out) {
  LinearParams p;
  p.w = &store.Add(prefix + ".w", in, out);
  p.b = &store.Add(prefix + ".b", out, 1);
  p.in = in;
  p.out = out;
  return p;
}

LinearParams FindLinear(ParameterStore& store, const std::string& prefix) {
  LinearParams p;
  p.w = &store.Get(prefix + ".w");
  p.b = &store.Get(prefix + ".b");
  p.in = static_cast<int>(p.w->value.rows());
  p.out = static_cast<int>(p.w->value.cols());
  return p;
}

void InitLinear(const LinearParams& p, SplitMix64& rng) {
  FillUniform(p.w->value, 1.0 / std::sqrt(static_cast<double>(p.in)), rng);
  p.b->value.setZero();
}

Vector LinearForward(const LinearParams& p, const Vector& z) {
  RequireSize(z, p.in, "linear input");
  return p.w->value.transpose() * z + p.b->value.col(0);
}

Vector LinearBackward(const LinearParams& p, const Vector& z, const Vector& dy) {
  RequireSize(dy, p.out, "linear grad");
  if (p.w->trainable) p.w->Grad().noalias() += z * dy.transpose();
  if (p.b->trainable) p.b->Grad().col(0) += dy;
  return p.w->value * dy;
}

Vector Softmax(const Vector& logits) {
  Vector e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

Vector LogSoftmax(const Vector& logits) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return logits.array() - lse;
}

Vector OutputDistribution(const LinearParams& head, const Vector& h_dec, const Vector& c) {
  if (h_dec.size() + c.size() != head.in) throw ShapeMismatch("output head input size");
  Vector z(head.in);
  z << h_dec, c;
  return Softmax(LinearForward(head, z));
}

double NllLoss(const std::vector<Vector>& dists, const std::vector<int>& targets,
               std::vector<Vector>* grads) {
  if (dists.size() != targets.size()) {
    throw LengthMismatch("nll: " + std::to_string(dists.size()) + " distributions, " +
                         std::to_string(targets.size()) + " targets");
  }
  double loss = 0;
  if (grads) grads->clear();
  for (std::size_t k = 0; k < dists.size(); ++k) {
    const int t = targets[k];
    if (t < 0 || t >= dists[k].size()) throw ShapeMismatch("nll target out of range");
    loss -= std::log(dists[k][t]);
    if (grads) {
      Vector g = Vector::Zero(dists[k].size());
      g[t] = -1.0 / dists[k][t];
      grads->push_back(std::move(g));
    }
  }
  return loss;
}

double SoftmaxNll(const Vector& logits, int target, Vector* dlogits) {
  if (target < 0 || target >= logits.size()) throw ShapeMismatch("nll target out of range");
  const Vector logp = LogSoftmax(logits);
  if (dlogits) {
    *dlogits = logp.array().exp();
    (*dlogits)[target] -= 1.0;
  }
  return -logp[target];
}

Vector MeanPool(const Matrix& H) {
  if (H.rows() < 1) throw ShapeMismatch("mean pool over an empty sequence");
  return H.colwise().mean().transpose();
}

Matrix StackRows(const std::vector<Vector>& rows) {
  if (rows.empty()) return Matrix();
  Matrix out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = rows[i].transpose();
  return out;
}

}  // namespace gotext::nn
