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

#include "gotext/nn/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "gotext/engine/rng.h"
#include "gotext/nn/layers.h"

namespace gotext::nn {

double RelativeError(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), kGradCheckFloor});
  return std::abs(analytic - numeric) / denom;
}

double CheckGradients(ParameterStore& store, const std::function<double()>& forward,
                      const std::function<void()>& forward_backward, double eps) {
  for (Parameter* p : store.All()) {
    if (p->trainable) p->Grad().setZero();
  }
  forward_backward();
  double worst = 0;
  for (Parameter* p : store.All()) {
    if (!p->trainable) continue;
    for (Eigen::Index k = 0; k < p->value.size(); ++k) {
      double& v = p->value.data()[k];
      const double saved = v;
      v = saved + eps;
      const double up = forward();
      v = saved - eps;
      const double down = forward();
      v = saved;
      const double numeric = (up - down) / (2 * eps);
      worst = std::max(worst, RelativeError(p->grad.data()[k], numeric));
    }
  }
  return worst;
}

Vector SoftmaxBackward(const Vector& p, const Vector& dp) {
  return p.cwiseProduct((dp.array() - p.dot(dp)).matrix());
}

namespace {

Vector RandomVector(int n, SplitMix64& rng, double scale = 1.0) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.Uniform(-scale, scale);
  return v;
}

Parameter& AddRandom(ParameterStore& s, const std::string& name, int rows, int cols, SplitMix64& rng,
                     double scale = 1.0) {
  Parameter& p = s.Add(name, rows, cols);
  FillUniform(p.value, scale, rng);
  return p;
}

double LstmDraw(SplitMix64& rng) {
  const int in = 1 + rng.BelowInt(4);
  const int hid = 1 + rng.BelowInt(5);
  ParameterStore s;
  LstmParams lp = AddLstm(s, "lstm", in, hid);
  FillUniform(lp.wx->value, 0.8, rng);
  FillUniform(lp.wh->value, 0.8, rng);
  FillUniform(lp.b->value, 0.8, rng);
  Parameter& x = AddRandom(s, "x", in, 1, rng);
  Parameter& h0 = AddRandom(s, "h0", hid, 1, rng);
  Parameter& c0 = AddRandom(s, "c0", hid, 1, rng);
  const Vector rc = RandomVector(hid, rng);
  auto fwd = [&] {
    LstmState st = LstmStep(lp, x.value.col(0), h0.value.col(0), c0.value.col(0));
    return st.h.sum() + rc.dot(st.c);
  };
  auto fb = [&] {
    LstmCache cache;
    LstmStep(lp, x.value.col(0), h0.value.col(0), c0.value.col(0), &cache);
    LstmStepGrads g = LstmStepBackward(lp, cache, Vector::Ones(hid), rc);
    x.Grad().col(0) += g.dx;
    h0.Grad().col(0) += g.dh_prev;
    c0.Grad().col(0) += g.dc_prev;
  };
  return CheckGradients(s, fwd, fb);
}

double EncoderDraw(SplitMix64& rng) {
  const int in = 1 + rng.BelowInt(3);
  const int hid = 1 + rng.BelowInt(4);
  const int len = 1 + rng.BelowInt(5);
  ParameterStore s;
  LstmParams lp = AddLstm(s, "lstm", in, hid);
  InitLstm(lp, rng);
  FillUniform(lp.b->value, 0.5, rng);
  Parameter& xs = AddRandom(s, "xs", len, in, rng);
  Matrix r(len, hid);
  FillUniform(r, 1.0, rng);
  auto fwd = [&] {
    Vector h = Vector::Zero(hid), c = Vector::Zero(hid);
    double loss = 0;
    for (int t = 0; t < len; ++t) {
      LstmState st = LstmStep(lp, xs.value.row(t).transpose(), h, c);
      h = st.h;
      c = st.c;
      loss += r.row(t).dot(h);
    }
    return loss;
  };
  auto fb = [&] {
    std::vector<LstmCache> caches(len);
    Vector h = Vector::Zero(hid), c = Vector::Zero(hid);
    for (int t = 0; t < len; ++t) {
      LstmState st = LstmStep(lp, xs.value.row(t).transpose(), h, c, &caches[t]);
      h = st.h;
      c = st.c;
    }
    Vector dh = Vector::Zero(hid), dc = Vector::Zero(hid);
    for (int t = len - 1; t >= 0; --t) {
      dh += r.row(t).transpose();
      LstmStepGrads g = LstmStepBackward(lp, caches[t], dh, dc);
      xs.Grad().row(t) += g.dx.transpose();
      dh = g.dh_prev;
      dc = g.dc_prev;
    }
  };
  return CheckGradients(s, fwd, fb);
}

double AttentionDraw(SplitMix64& rng) {
  const int hid = 1 + rng.BelowInt(5);
  const int len = 1 + rng.BelowInt(6);
  ParameterStore s;
  Parameter& q = AddRandom(s, "q", hid, 1, rng);
  Parameter& H = AddRandom(s, "H", len, hid, rng);
  const Vector r = RandomVector(hid, rng);
  auto fwd = [&] { return r.dot(Attention(q.value.col(0), H.value)); };
  auto fb = [&] {
    AttentionCache cache;
    Attention(q.value.col(0), H.value, &cache);
    Vector dq = Vector::Zero(hid);
    AttentionBackward(q.value.col(0), H.value, cache, r, dq, H.Grad());
    q.Grad().col(0) += dq;
  };
  return CheckGradients(s, fwd, fb);
}

double OutputHeadDraw(SplitMix64& rng) {
  const int hid = 1 + rng.BelowInt(4);
  const int vocab = 2 + rng.BelowInt(7);
  ParameterStore s;
  LinearParams head = AddLinear(s, "head", 2 * hid, vocab);
  FillUniform(head.w->value, 1.0, rng);
  FillUniform(head.b->value, 1.0, rng);
  Parameter& h = AddRandom(s, "h", hid, 1, rng);
  Parameter& c = AddRandom(s, "c", hid, 1, rng);
  const Vector r = RandomVector(vocab, rng);
  auto fwd = [&] { return r.dot(OutputDistribution(head, h.value.col(0), c.value.col(0))); };
  auto fb = [&] {
    Vector z(2 * hid);
    z << h.value.col(0), c.value.col(0);
    const Vector p = Softmax(LinearForward(head, z));
    const Vector dz = LinearBackward(head, z, SoftmaxBackward(p, r));
    h.Grad().col(0) += dz.head(hid);
    c.Grad().col(0) += dz.tail(hid);
  };
  return CheckGradients(s, fwd, fb);
}

double NllDraw(SplitMix64& rng) {
  const int vocab = 2 + rng.BelowInt(7);
  const int m = 1 + rng.BelowInt(4);
  ParameterStore s;
  std::vector<Parameter*> ps;
  std::vector<int> targets;
  for (int k = 0; k < m; ++k) {
    Parameter& p = s.Add("d" + std::to_string(k), vocab, 1);
    for (int i = 0; i < vocab; ++i) p.value(i, 0) = rng.Uniform(0.2, 1.0);
    ps.push_back(&p);
    targets.push_back(rng.BelowInt(vocab));
  }
  auto dists = [&] {
    std::vector<Vector> d;
    for (Parameter* p : ps) d.push_back(p->value.col(0));
    return d;
  };
  auto fwd = [&] { return NllLoss(dists(), targets); };
  auto fb = [&] {
    std::vector<Vector> grads;
    NllLoss(dists(), targets, &grads);
    for (int k = 0; k < m; ++k) ps[k]->Grad().col(0) += grads[k];
  };
  return CheckGradients(s, fwd, fb);
}

double SoftmaxNllDraw(SplitMix64& rng) {
  const int vocab = 2 + rng.BelowInt(9);
  ParameterStore s;
  Parameter& logits = AddRandom(s, "logits", vocab, 1, rng, 3.0);
  const int target = rng.BelowInt(vocab);
  auto fwd = [&] { return SoftmaxNll(logits.value.col(0), target); };
  auto fb = [&] {
    Vector d;
    SoftmaxNll(logits.value.col(0), target, &d);
    logits.Grad().col(0) += d;
  };
  return CheckGradients(s, fwd, fb);
}

}  // namespace

std::vector<OpGradCheck> CoreGradientChecks(int draws, std::uint64_t seed) {
  struct Entry {
    const char* name;
    double (*draw)(SplitMix64&);
  };
  const Entry entries[] = {{"recurrent_step", LstmDraw},   {"recurrent_unroll", EncoderDraw},
                           {"attention", AttentionDraw},   {"output_distribution", OutputHeadDraw},
                           {"nll_loss", NllDraw},          {"softmax_nll", SoftmaxNllDraw}};
  std::vector<OpGradCheck> out;
  for (const Entry& e : entries) {
    SplitMix64 rng(DeriveSeed(seed, e.name));
    OpGradCheck r{e.name, draws, 0.0};
    for (int d = 0; d < draws; ++d) r.max_rel_error = std::max(r.max_rel_error, e.draw(rng));
    out.push_back(r);
  }
  return out;
}

}  // namespace gotext::nn
