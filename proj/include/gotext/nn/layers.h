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

#ifndef GOTEXT_NN_LAYERS_H_
#define GOTEXT_NN_LAYERS_H_

#include <string>
#include <vector>

#include "gotext/engine/rng.h"
#include "gotext/nn/tensor.h"

namespace gotext::nn {

// ---- LSTM cell -----------------------------------------------------------
// Gate rows are stacked in the order input, forget, candidate, output:
//   [i; f; g; o] = Wx x + Wh h_prev + b
//   c = sig(f) * c_prev + sig(i) * tanh(g),  h = sig(o) * tanh(c)
struct LstmParams {
  Parameter* wx = nullptr;  // [4h, input]
  Parameter* wh = nullptr;  // [4h, h]
  Parameter* b = nullptr;   // [4h, 1]
  int input = 0;
  int hidden = 0;
};

LstmParams AddLstm(ParameterStore& store, const std::string& prefix, int input, int hidden);
// Binds to parameters that already exist in `store`.
LstmParams FindLstm(ParameterStore& store, const std::string& prefix);
// Uniform(+-1/sqrt(hidden)) weights, zero bias, forget bias 1.
void InitLstm(const LstmParams& p, SplitMix64& rng);

struct LstmCache {
  Vector x, h_prev, c_prev;
  Vector i, f, g, o;  // activated gates
  Vector c, tanh_c;
};

struct LstmState {
  Vector h, c;
};

LstmState LstmStep(const LstmParams& p, const Vector& x, const Vector& h_prev, const Vector& c_prev,
                   LstmCache* cache = nullptr);

struct LstmStepGrads {
  Vector dx, dh_prev, dc_prev;
};

// `dh` and `dc` are gradients w.r.t. this step's outputs. Parameter
// gradients are accumulated.
LstmStepGrads LstmStepBackward(const LstmParams& p, const LstmCache& cache, const Vector& dh,
                               const Vector& dc);

// ---- Dot-product attention -----------------------------------------------
// scores = H h_dec, a = softmax(scores), c = H^T a. H is [len, hidden].
struct AttentionCache {
  Vector weights;
};

Vector Attention(const Vector& h_dec, const Matrix& H, AttentionCache* cache = nullptr);

// Accumulates into dh_dec and dH.
void AttentionBackward(const Vector& h_dec, const Matrix& H, const AttentionCache& cache,
                       const Vector& dc, Vector& dh_dec, Matrix& dH);

// ---- Linear head ---------------------------------------------------------
// y = W^T z + b with W stored [in, out].
struct LinearParams {
  Parameter* w = nullptr;
  Parameter* b = nullptr;
  int in = 0;
  int out = 0;
};

LinearParams AddLinear(ParameterStore& store, const std::string& prefix, int in, int out);
LinearParams FindLinear(ParameterStore& store, const std::string& prefix);
void InitLinear(const LinearParams& p, SplitMix64& rng);

Vector LinearForward(const LinearParams& p, const Vector& z);
// Accumulates parameter gradients; returns dz.
Vector LinearBackward(const LinearParams& p, const Vector& z, const Vector& dy);

// ---- Softmax and losses --------------------------------------------------
Vector Softmax(const Vector& logits);
Vector LogSoftmax(const Vector& logits);

// Softmax(W [h; c] + b).
Vector OutputDistribution(const LinearParams& head, const Vector& h_dec, const Vector& c);

// -sum_k log dists[k][targets[k]]. Optional gradient w.r.t. each dist.
double NllLoss(const std::vector<Vector>& dists, const std::vector<int>& targets,
               std::vector<Vector>* grads = nullptr);

// -log softmax(logits)[target] with gradient softmax - onehot.
double SoftmaxNll(const Vector& logits, int target, Vector* dlogits = nullptr);

// ---- Embedding -----------------------------------------------------------
// Table is [|V|, d].
inline Vector EmbeddingRow(const Parameter& table, int id) { return table.value.row(id).transpose(); }
inline void EmbeddingBackward(Parameter& table, int id, const Vector& d) {
  if (table.trainable) table.Grad().row(id) += d.transpose();
}

// Mean over rows of H.
Vector MeanPool(const Matrix& H);

// Stack of column vectors into a [n, d] matrix.
Matrix StackRows(const std::vector<Vector>& rows);

}  // namespace gotext::nn

#endif  // GOTEXT_NN_LAYERS_H_
