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

#ifndef GOTEXT_NN_GRADCHECK_H_
#define GOTEXT_NN_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gotext/nn/tensor.h"

namespace gotext::nn {

inline constexpr double kGradCheckEps = 1e-5;
inline constexpr double kGradCheckTolerance = 1e-4;
// Denominator floor so that near-zero gradients are compared absolutely.
inline constexpr double kGradCheckFloor = 1e-5;

double RelativeError(double analytic, double numeric);

// Zeroes gradients, calls `forward_backward` to fill them, then compares
// every scalar of every parameter in `store` against central differences of
// `forward`. Returns the largest relative error.
double CheckGradients(ParameterStore& store, const std::function<double()>& forward,
                      const std::function<void()>& forward_backward, double eps = kGradCheckEps);

struct OpGradCheck {
  std::string op;
  int draws = 0;
  double max_rel_error = 0;

  bool passed(double tol = kGradCheckTolerance) const { return max_rel_error < tol; }
};

// Randomized checks for the recurrent step, attention, output head, the two
// losses and an unrolled encoder. Each op gets `draws` random draws.
std::vector<OpGradCheck> CoreGradientChecks(int draws, std::uint64_t seed);

// Softmax Jacobian-vector product: dlogits given p = softmax(logits) and dp.
Vector SoftmaxBackward(const Vector& p, const Vector& dp);

}  // namespace gotext::nn

#endif  // GOTEXT_NN_GRADCHECK_H_
