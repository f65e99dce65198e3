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

#include "gotext/nn/adam.h"

#include <cmath>

namespace gotext::nn {

nlohmann::json AdamConfigToJson(const AdamConfig& c) {
  return {{"lr", c.lr}, {"beta1", c.beta1}, {"beta2", c.beta2}, {"eps", c.eps}, {"clip", c.clip}};
}

void Adam::Step(ParameterStore& store) {
  bool any = false;
  for (const Parameter* p : store.All()) any = any || (p->trainable && p->has_grad());
  if (!any) throw MissingGradient("adam step without gradients");
  if (config_.clip > 0) store.ClipGradNorm(config_.clip);

  ++t_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (Parameter* p : store.All()) {
    if (!p->trainable || !p->has_grad()) continue;
    Moments& mo = moments_[p->name];
    if (mo.m.size() == 0) {
      mo.m = Matrix::Zero(p->value.rows(), p->value.cols());
      mo.v = Matrix::Zero(p->value.rows(), p->value.cols());
    }
    mo.m = config_.beta1 * mo.m + (1.0 - config_.beta1) * p->grad;
    mo.v = config_.beta2 * mo.v + (1.0 - config_.beta2) * p->grad.cwiseAbs2();
    p->value.array() -= config_.lr * (mo.m.array() / bc1) /
                        ((mo.v.array() / bc2).sqrt() + config_.eps);
  }
}

}  // namespace gotext::nn
