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

#ifndef GOTEXT_NN_ADAM_H_
#define GOTEXT_NN_ADAM_H_

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"
#include "gotext/nn/tensor.h"

namespace gotext::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Global gradient-norm clip; <= 0 disables.
  double clip = 5.0;
};

nlohmann::json AdamConfigToJson(const AdamConfig& c);

class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  // Clips, then updates every trainable parameter that has a gradient.
  // Throws MissingGradient if none has one.
  void Step(ParameterStore& store);

  std::int64_t steps() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  struct Moments {
    Matrix m, v;
  };
  AdamConfig config_;
  std::int64_t t_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace gotext::nn

#endif  // GOTEXT_NN_ADAM_H_
