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

#ifndef GOTEXT_NN_TENSOR_H_
#define GOTEXT_NN_TENSOR_H_

#include <Eigen/Dense>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gotext/engine/rng.h"

namespace gotext::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingGradient : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A named trainable matrix. Vectors are stored as one column. The gradient
// is allocated on first use.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  bool trainable = true;

  Matrix& Grad() {
    if (grad.size() == 0) grad = Matrix::Zero(value.rows(), value.cols());
    return grad;
  }
  bool has_grad() const { return grad.size() != 0; }
};

// Owns parameters in creation order; references stay valid.
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;

  Parameter& Add(const std::string& name, Eigen::Index rows, Eigen::Index cols = 1);
  Parameter& Get(const std::string& name);
  const Parameter& Get(const std::string& name) const;
  bool Contains(const std::string& name) const { return index_.count(name) != 0; }

  std::vector<Parameter*> All();
  std::vector<const Parameter*> All() const;
  std::size_t size() const { return params_.size(); }
  std::size_t ScalarCount() const;

  void ZeroGrad();
  double GradNorm() const;
  // Scales all gradients so their global norm is at most `max_norm`.
  // Returns the norm before clipping.
  double ClipGradNorm(double max_norm);

  // Copies values from `other` for every parameter name both share.
  void CopyValuesFrom(const ParameterStore& other);

 private:
  std::deque<Parameter> params_;
  std::map<std::string, std::size_t> index_;
};

// Uniform(-scale, scale) fill.
void FillUniform(Matrix& m, double scale, SplitMix64& rng);

}  // namespace gotext::nn

#endif  // GOTEXT_NN_TENSOR_H_
