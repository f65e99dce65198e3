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

#include "gotext/nn/tensor.h"

#include <cmath>

namespace gotext::nn {

Parameter& ParameterStore::Add(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  if (index_.count(name)) throw std::invalid_argument("duplicate parameter " + name);
  if (rows <= 0 || cols <= 0) throw ShapeMismatch("parameter " + name + " needs a positive shape");
  index_.emplace(name, params_.size());
  Parameter& p = params_.emplace_back();
  p.name = name;
  p.value = Matrix::Zero(rows, cols);
  return p;
}

Parameter& ParameterStore::Get(const std::string& name) {
  const auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("no parameter " + name);
  return params_[it->second];
}

const Parameter& ParameterStore::Get(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("no parameter " + name);
  return params_[it->second];
}

std::vector<Parameter*> ParameterStore::All() {
  std::vector<Parameter*> out;
  for (Parameter& p : params_) out.push_back(&p);
  return out;
}

std::vector<const Parameter*> ParameterStore::All() const {
  std::vector<const Parameter*> out;
  for (const Parameter& p : params_) out.push_back(&p);
  return out;
}

std::size_t ParameterStore::ScalarCount() const {
  std::size_t n = 0;
  for (const Parameter& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

void ParameterStore::ZeroGrad() {
  for (Parameter& p : params_) {
    if (p.has_grad()) p.grad.setZero();
  }
}

double ParameterStore::GradNorm() const {
  double sq = 0;
  for (const Parameter& p : params_) {
    if (p.trainable && p.has_grad()) sq += p.grad.squaredNorm();
  }
  return std::sqrt(sq);
}

double ParameterStore::ClipGradNorm(double max_norm) {
  const double norm = GradNorm();
  if (norm > max_norm && norm > 0) {
    const double scale = max_norm / norm;
    for (Parameter& p : params_) {
      if (p.trainable && p.has_grad()) p.grad *= scale;
    }
  }
  return norm;
}

void ParameterStore::CopyValuesFrom(const ParameterStore& other) {
  for (Parameter& p : params_) {
    if (!other.Contains(p.name)) continue;
    const Parameter& q = other.Get(p.name);
    if (q.value.rows() != p.value.rows() || q.value.cols() != p.value.cols()) {
      throw ShapeMismatch("shape mismatch copying " + p.name);
    }
    p.value = q.value;
  }
}

void FillUniform(Matrix& m, double scale, SplitMix64& rng) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.Uniform(-scale, scale);
  }
}

}  // namespace gotext::nn
