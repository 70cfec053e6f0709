/*
 * Copyright 2026 The dagflow Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "dagflow/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "dagflow/errors.hpp"

namespace dagflow::ad {

namespace {

std::size_t element_count(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(element_count(shape_), fill) {
  if (shape_.size() > 3) throw invalid_argument("Tensor: rank above 3 is not supported");
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.size() > 3) throw invalid_argument("Tensor: rank above 3 is not supported");
  if (data_.size() != element_count(shape_)) {
    throw invalid_argument("Tensor: data length " + std::to_string(data_.size()) +
                           " does not match shape " + shape_string());
  }
}

Tensor Tensor::from_matrix(const DenseMatrix& m) {
  auto d = m.data();
  return Tensor({m.rows(), m.cols()}, std::vector<double>(d.begin(), d.end()));
}

Tensor Tensor::vector(std::vector<double> v) {
  const std::size_t n = v.size();
  return Tensor({n}, std::move(v));
}

double Tensor::item() const {
  if (data_.size() != 1) throw invalid_argument("Tensor::item: tensor has " +
                                                std::to_string(data_.size()) + " elements");
  return data_[0];
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

DenseMatrix Tensor::to_matrix() const {
  if (rank() == 1) return DenseMatrix(1, shape_[0], data_);
  if (rank() != 2) throw invalid_argument("Tensor::to_matrix: rank " + std::to_string(rank()));
  return DenseMatrix(shape_[0], shape_[1], data_);
}

DenseMatrix Tensor::batch_item(std::size_t b) const {
  if (rank() != 3) throw invalid_argument("Tensor::batch_item: expected rank 3");
  const std::size_t p = shape_[1];
  const std::size_t q = shape_[2];
  auto first = data_.begin() + static_cast<std::ptrdiff_t>(b * p * q);
  return DenseMatrix(p, q, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(p * q)));
}

std::string Tensor::shape_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

}  // namespace dagflow::ad
