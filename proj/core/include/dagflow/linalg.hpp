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

#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

namespace dagflow {

// Row-major dense real matrix. Every public operation below rejects
// non-finite input where it matters and never produces NaN/Inf from finite
// input in its documented domain.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const double& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }
  std::span<double> row(std::size_t r) { return std::span<double>(data_).subspan(r * cols_, cols_); }

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double factor);
double trace(const DenseMatrix& a);

// Induced 1-norm (max column sum of absolute values).
double norm_one(const DenseMatrix& a);

// e^A by scaling and squaring around a truncated Taylor series. The scaled
// matrix has 1-norm at most 1/2 and the series is summed until the next term
// is below 1e-17 relative to the partial sum.
DenseMatrix matrix_exp(const DenseMatrix& a);

// tr[(I + alpha * a)^power] by repeated multiplication. `a` is expected to be
// an elementwise square (nonnegative); `power` is normally the dimension.
double matrix_power_trace(const DenseMatrix& a, double alpha, std::size_t power);

// Lower-triangular L with L * L^T == a. Throws a numerical error if `a` is
// not positive definite.
DenseMatrix cholesky_lower(const DenseMatrix& a);

// Fixture text format: "rows cols" on the first line, then whitespace
// separated values in row-major order.
DenseMatrix read_matrix_text(std::istream& in);
void write_matrix_text(std::ostream& out, const DenseMatrix& m);

}  // namespace dagflow
