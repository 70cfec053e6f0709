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

#include "dagflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "dagflow/errors.hpp"
#include "gemm.hpp"

namespace dagflow {

namespace {

std::string shape_str(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw invalid_argument(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " +
                           shape_str(b));
  }
}

void require_square(const DenseMatrix& a, const char* op) {
  if (!a.is_square()) {
    throw invalid_argument(std::string(op) + ": expected a square matrix, got " + shape_str(a));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw invalid_argument("DenseMatrix: data length " + std::to_string(data_.size()) +
                           " does not match " + std::to_string(rows) + "x" +
                           std::to_string(cols));
  }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw invalid_argument("DenseMatrix: ragged initializer list");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double DenseMatrix::max_abs() const noexcept {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw invalid_argument("matmul: inner dimension mismatch " + shape_str(a) + " * " +
                           shape_str(b));
  }
  DenseMatrix out(a.rows(), b.cols());
  detail::gemm(a.data().data(), false, b.data().data(), false, out.data().data(), a.rows(), b.cols(),
               a.cols(), false);
  return out;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "hadamard");
  DenseMatrix out(a.rows(), a.cols());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
  return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "add");
  DenseMatrix out = a;
  auto o = out.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += y[i];
  return out;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "subtract");
  DenseMatrix out = a;
  auto o = out.data();
  auto y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= y[i];
  return out;
}

DenseMatrix scale(const DenseMatrix& a, double factor) {
  DenseMatrix out = a;
  for (double& v : out.data()) v *= factor;
  return out;
}

double trace(const DenseMatrix& a) {
  require_square(a, "trace");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double norm_one(const DenseMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

DenseMatrix matrix_exp(const DenseMatrix& a) {
  require_square(a, "matrix_exp");
  if (!a.all_finite()) throw numerical_error("matrix_exp: non-finite input");
  const std::size_t n = a.rows();

  const double norm = norm_one(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const DenseMatrix scaled = scale(a, std::ldexp(1.0, -squarings));

  DenseMatrix sum = DenseMatrix::identity(n);
  DenseMatrix term = DenseMatrix::identity(n);
  for (int k = 1; k <= 64; ++k) {
    term = scale(matmul(term, scaled), 1.0 / k);
    sum = add(sum, term);
    if (norm_one(term) <= 1e-17 * norm_one(sum)) break;
  }
  for (int s = 0; s < squarings; ++s) sum = matmul(sum, sum);

  if (!sum.all_finite()) throw numerical_error("matrix_exp: result overflowed");
  return sum;
}

double matrix_power_trace(const DenseMatrix& a, double alpha, std::size_t power) {
  require_square(a, "matrix_power_trace");
  if (!(alpha > 0.0)) throw invalid_argument("matrix_power_trace: alpha must be > 0");
  const DenseMatrix base = add(DenseMatrix::identity(a.rows()), scale(a, alpha));
  DenseMatrix acc = DenseMatrix::identity(a.rows());
  for (std::size_t k = 0; k < power; ++k) acc = matmul(acc, base);
  return trace(acc);
}

DenseMatrix cholesky_lower(const DenseMatrix& a) {
  require_square(a, "cholesky_lower");
  const std::size_t n = a.rows();
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    const double* lj = &l(j, 0);
    for (std::size_t k = 0; k < j; ++k) diag -= lj[k] * lj[k];
    if (!(diag > 0.0)) {
      throw numerical_error("cholesky_lower: matrix is not positive definite at pivot " +
                            std::to_string(j));
    }
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      const double* li = &l(i, 0);
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      l(i, j) = s / ljj;
    }
  }
  return l;
}

DenseMatrix read_matrix_text(std::istream& in) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!(in >> rows >> cols)) throw Error(ErrorCategory::kParse, "matrix text: missing header");
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::string token;
    if (!(in >> token)) {
      throw Error(ErrorCategory::kParse,
                  "matrix text: expected " + std::to_string(data.size()) + " values, got " +
                      std::to_string(i));
    }
    std::size_t used = 0;
    try {
      data[i] = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw Error(ErrorCategory::kParse, "matrix text: bad number '" + token + "'");
    }
  }
  return DenseMatrix(rows, cols, std::move(data));
}

void write_matrix_text(std::ostream& out, const DenseMatrix& m) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace dagflow
