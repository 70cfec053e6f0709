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

#include "dagflow/dag_constraint.hpp"

#include <cmath>
#include <string>

#include "dagflow/errors.hpp"

namespace dagflow {

namespace {

double resolve_alpha(double alpha, std::size_t d) {
  return alpha > 0.0 ? alpha : 1.0 / static_cast<double>(d);
}

}  // namespace

WeightedAdjacency::WeightedAdjacency(DenseMatrix w) : w_(std::move(w)) {
  if (!w_.is_square()) throw invalid_argument("WeightedAdjacency: matrix must be square");
  for (std::size_t i = 0; i < w_.rows(); ++i) {
    if (w_(i, i) != 0.0) throw invalid_argument("WeightedAdjacency: diagonal must be zero");
    for (std::size_t j = 0; j < w_.cols(); ++j) {
      if (!std::isfinite(w_(i, j)) || w_(i, j) < 0.0) {
        throw invalid_argument("WeightedAdjacency: entries must be finite and nonnegative");
      }
    }
  }
}

WeightedAdjacency jacobian_to_adjacency(const std::vector<DenseMatrix>& jacobians) {
  if (jacobians.empty()) throw invalid_argument("jacobian_to_adjacency: empty batch");
  const std::size_t d = jacobians.front().rows();
  DenseMatrix sq(d, d);
  for (const DenseMatrix& j : jacobians) {
    if (j.rows() != d || j.cols() != d) throw invalid_argument("jacobian_to_adjacency: shape mismatch");
    for (std::size_t i = 0; i < d * d; ++i) sq.data()[i] += j.data()[i] * j.data()[i];
  }
  const double n = static_cast<double>(jacobians.size());
  const double root_eps = std::sqrt(kAdjacencyEps);
  DenseMatrix w(d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j)
      if (k != j) w(k, j) = std::sqrt(sq(k, j) / n + kAdjacencyEps) - root_eps;
  return WeightedAdjacency(std::move(w));
}

ad::Var jacobian_to_adjacency(ad::Var jacobians) { return ad::rms_offdiag(jacobians, kAdjacencyEps); }

double h_exp(const DenseMatrix& w) {
  return trace(matrix_exp(hadamard(w, w))) - static_cast<double>(w.rows());
}

double h_exp(const WeightedAdjacency& w) { return h_exp(w.matrix()); }

DenseMatrix h_exp_grad(const DenseMatrix& w) {
  return hadamard(transpose(matrix_exp(hadamard(w, w))), scale(w, 2.0));
}

DenseMatrix h_exp_grad(const WeightedAdjacency& w) { return h_exp_grad(w.matrix()); }

ad::Var h_exp(ad::Var w) {
  const double d = static_cast<double>(w.shape().at(0));
  return ad::add_scalar(ad::trace(ad::matrix_exp(ad::mul(w, w))), -d);
}

double h_poly(const DenseMatrix& w, double alpha) {
  if (!(alpha > 0.0)) throw invalid_argument("h_poly: alpha must be > 0");
  return matrix_power_trace(hadamard(w, w), alpha, w.rows()) - static_cast<double>(w.rows());
}

double h_poly(const WeightedAdjacency& w, double alpha) { return h_poly(w.matrix(), alpha); }

ad::Var h_poly(ad::Var w, double alpha) {
  if (!(alpha > 0.0)) throw invalid_argument("h_poly: alpha must be > 0");
  const std::size_t d = w.shape().at(0);
  ad::Tape& tape = w.tape();
  ad::Var base = ad::add(tape.constant(ad::Tensor::from_matrix(DenseMatrix::identity(d))),
                         ad::scale(ad::mul(w, w), alpha));
  ad::Var acc = base;
  for (std::size_t k = 1; k < d; ++k) acc = ad::matmul(acc, base);
  return ad::add_scalar(ad::trace(acc), -static_cast<double>(d));
}

double acyclicity(const DenseMatrix& w, ConstraintForm form, double poly_alpha) {
  if (form == ConstraintForm::kExp) return h_exp(w);
  return h_poly(w, resolve_alpha(poly_alpha, w.rows()));
}

ad::Var acyclicity(ad::Var w, ConstraintForm form, double poly_alpha) {
  if (form == ConstraintForm::kExp) return h_exp(w);
  return h_poly(w, resolve_alpha(poly_alpha, w.shape().at(0)));
}

}  // namespace dagflow
