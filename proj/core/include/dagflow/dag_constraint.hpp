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
#include <vector>

#include "dagflow/linalg.hpp"
#include "dagflow/ops.hpp"

namespace dagflow {

// Nonnegative d x d dependency strengths with a zero diagonal. Entry (k, j)
// is the strength of the candidate edge k -> j.
class WeightedAdjacency {
 public:
  WeightedAdjacency() = default;
  // Throws if `w` is not square, has a negative or non-finite entry, or a
  // nonzero diagonal.
  explicit WeightedAdjacency(DenseMatrix w);

  std::size_t dim() const noexcept { return w_.rows(); }
  const DenseMatrix& matrix() const noexcept { return w_; }
  double operator()(std::size_t k, std::size_t j) const { return w_(k, j); }

 private:
  DenseMatrix w_;
};

// Added inside the square root so the RMS stays differentiable at zero; the
// matching sqrt(eps) is subtracted so an exactly-zero column of Jacobian
// entries maps to an exactly-zero weight.
inline constexpr double kAdjacencyEps = 1e-12;

// W[k][j] = sqrt(mean_b (dN_j/dX_k)^2) over per-sample Jacobians, diagonal 0.
WeightedAdjacency jacobian_to_adjacency(const std::vector<DenseMatrix>& jacobians);
ad::Var jacobian_to_adjacency(ad::Var jacobians);

// tr(exp(W o W)) - d
double h_exp(const WeightedAdjacency& w);
double h_exp(const DenseMatrix& w);
// Closed form gradient (exp(W o W))^T o 2W.
DenseMatrix h_exp_grad(const DenseMatrix& w);
DenseMatrix h_exp_grad(const WeightedAdjacency& w);
// Recorded through hadamard, matrix_exp and trace primitives.
ad::Var h_exp(ad::Var w);

// tr[(I + alpha W o W)^d] - d, alpha > 0.
double h_poly(const WeightedAdjacency& w, double alpha);
double h_poly(const DenseMatrix& w, double alpha);
ad::Var h_poly(ad::Var w, double alpha);

enum class ConstraintForm { kExp, kPoly };

// Dispatches to h_exp or h_poly; alpha <= 0 selects the default 1/d.
double acyclicity(const DenseMatrix& w, ConstraintForm form, double poly_alpha = 0.0);
ad::Var acyclicity(ad::Var w, ConstraintForm form, double poly_alpha = 0.0);

}  // namespace dagflow
