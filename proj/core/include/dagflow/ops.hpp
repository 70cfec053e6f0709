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
#include <utility>
#include <vector>

#include "dagflow/linalg.hpp"
#include "dagflow/tape.hpp"

// Differentiable primitives recorded on a Tape. Shapes must match exactly;
// the only broadcasts are the bias in affine(), the shared operand of the
// batched ops, and scalar constants.
namespace dagflow::ad {

// Elementwise.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var square(Var x);
Var exp(Var x);
Var tanh(Var x);
// Derivative at exactly 0 is taken as 0.
Var relu(Var x);
Var scale(Var x, double factor);
Var add_scalar(Var x, double c);
// -0.5 x^2 - 0.5 log(2 pi)
Var gaussian_logpdf(Var x);

// Reductions to a scalar.
Var sum(Var x);
Var mean(Var x);

// Rank-2 algebra.
Var matmul(Var a, Var b);
// x [m,p] . w [p,q] + bias [q]
Var affine(Var x, Var w, Var bias);
// w o mask for a constant 0/1 mask.
Var apply_mask(Var w, const DenseMatrix& mask);
// x . (w o mask) + bias
Var masked_affine(Var x, Var w, const DenseMatrix& mask, Var bias);
// First `count` rows of a rank-2 tensor.
Var slice_rows(Var x, std::size_t count);
Var trace(Var a);
Var matrix_exp(Var a);

// Batched matrix algebra. `m` below is the batch size.
//   scale_columns: M [p,q] or [m,p,q], s [m,q]  ->  M_b diag(s_b)  [m,p,q]
Var scale_columns(Var matrices, Var s);
//   batched_matmul: X [m,p,q] with Y [q,r] or [m,q,r]  ->  [m,p,r]
Var batched_matmul(Var x, Var y);
//   add_shared: X [m,p,q] + S [p,q]
Var add_shared(Var x, Var shared);
//   identity_minus: I - X_b for square X_b
Var identity_minus(Var x);

// Index pairs (row, col) into a d x d matrix.
using IndexPairs = std::vector<std::pair<std::size_t, std::size_t>>;
//   pair_outer: A [d,h], B [h,d] -> O [h,P] with O[u][p] = A[k_p][u] * B[u][j_p]
Var pair_outer(Var a, Var b, const IndexPairs& pairs);
//   gather_columns: X [m,q] -> [m,P] with column p = X[:, cols[p]]
Var gather_columns(Var x, const std::vector<std::size_t>& cols);
//   scatter_pairs: X [m,P] -> [m,d,d], entry (k_p, j_p) = X[:, p], zeros elsewhere
Var scatter_pairs(Var x, const IndexPairs& pairs, std::size_t d);
//   rms_offdiag: J [m,d,d] -> W [d,d] with
//   W[k][j] = sqrt(mean_b J_b[k][j]^2 + eps) - sqrt(eps) off the diagonal, 0 on it.
Var rms_offdiag(Var jacobians, double eps);

}  // namespace dagflow::ad
