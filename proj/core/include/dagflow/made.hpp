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
#include <cstdint>
#include <random>
#include <vector>

#include "dagflow/linalg.hpp"
#include "dagflow/ops.hpp"
#include "dagflow/tensor.hpp"

namespace dagflow {

// Connectivity masks of one MADE network.
//
// `ordering` lists variable indices (0-based) from first to last; variable
// ordering[i] gets degree i + 1. Hidden units carry degrees in 1..d-1. The
// masks are
//   input -> hidden   : deg(hidden) >= deg(input)
//   hidden -> hidden  : deg(next) >= deg(prev)
//   hidden -> output  : deg(output) > deg(hidden)
// so output j sees only inputs that precede j in the ordering.
struct MaskSet {
  std::size_t dim = 0;
  std::vector<std::size_t> ordering;
  std::vector<int> variable_degrees;
  std::vector<std::vector<int>> hidden_degrees;
  // hidden_sizes.size() + 1 masks; mask l has shape (fan_in x fan_out).
  std::vector<DenseMatrix> masks;

  std::size_t num_hidden_layers() const { return hidden_degrees.size(); }
  const DenseMatrix& output_mask() const { return masks.back(); }
};

enum class DegreeMode { kBalanced, kRandom };

// Hidden degrees are assigned in contiguous runs (unit u of a layer with H
// units gets 1 + floor(u * (d - 1) / H)), which reproduces the classic
// three-input picture with degrees (1, 1, 2, 2). kRandom draws degrees from
// `seed` instead.
MaskSet build_masks(std::size_t d, const std::vector<std::size_t>& hidden_sizes,
                    const std::vector<std::size_t>& ordering, std::uint64_t seed = 0,
                    DegreeMode mode = DegreeMode::kBalanced);

// Boolean product of all masks, shape d x d: entry (k, j) is 1 iff output j
// has a path from input k.
DenseMatrix mask_connectivity(const MaskSet& masks);

// Block k uses the natural order when k is even and the reversed order when k
// is odd.
std::vector<std::vector<std::size_t>> stack_orderings(std::size_t num_blocks, std::size_t d);

// One Gaussian-conditional MADE block. A shared ReLU trunk feeds two masked
// heads producing mu(x) and alpha(x); alpha is squashed as
// clamp * tanh(raw / clamp) before use.
//
// Parameter layout in params(): for each hidden layer l, (weight_l, bias_l);
// then (mu_weight, mu_bias, alpha_weight, alpha_bias). Weights have shape
// (fan_in x fan_out) and are applied as x * (W o mask) + b.
class MadeBlock {
 public:
  MadeBlock() = default;
  MadeBlock(MaskSet masks, double alpha_clamp);

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) on unmasked weights and biases.
  void initialize(std::mt19937_64& rng);

  std::size_t dim() const noexcept { return masks_.dim; }
  const MaskSet& masks() const noexcept { return masks_; }
  double alpha_clamp() const noexcept { return alpha_clamp_; }

  std::vector<ad::Tensor>& params() noexcept { return params_; }
  const std::vector<ad::Tensor>& params() const noexcept { return params_; }
  std::size_t mu_weight_index() const { return 2 * masks_.num_hidden_layers(); }
  std::size_t alpha_weight_index() const { return 2 * masks_.num_hidden_layers() + 2; }

  // Mask matching params()[i] for weight tensors, nullptr for biases.
  const DenseMatrix* mask_for_param(std::size_t i) const;

  // Re-zero every masked weight entry.
  void apply_masks();

 private:
  MaskSet masks_;
  double alpha_clamp_ = 8.0;
  std::vector<ad::Tensor> params_;
};

// Intermediates of one block's inverse pass recorded on a tape.
struct BlockTrace {
  ad::Var input;                      // x  [m, d]
  std::vector<ad::Var> trunk_weights;  // masked weights  [fan_in, fan_out]
  std::vector<ad::Var> relu_active;    // constant 0/1 indicators  [m, H_l]
  ad::Var mu_weight;                   // masked heads  [H_L, d]
  ad::Var alpha_weight;
  ad::Var mu;                          // [m, d]
  ad::Var alpha;                       // clamped  [m, d]
  ad::Var inv_scale;                   // exp(-alpha)  [m, d]
  ad::Var noise;                       // n  [m, d]
  double alpha_clamp = 8.0;
  ad::IndexPairs dependency_pairs;     // (k, j) with deg(k) < deg(j)
};

// Parameters of `block` registered as tape leaves.
std::vector<ad::Var> register_params(ad::Tape& tape, const MadeBlock& block, bool requires_grad);

// n = (x - mu(x)) o exp(-alpha(x)), recorded on the tape.
BlockTrace trace_block_inverse(const MadeBlock& block, const std::vector<ad::Var>& params,
                               ad::Var x);

// Per-sample Jacobians of the block inverse on the first `rows` samples, as a
// [rows, d, d] tensor with entry (b, k, j) = dN_j / dX_k. Assembled as
// (I - A_1 R_1 ... A_L R_L (B_mu + B_alpha diag(c))) diag(exp(-alpha)) with
// c = (x - mu) o dalpha/draw, so parameter gradients flow through it.
ad::Var block_input_jacobian(const BlockTrace& trace, std::size_t rows);

struct BlockInverseResult {
  DenseMatrix noise;
  std::vector<double> logdet;  // per sample, -sum_j alpha_j(x)
};

BlockInverseResult block_inverse(const MadeBlock& block, const DenseMatrix& x);

// Sequential generation, one variable per pass in the block's ordering:
// x_j = n_j exp(alpha_j(x_<j)) + mu_j(x_<j).
DenseMatrix block_forward(const MadeBlock& block, const DenseMatrix& noise);

// Per-sample analytic Jacobians of the block inverse (no gradient tracking).
std::vector<DenseMatrix> block_jacobians(const MadeBlock& block, const DenseMatrix& x);

struct FlowConfig {
  std::size_t num_blocks = 6;
  std::vector<std::size_t> hidden_sizes{100};
  double alpha_clamp = 8.0;
};

// Stack of MADE blocks. Block 0 is applied first on the way from data X to
// noise N; block orderings alternate as in stack_orderings().
class FlowModel {
 public:
  FlowModel() = default;
  explicit FlowModel(std::vector<MadeBlock> blocks);

  static FlowModel create(std::size_t d, const FlowConfig& config, std::uint64_t seed);

  std::size_t dim() const noexcept { return blocks_.empty() ? 0 : blocks_.front().dim(); }
  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  std::vector<MadeBlock>& blocks() noexcept { return blocks_; }
  const std::vector<MadeBlock>& blocks() const noexcept { return blocks_; }
  std::size_t num_parameters() const;

  friend bool operator==(const FlowModel& a, const FlowModel& b);

 private:
  std::vector<MadeBlock> blocks_;
};

// Tape-recorded pass of a whole flow.
struct FlowTrace {
  std::vector<BlockTrace> blocks;
  ad::Var noise;
  // Sum over samples of log q(N) + log|det dN/dX|.
  ad::Var total_log_density;
};

std::vector<std::vector<ad::Var>> register_params(ad::Tape& tape, const FlowModel& flow,
                                                  bool requires_grad);

// Throws a numerical error naming the block when a block produces a
// non-finite value.
FlowTrace trace_flow(const FlowModel& flow, const std::vector<std::vector<ad::Var>>& params,
                     ad::Var x);

// Composed Jacobians dN/dX on the first `rows` samples, [rows, d, d], entry
// (b, k, j) = dN_j / dX_k. The product runs in flow order.
ad::Var flow_input_jacobian(const FlowTrace& trace, std::size_t rows);

// Mean over rows of log p(x) under the flow with a standard normal base.
double flow_log_likelihood(const FlowModel& flow, const DenseMatrix& x);
// Per-sample log p(x).
std::vector<double> flow_log_density(const FlowModel& flow, const DenseMatrix& x);

DenseMatrix flow_inverse(const FlowModel& flow, const DenseMatrix& x);
DenseMatrix flow_forward(const FlowModel& flow, const DenseMatrix& noise);
std::vector<DenseMatrix> flow_jacobians(const FlowModel& flow, const DenseMatrix& x);

}  // namespace dagflow
