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

#include <cmath>
#include <numbers>
#include <string>

#include "dagflow/errors.hpp"
#include "dagflow/made.hpp"

namespace dagflow {

FlowModel::FlowModel(std::vector<MadeBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw invalid_argument("FlowModel: need at least one block");
  for (const MadeBlock& b : blocks_)
    if (b.dim() != blocks_.front().dim()) throw invalid_argument("FlowModel: block dimension mismatch");
}

FlowModel FlowModel::create(std::size_t d, const FlowConfig& config, std::uint64_t seed) {
  const auto orderings = stack_orderings(config.num_blocks, d);
  std::mt19937_64 rng(seed);
  std::vector<MadeBlock> blocks;
  blocks.reserve(config.num_blocks);
  for (std::size_t k = 0; k < config.num_blocks; ++k) {
    MadeBlock block(build_masks(d, config.hidden_sizes, orderings[k], seed + k), config.alpha_clamp);
    block.initialize(rng);
    blocks.push_back(std::move(block));
  }
  return FlowModel(std::move(blocks));
}

std::size_t FlowModel::num_parameters() const {
  std::size_t n = 0;
  for (const MadeBlock& b : blocks_)
    for (const ad::Tensor& p : b.params()) n += p.size();
  return n;
}

bool operator==(const FlowModel& a, const FlowModel& b) {
  if (a.blocks_.size() != b.blocks_.size()) return false;
  for (std::size_t k = 0; k < a.blocks_.size(); ++k) {
    const MadeBlock& x = a.blocks_[k];
    const MadeBlock& y = b.blocks_[k];
    if (x.alpha_clamp() != y.alpha_clamp() || x.masks().ordering != y.masks().ordering ||
        x.masks().hidden_degrees != y.masks().hidden_degrees || x.masks().masks != y.masks().masks ||
        x.params() != y.params()) {
      return false;
    }
  }
  return true;
}

std::vector<std::vector<ad::Var>> register_params(ad::Tape& tape, const FlowModel& flow,
                                                  bool requires_grad) {
  std::vector<std::vector<ad::Var>> out;
  out.reserve(flow.num_blocks());
  for (const MadeBlock& b : flow.blocks()) out.push_back(register_params(tape, b, requires_grad));
  return out;
}

FlowTrace trace_flow(const FlowModel& flow, const std::vector<std::vector<ad::Var>>& params,
                     ad::Var x) {
  FlowTrace trace;
  ad::Var h = x;
  ad::Var neg_alpha_total;
  for (std::size_t k = 0; k < flow.num_blocks(); ++k) {
    try {
      BlockTrace bt = trace_block_inverse(flow.blocks()[k], params[k], h);
      ad::Var alpha_sum = ad::sum(bt.alpha);
      neg_alpha_total = neg_alpha_total.valid() ? ad::add(neg_alpha_total, alpha_sum) : alpha_sum;
      h = bt.noise;
      trace.blocks.push_back(std::move(bt));
    } catch (const Error& e) {
      throw Error(e.category(), "flow block " + std::to_string(k) + ": " + e.what());
    }
  }
  trace.noise = h;
  // sum_b [ sum_j log q(N_bj) - sum_blocks sum_j alpha_bj ]
  trace.total_log_density = ad::sub(ad::sum(ad::gaussian_logpdf(h)), neg_alpha_total);
  return trace;
}

ad::Var flow_input_jacobian(const FlowTrace& trace, std::size_t rows) {
  ad::Var total = block_input_jacobian(trace.blocks.front(), rows);
  for (std::size_t k = 1; k < trace.blocks.size(); ++k) {
    total = ad::batched_matmul(total, block_input_jacobian(trace.blocks[k], rows));
  }
  return total;
}

std::vector<double> flow_log_density(const FlowModel& flow, const DenseMatrix& x) {
  if (x.cols() != flow.dim()) throw invalid_argument("flow_log_density: wrong column count");
  static const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
  ad::Tape tape;
  auto params = register_params(tape, flow, false);
  FlowTrace trace = trace_flow(flow, params, tape.constant(ad::Tensor::from_matrix(x)));
  const std::size_t d = x.cols();
  std::vector<double> out(x.rows(), 0.0);
  const ad::Tensor& n = trace.noise.value();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double lp = 0.0;
    for (std::size_t j = 0; j < d; ++j) lp += -0.5 * n[i * d + j] * n[i * d + j] - kHalfLog2Pi;
    for (const BlockTrace& bt : trace.blocks) {
      const ad::Tensor& alpha = bt.alpha.value();
      for (std::size_t j = 0; j < d; ++j) lp -= alpha[i * d + j];
    }
    out[i] = lp;
  }
  return out;
}

double flow_log_likelihood(const FlowModel& flow, const DenseMatrix& x) {
  if (x.rows() == 0) throw invalid_argument("flow_log_likelihood: empty batch");
  const auto lp = flow_log_density(flow, x);
  double s = 0.0;
  for (double v : lp) s += v;
  return s / static_cast<double>(lp.size());
}

DenseMatrix flow_inverse(const FlowModel& flow, const DenseMatrix& x) {
  DenseMatrix h = x;
  for (const MadeBlock& b : flow.blocks()) h = block_inverse(b, h).noise;
  return h;
}

DenseMatrix flow_forward(const FlowModel& flow, const DenseMatrix& noise) {
  DenseMatrix h = noise;
  for (std::size_t k = flow.num_blocks(); k-- > 0;) h = block_forward(flow.blocks()[k], h);
  return h;
}

std::vector<DenseMatrix> flow_jacobians(const FlowModel& flow, const DenseMatrix& x) {
  ad::Tape tape;
  auto params = register_params(tape, flow, false);
  FlowTrace trace = trace_flow(flow, params, tape.constant(ad::Tensor::from_matrix(x)));
  ad::Var jac = flow_input_jacobian(trace, x.rows());
  std::vector<DenseMatrix> out;
  out.reserve(x.rows());
  for (std::size_t b = 0; b < x.rows(); ++b) out.push_back(jac.value().batch_item(b));
  return out;
}

}  // namespace dagflow
