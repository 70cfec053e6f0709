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
#include <string>

#include "dagflow/errors.hpp"
#include "dagflow/made.hpp"

namespace dagflow {

namespace {

ad::Tensor relu_indicator(const ad::Tensor& pre, std::size_t rows) {
  const std::size_t cols = pre.dim(1);
  ad::Tensor out({rows, cols});
  for (std::size_t i = 0; i < rows * cols; ++i) out[i] = pre[i] > 0.0 ? 1.0 : 0.0;
  return out;
}

ad::Tensor matrix_tensor(const DenseMatrix& m) { return ad::Tensor::from_matrix(m); }

}  // namespace

MadeBlock::MadeBlock(MaskSet masks, double alpha_clamp)
    : masks_(std::move(masks)), alpha_clamp_(alpha_clamp) {
  if (!(alpha_clamp_ > 0.0)) throw invalid_argument("MadeBlock: alpha clamp must be > 0");
  const std::size_t d = masks_.dim;
  for (std::size_t l = 0; l < masks_.num_hidden_layers(); ++l) {
    const DenseMatrix& m = masks_.masks[l];
    params_.emplace_back(std::vector<std::size_t>{m.rows(), m.cols()});
    params_.emplace_back(std::vector<std::size_t>{m.cols()});
  }
  const std::size_t last = masks_.hidden_degrees.back().size();
  for (int head = 0; head < 2; ++head) {
    params_.emplace_back(std::vector<std::size_t>{last, d});
    params_.emplace_back(std::vector<std::size_t>{d});
  }
}

const DenseMatrix* MadeBlock::mask_for_param(std::size_t i) const {
  if (i % 2 == 1) return nullptr;
  const std::size_t layers = masks_.num_hidden_layers();
  if (i / 2 < layers) return &masks_.masks[i / 2];
  return &masks_.output_mask();
}

void MadeBlock::initialize(std::mt19937_64& rng) {
  for (std::size_t i = 0; i < params_.size(); i += 2) {
    ad::Tensor& w = params_[i];
    ad::Tensor& b = params_[i + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.dim(0)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& v : w.data()) v = dist(rng);
    for (double& v : b.data()) v = dist(rng);
  }
  apply_masks();
}

void MadeBlock::apply_masks() {
  for (std::size_t i = 0; i < params_.size(); i += 2) {
    const DenseMatrix* mask = mask_for_param(i);
    auto w = params_[i].data();
    auto m = mask->data();
    for (std::size_t k = 0; k < w.size(); ++k)
      if (m[k] == 0.0) w[k] = 0.0;
  }
}

std::vector<ad::Var> register_params(ad::Tape& tape, const MadeBlock& block, bool requires_grad) {
  std::vector<ad::Var> vars;
  vars.reserve(block.params().size());
  for (const ad::Tensor& p : block.params()) vars.push_back(tape.leaf(p, requires_grad));
  return vars;
}

BlockTrace trace_block_inverse(const MadeBlock& block, const std::vector<ad::Var>& params,
                               ad::Var x) {
  const MaskSet& masks = block.masks();
  if (x.value().rank() != 2 || x.shape()[1] != block.dim()) {
    throw invalid_argument("block inverse: input must have " + std::to_string(block.dim()) +
                           " columns, got " + x.value().shape_string());
  }
  ad::Tape& tape = x.tape();
  const std::size_t rows = x.shape()[0];
  BlockTrace trace;
  trace.input = x;
  trace.alpha_clamp = block.alpha_clamp();
  for (std::size_t k = 0; k < block.dim(); ++k)
    for (std::size_t j = 0; j < block.dim(); ++j)
      if (masks.variable_degrees[k] < masks.variable_degrees[j]) trace.dependency_pairs.emplace_back(k, j);

  ad::Var h = x;
  for (std::size_t l = 0; l < masks.num_hidden_layers(); ++l) {
    ad::Var weight = ad::apply_mask(params[2 * l], masks.masks[l]);
    ad::Var pre = ad::affine(h, weight, params[2 * l + 1]);
    trace.trunk_weights.push_back(weight);
    trace.relu_active.push_back(tape.constant(relu_indicator(pre.value(), rows)));
    h = ad::relu(pre);
  }
  const std::size_t head = block.mu_weight_index();
  trace.mu_weight = ad::apply_mask(params[head], masks.output_mask());
  trace.alpha_weight = ad::apply_mask(params[head + 2], masks.output_mask());
  trace.mu = ad::affine(h, trace.mu_weight, params[head + 1]);
  const double clamp = block.alpha_clamp();
  ad::Var raw_alpha = ad::affine(h, trace.alpha_weight, params[head + 3]);
  trace.alpha = ad::scale(ad::tanh(ad::scale(raw_alpha, 1.0 / clamp)), clamp);
  trace.inv_scale = ad::exp(ad::scale(trace.alpha, -1.0));
  trace.noise = ad::mul(ad::sub(x, trace.mu), trace.inv_scale);
  return trace;
}

ad::Var block_input_jacobian(const BlockTrace& trace, std::size_t rows) {
  const double clamp = trace.alpha_clamp;
  ad::Var x = ad::slice_rows(trace.input, rows);
  ad::Var mu = ad::slice_rows(trace.mu, rows);
  ad::Var alpha = ad::slice_rows(trace.alpha, rows);
  ad::Var inv_scale = ad::slice_rows(trace.inv_scale, rows);

  // d alpha / d raw = 1 - (alpha / clamp)^2
  ad::Var squash_slope = ad::add_scalar(ad::scale(ad::square(alpha), -1.0 / (clamp * clamp)), 1.0);
  ad::Var coef = ad::mul(ad::sub(x, mu), squash_slope);

  ad::Tape& tape = x.tape();
  auto active = [&](std::size_t l) {
    const ad::Tensor& full = trace.relu_active[l].value();
    if (full.dim(0) == rows) return trace.relu_active[l];
    const std::size_t cols = full.dim(1);
    auto src = full.data();
    return tape.constant(ad::Tensor(
        {rows, cols},
        std::vector<double>(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(rows * cols))));
  };

  ad::Var through_net;
  if (trace.trunk_weights.size() == 1) {
    // One hidden layer: J_net[b] = sum_u a_bu W[:, u] (B_mu[u, :] + B_alpha[u, :] c_b), which is
    // a product of the indicator matrix with per-unit outer products on the allowed pairs.
    const ad::IndexPairs& pairs = trace.dependency_pairs;
    std::vector<std::size_t> targets;
    for (const auto& pr : pairs) targets.push_back(pr.second);
    ad::Var a = active(0);
    ad::Var from_mu = ad::matmul(a, ad::pair_outer(trace.trunk_weights[0], trace.mu_weight, pairs));
    ad::Var from_alpha = ad::matmul(a, ad::pair_outer(trace.trunk_weights[0], trace.alpha_weight, pairs));
    ad::Var combined = ad::add(from_mu, ad::mul(from_alpha, ad::gather_columns(coef, targets)));
    through_net = ad::scatter_pairs(combined, pairs, x.shape()[1]);
  } else {
    ad::Var heads = ad::add_shared(ad::scale_columns(trace.alpha_weight, coef), trace.mu_weight);
    ad::Var path = ad::scale_columns(trace.trunk_weights[0], active(0));
    for (std::size_t l = 1; l < trace.trunk_weights.size(); ++l) {
      path = ad::scale_columns(ad::batched_matmul(path, trace.trunk_weights[l]), active(l));
    }
    through_net = ad::batched_matmul(path, heads);
  }
  return ad::scale_columns(ad::identity_minus(through_net), inv_scale);
}

BlockInverseResult block_inverse(const MadeBlock& block, const DenseMatrix& x) {
  ad::Tape tape;
  auto params = register_params(tape, block, false);
  BlockTrace trace = trace_block_inverse(block, params, tape.constant(ad::Tensor::from_matrix(x)));
  BlockInverseResult result{trace.noise.value().to_matrix(), std::vector<double>(x.rows(), 0.0)};
  const ad::Tensor& alpha = trace.alpha.value();
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) result.logdet[i] -= alpha[i * x.cols() + j];
  return result;
}

DenseMatrix block_forward(const MadeBlock& block, const DenseMatrix& noise) {
  const std::size_t d = block.dim();
  if (noise.cols() != d) throw invalid_argument("block_forward: wrong column count");
  DenseMatrix x(noise.rows(), d);
  for (std::size_t pos = 0; pos < d; ++pos) {
    ad::Tape tape;
    auto params = register_params(tape, block, false);
    BlockTrace trace = trace_block_inverse(block, params, tape.constant(matrix_tensor(x)));
    const ad::Tensor& mu = trace.mu.value();
    const ad::Tensor& alpha = trace.alpha.value();
    const std::size_t j = block.masks().ordering[pos];
    for (std::size_t i = 0; i < x.rows(); ++i) {
      x(i, j) = noise(i, j) * std::exp(alpha[i * d + j]) + mu[i * d + j];
    }
  }
  return x;
}

std::vector<DenseMatrix> block_jacobians(const MadeBlock& block, const DenseMatrix& x) {
  ad::Tape tape;
  auto params = register_params(tape, block, false);
  BlockTrace trace = trace_block_inverse(block, params, tape.constant(matrix_tensor(x)));
  ad::Var jac = block_input_jacobian(trace, x.rows());
  std::vector<DenseMatrix> out;
  out.reserve(x.rows());
  for (std::size_t b = 0; b < x.rows(); ++b) out.push_back(jac.value().batch_item(b));
  return out;
}

}  // namespace dagflow
