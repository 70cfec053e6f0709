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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dagflow/graph.hpp"
#include "dagflow/linalg.hpp"
#include "dagflow/made.hpp"
#include "dagflow/sachs.hpp"
#include "dagflow/tape.hpp"
#include "dagflow/trainer.hpp"

namespace dagflow::testing {

inline DenseMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double lo = -1.0,
                                 double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  DenseMatrix m(r, c);
  for (double& v : m.data()) v = u(rng);
  return m;
}

// Naive triple loop.
inline DenseMatrix naive_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

// Plain Taylor series summed until terms stop changing the sum.
inline DenseMatrix taylor_exp(const DenseMatrix& a, int max_terms = 400) {
  const std::size_t n = a.rows();
  DenseMatrix sum = DenseMatrix::identity(n);
  DenseMatrix term = DenseMatrix::identity(n);
  for (int k = 1; k < max_terms; ++k) {
    term = naive_matmul(term, a);
    for (double& v : term.data()) v /= k;
    bool changed = false;
    for (std::size_t i = 0; i < n * n; ++i) {
      const double before = sum.data()[i];
      sum.data()[i] += term.data()[i];
      if (sum.data()[i] != before) changed = true;
    }
    if (!changed) break;
  }
  return sum;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline double rel_err(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Acyclicity by repeatedly deleting sources; independent of graph.cpp.
inline bool acyclic_by_peeling(const DenseMatrix& support) {
  const std::size_t d = support.rows();
  std::vector<bool> gone(d, false);
  for (std::size_t round = 0; round < d; ++round) {
    bool removed = false;
    for (std::size_t v = 0; v < d && !removed; ++v) {
      if (gone[v]) continue;
      bool has_parent = false;
      for (std::size_t u = 0; u < d; ++u)
        if (!gone[u] && support(u, v) != 0.0) has_parent = true;
      if (!has_parent) {
        gone[v] = true;
        removed = true;
      }
    }
    if (!removed) return false;
  }
  return true;
}

inline BinaryGraph random_dag(std::size_t d, double p, std::mt19937_64& rng) {
  std::vector<std::size_t> perm(d);
  for (std::size_t i = 0; i < d; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution coin(p);
  BinaryGraph g(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (coin(rng)) g.add_edge(perm[i], perm[j]);
  return g;
}

// Flatten / restore every parameter of a flow.
inline std::vector<double> flatten(const FlowModel& flow) {
  std::vector<double> out;
  for (const auto& b : flow.blocks())
    for (const auto& p : b.params()) out.insert(out.end(), p.data().begin(), p.data().end());
  return out;
}

inline void unflatten(FlowModel& flow, const std::vector<double>& v) {
  std::size_t i = 0;
  for (auto& b : flow.blocks())
    for (auto& p : b.params())
      for (double& x : p.data()) x = v[i++];
}

// Indices into flatten() that are free parameters (not masked out).
inline std::vector<std::size_t> free_indices(const FlowModel& flow) {
  std::vector<std::size_t> out;
  std::size_t offset = 0;
  for (const auto& b : flow.blocks()) {
    for (std::size_t pi = 0; pi < b.params().size(); ++pi) {
      const DenseMatrix* mask = b.mask_for_param(pi);
      for (std::size_t k = 0; k < b.params()[pi].size(); ++k)
        if (!mask || mask->data()[k] != 0.0) out.push_back(offset + k);
      offset += b.params()[pi].size();
    }
  }
  return out;
}

// ReLU activation pattern of every block on x; equal patterns mean no kink
// was crossed between two parameter settings.
inline std::vector<double> relu_pattern(const FlowModel& flow, const DenseMatrix& x) {
  ad::Tape tape;
  auto params = register_params(tape, flow, false);
  FlowTrace tr = trace_flow(flow, params, tape.constant(ad::Tensor::from_matrix(x)));
  std::vector<double> out;
  for (const auto& bt : tr.blocks)
    for (const auto& a : bt.relu_active) out.insert(out.end(), a.value().data().begin(), a.value().data().end());
  return out;
}

// Finite-difference Jacobian of x -> flow_inverse(x) for one sample,
// entry (k, j) = dN_j / dX_k.
inline DenseMatrix fd_flow_jacobian(const std::function<DenseMatrix(const DenseMatrix&)>& map,
                                    const DenseMatrix& x_row, double h = 1e-6) {
  const std::size_t d = x_row.cols();
  DenseMatrix jac(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    DenseMatrix plus = x_row, minus = x_row;
    plus(0, k) += h;
    minus(0, k) -= h;
    const DenseMatrix np = map(plus), nm = map(minus);
    for (std::size_t j = 0; j < d; ++j) jac(k, j) = (np(0, j) - nm(0, j)) / (2 * h);
  }
  return jac;
}

// Hand-built d = 1 block: no hidden input connections, so mu and alpha are
// the head biases.
inline MadeBlock scalar_block(double mu_bias, double raw_alpha_bias, double clamp = 8.0) {
  MaskSet set;
  set.dim = 1;
  set.ordering = {0};
  set.variable_degrees = {1};
  set.hidden_degrees = {{1, 1}};
  set.masks = {DenseMatrix(1, 2, 1.0), DenseMatrix(2, 1, 0.0)};
  MadeBlock block(set, clamp);
  block.params()[block.mu_weight_index() + 1][0] = mu_bias;
  block.params()[block.alpha_weight_index() + 1][0] = raw_alpha_bias;
  return block;
}

// log|det| by LU with partial pivoting.
inline double log_abs_det(DenseMatrix a) {
  const std::size_t n = a.rows();
  double out = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (piv != c)
      for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
    out += std::log(std::abs(a(c, c)));
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return out;
}

// Flow from FlowModel::create with every parameter multiplied by `gain`.
inline FlowModel random_flow(std::size_t d, std::size_t blocks, std::vector<std::size_t> hidden,
                             std::uint64_t seed, double gain = 1.0) {
  FlowConfig cfg;
  cfg.num_blocks = blocks;
  cfg.hidden_sizes = std::move(hidden);
  FlowModel flow = FlowModel::create(d, cfg, seed);
  for (auto& b : flow.blocks())
    for (auto& p : b.params())
      for (double& v : p.data()) v *= gain;
  return flow;
}

inline DenseMatrix normal_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  DenseMatrix m(r, c);
  for (double& v : m.data()) v = n(rng);
  return m;
}

struct GradientProbe {
  double max_rel_err = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
};

// Tape gradient of the augmented objective against central differences on
// `coords` random free parameters; coordinates whose perturbation flips a
// ReLU indicator are skipped.
inline GradientProbe probe_objective_gradient(const FlowModel& flow, const DenseMatrix& batch, double lambda,
                                              double rho, const TrainConfig& config, std::mt19937_64& rng,
                                              std::size_t coords, double step = 1e-6) {
  ad::Tape tape;
  auto params = register_params(tape, flow, true);
  const ObjectiveVars vars =
      record_objective(flow, params, tape.constant(ad::Tensor::from_matrix(batch)), lambda, rho, config);
  tape.backward(vars.total);
  std::vector<double> grad;
  for (const auto& block : params)
    for (const auto& p : block) grad.insert(grad.end(), p.grad().data().begin(), p.grad().data().end());

  const std::vector<double> theta = flatten(flow);
  const std::vector<double> pattern = relu_pattern(flow, batch);
  const std::vector<std::size_t> free = free_indices(flow);
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  GradientProbe out;
  for (std::size_t t = 0; t < coords; ++t) {
    const std::size_t i = free[pick(rng)];
    FlowModel plus = flow, minus = flow;
    std::vector<double> tp = theta, tm = theta;
    tp[i] += step;
    tm[i] -= step;
    unflatten(plus, tp);
    unflatten(minus, tm);
    if (relu_pattern(plus, batch) != pattern || relu_pattern(minus, batch) != pattern) {
      ++out.skipped;
      continue;
    }
    const double fd = (augmented_objective(plus, batch, lambda, rho, config).total -
                       augmented_objective(minus, batch, lambda, rho, config).total) /
                      (2 * step);
    out.max_rel_err = std::max(out.max_rel_err, rel_err(grad[i], fd, 1e-6));
    ++out.checked;
  }
  return out;
}

// Two-node flow with W equal to the unit two-cycle (up to the sqrt(eps)
// shift): block 0 has mu_2 = a x_1, block 1 has mu_1 = b y_2, alphas 0.
inline FlowModel two_cycle_flow(double a, double b) {
  FlowModel flow = random_flow(2, 2, {2}, 0, 0.0);
  MadeBlock& first = flow.blocks()[0];
  first.params()[0][0] = 1.0;
  first.params()[0][1] = -1.0;
  first.params()[first.mu_weight_index()][1] = a;
  first.params()[first.mu_weight_index()][3] = -a;
  MadeBlock& second = flow.blocks()[1];
  second.params()[0][2] = 1.0;
  second.params()[0][3] = -1.0;
  second.params()[second.mu_weight_index()][0] = b;
  second.params()[second.mu_weight_index()][2] = -b;
  return flow;
}

// The nine edges of the reported Sachs fit: six true positives and three
// edges pointing against the consensus network.
inline BinaryGraph sachs_reported_prediction() {
  const std::vector<std::pair<std::string, std::string>> named{
      {"Raf", "Mek"}, {"Plcg", "PIP2"}, {"PIP3", "PIP2"}, {"Erk", "Akt"}, {"PKC", "Mek"},
      {"PKC", "P38"}, {"Raf", "PKA"},   {"Erk", "PKA"},   {"Akt", "PKA"}};
  std::vector<Edge> edges;
  for (const auto& [a, b] : named) edges.push_back({*sachs_index(a), *sachs_index(b)});
  return BinaryGraph(sachs_variable_names().size(), edges);
}

}  // namespace dagflow::testing
