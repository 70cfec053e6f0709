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
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dagflow/dag_constraint.hpp"
#include "dagflow/graph.hpp"
#include "dagflow/linalg.hpp"
#include "dagflow/made.hpp"

namespace dagflow {

struct TrainConfig {
  // Flow architecture.
  std::size_t num_blocks = 6;
  std::vector<std::size_t> hidden_sizes{100};
  double alpha_clamp = 8.0;

  // Inner optimisation (Adam).
  double learning_rate = 1e-3;
  std::size_t inner_steps = 3000;
  std::size_t batch_size = 256;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  // Augmented Lagrangian.
  double lambda_init = 0.0;
  double rho_init = 1.0;
  double rho_max = 1e16;
  double h_tolerance = 1e-8;
  std::size_t max_outer_iters = 20;
  ConstraintForm constraint = ConstraintForm::kExp;
  double poly_alpha = 0.0;  // <= 0 means 1/d

  // Rows of each minibatch used to estimate W(f) for the penalty.
  std::size_t jacobian_batch = 256;
  double threshold = 0.3;
  double l1_weight = 0.0;

  // Divergence guard: every `guard_interval` steps the objective on a fixed
  // evaluation batch may not exceed its running best by more than
  // guard_tolerance * max(|best|, 1). 0 disables the guard.
  std::size_t guard_interval = 100;
  double guard_tolerance = 0.05;

  std::uint64_t seed = 0;

  // Throws invalid_argument on the first inconsistent field.
  void validate() const;
  FlowConfig flow_config() const { return {num_blocks, hidden_sizes, alpha_clamp}; }
};

// Lagrange multiplier and penalty updates between inner solves:
//   lambda <- lambda + rho * h
//   rho    <- 10 * rho   if |h| > |h_prev| / 4   (no previous h: unchanged)
class PenaltySchedule {
 public:
  PenaltySchedule(double lambda, double rho) : lambda_(lambda), rho_(rho) {}

  void update(double h);

  double lambda() const noexcept { return lambda_; }
  double rho() const noexcept { return rho_; }
  std::optional<double> previous_h() const noexcept { return previous_h_; }

 private:
  double lambda_;
  double rho_;
  std::optional<double> previous_h_;
};

// Adam over an arbitrary list of tensors. Moment buffers are created on the
// first step and must keep matching shapes afterwards.
class Adam {
 public:
  Adam() = default;
  Adam(double learning_rate, double beta1, double beta2, double eps)
      : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(const std::vector<ad::Tensor*>& params, const std::vector<const ad::Tensor*>& grads);
  std::size_t steps_taken() const noexcept { return t_; }

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::size_t t_ = 0;
  std::vector<ad::Tensor> m_;
  std::vector<ad::Tensor> v_;
};

struct IterationRecord {
  std::size_t iteration = 0;
  double nll = 0.0;  // mean negative log-likelihood on the full data
  double h = 0.0;    // acyclicity of the full-data W(f)
  double lambda = 0.0;  // after this iteration's update
  double rho = 0.0;     // after this iteration's update
  std::size_t edges = 0;  // after thresholding and repair
};

// key=value line for the training log.
std::string format_log_line(const IterationRecord& r);

struct TrainState {
  FlowModel flow;
  PenaltySchedule schedule{0.0, 1.0};
  Adam optimizer;
  std::size_t outer_iteration = 0;
  std::vector<IterationRecord> history;
  std::mt19937_64 rng;
};

TrainState make_initial_state(std::size_t d, const TrainConfig& config);

struct ObjectiveTerms {
  double nll = 0.0;
  double h = 0.0;
  double l1 = 0.0;
  double total = 0.0;
};

struct ObjectiveVars {
  ad::Var total;
  ad::Var nll;
  ad::Var h;
  ad::Var adjacency;
};

// NLL(batch) + lambda h + (rho / 2) h^2 + l1_weight * sum(W), with W(f)
// estimated on the first min(jacobian_batch, rows) rows of the batch. The
// squared penalty is written as h^2 since h is never negative.
ObjectiveVars record_objective(const FlowModel& flow, const std::vector<std::vector<ad::Var>>& params,
                               ad::Var batch, double lambda, double rho, const TrainConfig& config);

ObjectiveTerms augmented_objective(const FlowModel& flow, const DenseMatrix& batch, double lambda,
                                   double rho, const TrainConfig& config);

// One Adam step on the augmented objective; returns the objective value
// before the update.
double train_step(TrainState& state, const DenseMatrix& batch, const TrainConfig& config);

// config.inner_steps Adam steps over shuffled minibatches with lambda and rho
// held fixed. Throws a divergence error when the guard trips.
void inner_minimize(TrainState& state, const DenseMatrix& data, const TrainConfig& config);

// W(f) over all rows, accumulated in chunks of `chunk_rows`.
WeightedAdjacency full_data_adjacency(const FlowModel& flow, const DenseMatrix& data,
                                      std::size_t chunk_rows = 512);

// Keep edges with W > omega, then while a cycle remains drop the lightest
// edge lying on some cycle. The result is always acyclic.
BinaryGraph threshold_and_repair(const WeightedAdjacency& w, double omega);

struct TrainResult {
  FlowModel flow;
  WeightedAdjacency adjacency;
  BinaryGraph graph;
  std::vector<IterationRecord> history;
  bool converged = false;
  std::string status;
};

// Called after each outer iteration with the thresholded graph.
using IterationObserver =
    std::function<void(const IterationRecord&, const WeightedAdjacency&, const BinaryGraph&)>;

TrainResult outer_loop(TrainState state, const DenseMatrix& data, const TrainConfig& config,
                       const IterationObserver& observer = nullptr);
TrainResult outer_loop(const TrainConfig& config, const DenseMatrix& data,
                       const IterationObserver& observer = nullptr);

// Column-wise centering and scaling to unit (population) variance.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> stddev;
};

Standardization fit_standardization(const DenseMatrix& data);
DenseMatrix standardize(const DenseMatrix& data, const Standardization& s);

}  // namespace dagflow
