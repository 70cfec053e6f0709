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

#include "dagflow/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dagflow/errors.hpp"

namespace dagflow {

namespace {

DenseMatrix gather_rows(const DenseMatrix& data, const std::vector<std::size_t>& index,
                        std::size_t begin, std::size_t count) {
  DenseMatrix out(count, data.cols());
  for (std::size_t i = 0; i < count; ++i) {
    auto src = data.row(index[begin + i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

std::vector<ad::Tensor*> flow_param_ptrs(FlowModel& flow) {
  std::vector<ad::Tensor*> out;
  for (MadeBlock& b : flow.blocks())
    for (ad::Tensor& p : b.params()) out.push_back(&p);
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw invalid_argument("TrainConfig: " + what); };
  if (num_blocks == 0) fail("num_blocks must be >= 1");
  if (hidden_sizes.empty()) fail("hidden_sizes must not be empty");
  for (std::size_t h : hidden_sizes)
    if (h == 0) fail("hidden layer sizes must be >= 1");
  if (!(alpha_clamp > 0.0)) fail("alpha_clamp must be > 0");
  if (!(learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (batch_size == 0) fail("batch_size must be >= 1");
  if (jacobian_batch == 0) fail("jacobian_batch must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) fail("adam_beta1 must be in [0, 1)");
  if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) fail("adam_beta2 must be in [0, 1)");
  if (!(adam_eps > 0.0)) fail("adam_eps must be > 0");
  if (!(rho_init > 0.0)) fail("rho_init must be > 0");
  if (!(rho_init <= rho_max)) fail("rho_init must not exceed rho_max");
  if (!(h_tolerance > 0.0)) fail("h_tolerance must be > 0");
  if (max_outer_iters == 0) fail("max_outer_iters must be >= 1");
  if (!(threshold >= 0.0)) fail("threshold must be >= 0");
  if (!(l1_weight >= 0.0)) fail("l1_weight must be >= 0");
  if (!(guard_tolerance > 0.0)) fail("guard_tolerance must be > 0");
}

void PenaltySchedule::update(double h) {
  lambda_ += rho_ * h;
  if (previous_h_ && std::abs(h) > 0.25 * std::abs(*previous_h_)) rho_ *= 10.0;
  previous_h_ = h;
}

void Adam::step(const std::vector<ad::Tensor*>& params, const std::vector<const ad::Tensor*>& grads) {
  if (params.size() != grads.size()) throw invalid_argument("Adam: parameter/gradient count mismatch");
  if (m_.empty()) {
    for (const ad::Tensor* p : params) {
      m_.emplace_back(p->shape());
      v_.emplace_back(p->shape());
    }
  }
  if (m_.size() != params.size()) throw invalid_argument("Adam: parameter list changed between steps");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i]->data();
    auto g = grads[i]->data();
    auto m = m_[i].data();
    auto v = v_[i].data();
    if (g.size() != p.size() || m.size() != p.size()) throw invalid_argument("Adam: shape mismatch");
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = beta1_ * m[k] + (1.0 - beta1_) * g[k];
      v[k] = beta2_ * v[k] + (1.0 - beta2_) * g[k] * g[k];
      p[k] -= lr_ * (m[k] / c1) / (std::sqrt(v[k] / c2) + eps_);
    }
  }
}

std::string format_log_line(const IterationRecord& r) {
  std::ostringstream out;
  out.precision(10);
  out << "iter=" << r.iteration << " nll=" << r.nll << " h=" << r.h << " lambda=" << r.lambda
      << " rho=" << r.rho << " edges=" << r.edges;
  return out.str();
}

TrainState make_initial_state(std::size_t d, const TrainConfig& config) {
  config.validate();
  TrainState state;
  state.flow = FlowModel::create(d, config.flow_config(), config.seed);
  state.schedule = PenaltySchedule(config.lambda_init, config.rho_init);
  state.optimizer = Adam(config.learning_rate, config.adam_beta1, config.adam_beta2, config.adam_eps);
  state.rng.seed(config.seed ^ 0x9e3779b97f4a7c15ULL);
  return state;
}

ObjectiveVars record_objective(const FlowModel& flow, const std::vector<std::vector<ad::Var>>& params,
                               ad::Var batch, double lambda, double rho, const TrainConfig& config) {
  const std::size_t rows = batch.shape()[0];
  ObjectiveVars out;
  FlowTrace trace;
  try {
    trace = trace_flow(flow, params, batch);
    out.nll = ad::scale(trace.total_log_density, -1.0 / static_cast<double>(rows));
  } catch (const Error& e) {
    throw Error(e.category(), std::string("negative log-likelihood term diverged: ") + e.what());
  }
  try {
    const std::size_t jrows = std::min(config.jacobian_batch, rows);
    out.adjacency = jacobian_to_adjacency(flow_input_jacobian(trace, jrows));
    out.h = acyclicity(out.adjacency, config.constraint, config.poly_alpha);
  } catch (const Error& e) {
    throw Error(e.category(), std::string("acyclicity term diverged: ") + e.what());
  }
  try {
    // h >= 0, so |h|^2 == h^2.
    ad::Var total = ad::add(out.nll, ad::add(ad::scale(out.h, lambda), ad::scale(ad::square(out.h), 0.5 * rho)));
    if (config.l1_weight > 0.0) total = ad::add(total, ad::scale(ad::sum(out.adjacency), config.l1_weight));
    out.total = total;
  } catch (const Error& e) {
    throw Error(e.category(), std::string("penalty term diverged: ") + e.what());
  }
  return out;
}

ObjectiveTerms augmented_objective(const FlowModel& flow, const DenseMatrix& batch, double lambda,
                                   double rho, const TrainConfig& config) {
  ad::Tape tape;
  auto params = register_params(tape, flow, false);
  ObjectiveVars vars =
      record_objective(flow, params, tape.constant(ad::Tensor::from_matrix(batch)), lambda, rho, config);
  ObjectiveTerms terms;
  terms.nll = vars.nll.value().item();
  terms.h = vars.h.value().item();
  double w_sum = 0.0;
  for (double v : vars.adjacency.value().data()) w_sum += v;
  terms.l1 = config.l1_weight * w_sum;
  terms.total = vars.total.value().item();
  return terms;
}

double train_step(TrainState& state, const DenseMatrix& batch, const TrainConfig& config) {
  ad::Tape tape;
  auto params = register_params(tape, state.flow, true);
  ObjectiveVars vars = record_objective(state.flow, params, tape.constant(ad::Tensor::from_matrix(batch)),
                                        state.schedule.lambda(), state.schedule.rho(), config);
  tape.backward(vars.total);
  std::vector<const ad::Tensor*> grads;
  for (const auto& block : params)
    for (const ad::Var& p : block) grads.push_back(&p.grad());
  state.optimizer.step(flow_param_ptrs(state.flow), grads);
  return vars.total.value().item();
}

void inner_minimize(TrainState& state, const DenseMatrix& data, const TrainConfig& config) {
  const std::size_t n = data.rows();
  if (n == 0) throw invalid_argument("inner_minimize: empty data");
  const std::size_t batch = std::min(config.batch_size, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  // Fixed evaluation batch for the divergence guard.
  std::vector<std::size_t> eval_order = order;
  std::mt19937_64 eval_rng(config.seed + 7919 * (state.outer_iteration + 1));
  std::shuffle(eval_order.begin(), eval_order.end(), eval_rng);
  const DenseMatrix eval_batch = gather_rows(data, eval_order, 0, batch);
  auto evaluate = [&] {
    return augmented_objective(state.flow, eval_batch, state.schedule.lambda(), state.schedule.rho(),
                               config).total;
  };
  const bool guard = config.guard_interval > 0 && config.inner_steps > 0;
  double best = guard ? evaluate() : 0.0;

  std::size_t cursor = n;
  for (std::size_t step = 0; step < config.inner_steps; ++step) {
    if (cursor + batch > n) {
      std::shuffle(order.begin(), order.end(), state.rng);
      cursor = 0;
    }
    const DenseMatrix mb = gather_rows(data, order, cursor, batch);
    cursor += batch;
    train_step(state, mb, config);

    const bool last = step + 1 == config.inner_steps;
    if (guard && ((step + 1) % config.guard_interval == 0 || last)) {
      const double current = evaluate();
      if (current > best + config.guard_tolerance * std::max(std::abs(best), 1.0)) {
        std::ostringstream msg;
        msg << "objective on the evaluation batch rose from " << best << " to " << current
            << " at inner step " << step + 1 << " of outer iteration " << state.outer_iteration
            << "; try a smaller learning_rate";
        throw Error(ErrorCategory::kDivergence, msg.str());
      }
      best = std::min(best, current);
    }
  }
}

WeightedAdjacency full_data_adjacency(const FlowModel& flow, const DenseMatrix& data,
                                      std::size_t chunk_rows) {
  const std::size_t n = data.rows();
  const std::size_t d = flow.dim();
  if (n == 0) throw invalid_argument("full_data_adjacency: empty data");
  if (chunk_rows == 0) chunk_rows = n;
  std::vector<double> sum_sq(d * d, 0.0);
  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), std::size_t{0});
  for (std::size_t begin = 0; begin < n; begin += chunk_rows) {
    const std::size_t count = std::min(chunk_rows, n - begin);
    const DenseMatrix chunk = gather_rows(data, index, begin, count);
    ad::Tape tape;
    auto params = register_params(tape, flow, false);
    FlowTrace trace = trace_flow(flow, params, tape.constant(ad::Tensor::from_matrix(chunk)));
    const ad::Tensor& jac = flow_input_jacobian(trace, count).value();
    for (std::size_t b = 0; b < count; ++b)
      for (std::size_t i = 0; i < d * d; ++i) sum_sq[i] += jac[b * d * d + i] * jac[b * d * d + i];
  }
  const double root_eps = std::sqrt(kAdjacencyEps);
  DenseMatrix w(d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j)
      if (k != j) w(k, j) = std::sqrt(sum_sq[k * d + j] / static_cast<double>(n) + kAdjacencyEps) - root_eps;
  return WeightedAdjacency(std::move(w));
}

BinaryGraph threshold_and_repair(const WeightedAdjacency& w, double omega) {
  if (!(omega >= 0.0)) throw invalid_argument("threshold_and_repair: omega must be >= 0");
  BinaryGraph g = BinaryGraph::from_weights(w.matrix(), omega);
  while (!is_acyclic(g)) {
    const auto reach = reachability(g);
    std::optional<Edge> lightest;
    double lightest_weight = std::numeric_limits<double>::infinity();
    for (const Edge& e : g.edges()) {
      const bool on_cycle = e.from == e.to || reach[e.to][e.from];
      if (on_cycle && w(e.from, e.to) < lightest_weight) {
        lightest_weight = w(e.from, e.to);
        lightest = e;
      }
    }
    g.remove_edge(lightest->from, lightest->to);
  }
  return g;
}

TrainResult outer_loop(TrainState state, const DenseMatrix& data, const TrainConfig& config,
                       const IterationObserver& observer) {
  config.validate();
  if (data.cols() != state.flow.dim()) throw invalid_argument("outer_loop: data width does not match the flow");
  TrainResult result;
  result.status = "max outer iterations reached";
  for (std::size_t k = 0; k < config.max_outer_iters; ++k) {
    state.outer_iteration = k;
    inner_minimize(state, data, config);

    WeightedAdjacency w = full_data_adjacency(state.flow, data);
    const double h = acyclicity(w.matrix(), config.constraint, config.poly_alpha);
    state.schedule.update(h);
    BinaryGraph g = threshold_and_repair(w, config.threshold);

    IterationRecord rec;
    rec.iteration = k;
    rec.nll = -flow_log_likelihood(state.flow, data);
    rec.h = h;
    rec.lambda = state.schedule.lambda();
    rec.rho = state.schedule.rho();
    rec.edges = g.edge_count();
    state.history.push_back(rec);
    if (observer) observer(rec, w, g);

    result.adjacency = std::move(w);
    result.graph = std::move(g);
    if (h < config.h_tolerance) {
      result.converged = true;
      result.status = "converged";
      break;
    }
    if (state.schedule.rho() > config.rho_max) {
      result.status = "penalty exceeded rho_max before h reached tolerance";
      break;
    }
  }
  result.flow = std::move(state.flow);
  result.history = std::move(state.history);
  return result;
}

TrainResult outer_loop(const TrainConfig& config, const DenseMatrix& data, const IterationObserver& observer) {
  return outer_loop(make_initial_state(data.cols(), config), data, config, observer);
}

Standardization fit_standardization(const DenseMatrix& data) {
  const std::size_t n = data.rows(), d = data.cols();
  if (n == 0) throw invalid_argument("standardization: empty data");
  Standardization s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += data(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (data(i, j) - mean) * (data(i, j) - mean);
    var /= static_cast<double>(n);
    if (!(var > 0.0)) throw invalid_argument("standardization: column " + std::to_string(j) + " is constant");
    s.mean[j] = mean;
    s.stddev[j] = std::sqrt(var);
  }
  return s;
}

DenseMatrix standardize(const DenseMatrix& data, const Standardization& s) {
  if (data.cols() != s.mean.size()) throw invalid_argument("standardize: column count mismatch");
  DenseMatrix out = data;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = (out(i, j) - s.mean[j]) / s.stddev[j];
  return out;
}

}  // namespace dagflow
