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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dagflow/dag_constraint.hpp"
#include "dagflow/errors.hpp"
#include "dagflow/graph.hpp"
#include "dagflow/trainer.hpp"
#include "support.hpp"

namespace dagflow {
namespace {

TrainConfig small_config() {
  TrainConfig c;
  c.num_blocks = 2;
  c.hidden_sizes = {8};
  c.inner_steps = 50;
  c.batch_size = 32;
  c.jacobian_batch = 16;
  c.max_outer_iters = 3;
  c.learning_rate = 1e-2;
  c.guard_interval = 0;
  return c;
}

DenseMatrix chain_data(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  DenseMatrix x(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = z(rng);
    x(i, 1) = 0.8 * x(i, 0) + 0.6 * z(rng);
    x(i, 2) = -0.8 * x(i, 1) + 0.6 * z(rng);
  }
  return x;
}

TEST(Config, DefaultsValidate) {
  const TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.num_blocks, 6u);
  EXPECT_EQ(c.hidden_sizes, std::vector<std::size_t>{100});
  EXPECT_EQ(c.inner_steps, 3000u);
  EXPECT_EQ(c.max_outer_iters, 20u);
  EXPECT_DOUBLE_EQ(c.threshold, 0.3);
}

TEST(Config, RejectsInconsistentFields) {
  const auto bad = [](auto mutate) {
    TrainConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), Error);
  };
  bad([](TrainConfig& c) { c.num_blocks = 0; });
  bad([](TrainConfig& c) { c.hidden_sizes = {}; });
  bad([](TrainConfig& c) { c.hidden_sizes = {0}; });
  bad([](TrainConfig& c) { c.learning_rate = 0.0; });
  bad([](TrainConfig& c) { c.batch_size = 0; });
  bad([](TrainConfig& c) { c.rho_init = 1e20; });
  bad([](TrainConfig& c) { c.threshold = -0.1; });
  bad([](TrainConfig& c) { c.jacobian_batch = 0; });
  bad([](TrainConfig& c) { c.l1_weight = -1.0; });
}

TEST(Schedule, FirstUpdateKeepsRho) {
  PenaltySchedule s(0.0, 1.0);
  s.update(0.5);
  EXPECT_EQ(s.rho(), 1.0);
  EXPECT_EQ(s.lambda(), 0.5);
}

TEST(Schedule, ScriptedFastDecayKeepsRho) {
  PenaltySchedule s(0.0, 2.0);
  for (double h : {1.0, 0.1, 0.01}) s.update(h);
  EXPECT_EQ(s.rho(), 2.0);
  EXPECT_DOUBLE_EQ(s.lambda(), 2.0 * (1.0 + 0.1 + 0.01));
}

TEST(Schedule, ScriptedHalvingMultipliesRho) {
  PenaltySchedule s(0.0, 1.0);
  double lambda = 0.0, rho = 1.0, h = 1.0;
  for (int k = 0; k < 6; ++k) {
    s.update(h);
    lambda += rho * h;
    if (k > 0) rho *= 10.0;
    EXPECT_EQ(s.lambda(), lambda);
    EXPECT_EQ(s.rho(), rho);
    h *= 0.5;
  }
}

TEST(Schedule, BoundaryQuarterIsNotAnIncrease) {
  PenaltySchedule s(0.0, 1.0);
  s.update(1.0);
  s.update(0.25);
  EXPECT_EQ(s.rho(), 1.0);
  s.update(0.25 * 0.25 + 1e-12);
  EXPECT_EQ(s.rho(), 10.0);
}

TEST(Schedule, MonotoneUnderNonnegativeH) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PenaltySchedule s(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double lambda = s.lambda(), rho = s.rho();
    s.update(u(rng));
    EXPECT_GE(s.lambda(), lambda);
    EXPECT_GE(s.rho(), rho);
  }
}

TEST(Adam, QuadraticRigConverges) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ad::Tensor target({5});
  for (double& v : target.data()) v = u(rng);
  ad::Tensor theta({5});
  Adam adam(1e-2, 0.9, 0.999, 1e-8);
  for (int step = 0; step < 2000; ++step) {
    ad::Tensor grad({5});
    for (std::size_t i = 0; i < 5; ++i) grad[i] = 2.0 * (theta[i] - target[i]);
    adam.step({&theta}, {&grad});
  }
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(theta[i], target[i], 1e-3);
  EXPECT_EQ(adam.steps_taken(), 2000u);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  ad::Tensor theta = ad::Tensor::vector({0.0, 0.0});
  const ad::Tensor grad = ad::Tensor::vector({3.0, -0.01});
  Adam adam(0.1, 0.9, 0.999, 1e-8);
  adam.step({&theta}, {&grad});
  EXPECT_NEAR(theta[0], -0.1, 1e-8);
  EXPECT_NEAR(theta[1], 0.1, 1e-5);
}

TEST(Adam, ShapeChangesThrow) {
  ad::Tensor a({2}), g({2}), g3({3});
  Adam adam;
  EXPECT_THROW(adam.step({&a}, {&g3}), Error);
  adam.step({&a}, {&g});
  ad::Tensor b({2});
  EXPECT_THROW(adam.step({&a, &b}, {&g, &g}), Error);
}

TEST(Objective, NoPenaltyEqualsNll) {
  std::mt19937_64 rng(3);
  const FlowModel flow = testing::random_flow(3, 2, {8}, 3, 1.5);
  const DenseMatrix batch = testing::normal_matrix(20, 3, rng);
  const ObjectiveTerms t = augmented_objective(flow, batch, 0.0, 0.0, small_config());
  EXPECT_EQ(t.total, t.nll);
  EXPECT_NEAR(t.nll, -flow_log_likelihood(flow, batch), 1e-12);
  EXPECT_GT(t.h, 0.0);
}

TEST(Objective, IdentityFlowHasNoPenalty) {
  std::mt19937_64 rng(4);
  const FlowModel flow = testing::random_flow(3, 2, {8}, 0, 0.0);
  const DenseMatrix batch = testing::normal_matrix(20, 3, rng);
  const ObjectiveTerms t = augmented_objective(flow, batch, 1.0, 2.0, small_config());
  EXPECT_EQ(t.h, 0.0);
  EXPECT_EQ(t.total, t.nll);
}

TEST(Objective, TwoCyclePenalty) {
  const FlowModel flow = testing::two_cycle_flow(1.0, 1.0);
  std::mt19937_64 rng(5);
  const DenseMatrix batch = testing::normal_matrix(40, 2, rng);
  const ObjectiveTerms t = augmented_objective(flow, batch, 1.0, 2.0, small_config());
  EXPECT_NEAR(t.h, 2 * std::cosh(1.0) - 2, 1e-5);
  const double penalty = t.total - t.nll;
  EXPECT_NEAR(penalty, t.h + t.h * t.h, 1e-12);
  // W sits about 1e-6 below the unit cycle.
  EXPECT_NEAR(penalty, 1.0861612 + 1.1797461, 5e-5);
}

TEST(Objective, L1TermAddsSumOfW) {
  std::mt19937_64 rng(6);
  const FlowModel flow = testing::random_flow(3, 2, {8}, 6, 1.5);
  const DenseMatrix batch = testing::normal_matrix(16, 3, rng);
  TrainConfig c = small_config();
  const ObjectiveTerms base = augmented_objective(flow, batch, 0.5, 3.0, c);
  c.l1_weight = 0.2;
  const ObjectiveTerms withl1 = augmented_objective(flow, batch, 0.5, 3.0, c);
  const WeightedAdjacency w = jacobian_to_adjacency(flow_jacobians(flow, batch));
  double wsum = 0.0;
  for (double v : w.matrix().data()) wsum += v;
  EXPECT_NEAR(withl1.l1, 0.2 * wsum, 1e-10);
  EXPECT_NEAR(withl1.total - base.total, 0.2 * wsum, 1e-10);
}

TEST(Objective, JacobianBatchUsesLeadingRows) {
  std::mt19937_64 rng(7);
  const FlowModel flow = testing::random_flow(3, 2, {8}, 7, 1.5);
  const DenseMatrix batch = testing::normal_matrix(30, 3, rng);
  TrainConfig c = small_config();
  c.jacobian_batch = 10;
  DenseMatrix head(10, 3);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 3; ++j) head(i, j) = batch(i, j);
  EXPECT_NEAR(augmented_objective(flow, batch, 0.0, 0.0, c).h,
              h_exp(jacobian_to_adjacency(flow_jacobians(flow, head))), 1e-12);
}

TEST(Objective, NonFiniteNamesTerm) {
  const FlowModel flow = testing::random_flow(2, 1, {4}, 0);
  const DenseMatrix batch{{1e200, 0.0}};
  try {
    augmented_objective(flow, batch, 0.0, 1.0, small_config());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("term diverged"), std::string::npos) << e.what();
  }
}

TEST(Objective, TapeGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(8);
  TrainConfig c = small_config();
  c.l1_weight = 0.1;
  for (int t = 0; t < 5; ++t) {
    const FlowModel flow = testing::random_flow(3, 2, {8}, static_cast<std::uint64_t>(t), 1.5);
    const DenseMatrix batch = testing::normal_matrix(12, 3, rng);
    const testing::GradientProbe p = testing::probe_objective_gradient(flow, batch, 0.7, 5.0, c, rng, 20);
    EXPECT_GE(p.checked, 10u);
    EXPECT_LE(p.max_rel_err, 1e-4);
  }
}

TEST(Inner, ZeroStepsLeaveParametersUnchanged) {
  TrainConfig c = small_config();
  c.inner_steps = 0;
  TrainState s = make_initial_state(3, c);
  const FlowModel before = s.flow;
  inner_minimize(s, chain_data(50, 1), c);
  EXPECT_EQ(s.flow, before);
}

TEST(Inner, LargeRhoReducesH) {
  TrainConfig c = small_config();
  c.inner_steps = 300;
  c.rho_init = 100.0;
  TrainState s = make_initial_state(3, c);
  s.schedule = PenaltySchedule(0.0, 100.0);
  const DenseMatrix data = standardize(chain_data(400, 2), fit_standardization(chain_data(400, 2)));
  const double before = h_exp(full_data_adjacency(s.flow, data));
  ASSERT_GT(before, 0.0);
  inner_minimize(s, data, c);
  EXPECT_LT(h_exp(full_data_adjacency(s.flow, data)), before);
}

TEST(Inner, GuardTripsOnDivergence) {
  TrainConfig c = small_config();
  c.learning_rate = 5.0;
  c.inner_steps = 400;
  c.guard_interval = 10;
  c.guard_tolerance = 0.05;
  TrainState s = make_initial_state(3, c);
  const DenseMatrix data = standardize(chain_data(200, 3), fit_standardization(chain_data(200, 3)));
  try {
    inner_minimize(s, data, c);
    FAIL() << "guard did not trip";
  } catch (const Error& e) {
    EXPECT_TRUE(e.category() == ErrorCategory::kDivergence || e.category() == ErrorCategory::kNumerical);
    if (e.category() == ErrorCategory::kDivergence)
      EXPECT_NE(std::string(e.what()).find("learning_rate"), std::string::npos) << e.what();
  }
}

TEST(Repair, Examples) {
  EXPECT_EQ(threshold_and_repair(WeightedAdjacency(DenseMatrix{{0, .1}, {.2, 0}}), 0.3).edge_count(), 0u);
  const BinaryGraph g = threshold_and_repair(WeightedAdjacency(DenseMatrix{{0, .5}, {.4, 0}}), 0.3);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  const DenseMatrix dag{{0, .9, .5}, {0, 0, .7}, {0, 0, 0}};
  EXPECT_EQ(threshold_and_repair(WeightedAdjacency(dag), 0.3), BinaryGraph::from_weights(dag, 0.3));
  EXPECT_THROW(threshold_and_repair(WeightedAdjacency(dag), -1.0), Error);
}

TEST(Repair, DropsLightestCycleEdgeOnly) {
  // 0->1->2->0 cycle plus a light edge 3->0 off the cycle.
  const DenseMatrix w{{0, .9, 0, 0}, {0, 0, .8, 0}, {.6, 0, 0, 0}, {.35, 0, 0, 0}};
  const BinaryGraph g = threshold_and_repair(WeightedAdjacency(w), 0.3);
  EXPECT_FALSE(g.has_edge(2, 0));
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_TRUE(g.has_edge(3, 0));
}

TEST(Repair, AlwaysAcyclicAndSubsetOfThreshold) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 2 + t % 8;
    DenseMatrix w = testing::random_matrix(d, d, rng, 0.0, 1.0);
    for (std::size_t i = 0; i < d; ++i) w(i, i) = 0.0;
    const BinaryGraph g = threshold_and_repair(WeightedAdjacency(w), 0.3);
    EXPECT_TRUE(is_acyclic(g));
    for (const auto& e : g.edges()) EXPECT_GT(w(e.from, e.to), 0.3);
  }
}

TEST(Outer, SingleBlockExitsAfterFirstIteration) {
  TrainConfig c = small_config();
  c.num_blocks = 1;
  std::mt19937_64 rng(10);
  const TrainResult r = outer_loop(c, testing::normal_matrix(100, 4, rng));
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_LT(r.history[0].h, 1e-8);
  EXPECT_TRUE(r.converged);
}

TEST(Outer, DeterministicHistoryAndGraph) {
  const TrainConfig c = small_config();
  const DenseMatrix data = standardize(chain_data(120, 4), fit_standardization(chain_data(120, 4)));
  const TrainResult a = outer_loop(c, data);
  const TrainResult b = outer_loop(c, data);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t k = 0; k < a.history.size(); ++k) {
    EXPECT_EQ(a.history[k].nll, b.history[k].nll);
    EXPECT_EQ(a.history[k].h, b.history[k].h);
    EXPECT_EQ(a.history[k].rho, b.history[k].rho);
  }
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.flow, b.flow);
}

TEST(Outer, InvariantsAndObserver) {
  TrainConfig c = small_config();
  c.max_outer_iters = 4;
  const DenseMatrix data = standardize(chain_data(120, 5), fit_standardization(chain_data(120, 5)));
  std::size_t calls = 0;
  const TrainResult r = outer_loop(c, data, [&](const IterationRecord& rec, const WeightedAdjacency&,
                                                const BinaryGraph& g) {
    EXPECT_EQ(rec.iteration, calls++);
    EXPECT_TRUE(is_acyclic(g));
    EXPECT_EQ(rec.edges, g.edge_count());
  });
  EXPECT_EQ(calls, r.history.size());
  EXPECT_TRUE(is_acyclic(r.graph));
  for (std::size_t k = 1; k < r.history.size(); ++k) {
    EXPECT_GE(r.history[k].rho, r.history[k - 1].rho);
    EXPECT_GE(r.history[k].lambda, r.history[k - 1].lambda);
  }
  EXPECT_EQ(r.converged, r.history.back().h < c.h_tolerance);
  EXPECT_FALSE(r.status.empty());
}

TEST(Outer, ScheduleMatchesRecordedH) {
  TrainConfig c = small_config();
  c.max_outer_iters = 4;
  const DenseMatrix data = standardize(chain_data(120, 6), fit_standardization(chain_data(120, 6)));
  const TrainResult r = outer_loop(c, data);
  PenaltySchedule replay(c.lambda_init, c.rho_init);
  for (const auto& rec : r.history) {
    replay.update(rec.h);
    EXPECT_EQ(rec.lambda, replay.lambda());
    EXPECT_EQ(rec.rho, replay.rho());
  }
}

TEST(Log, KeyValueLine) {
  IterationRecord r;
  r.iteration = 3;
  r.nll = 1.5;
  r.h = 0.25;
  r.lambda = 2.0;
  r.rho = 10.0;
  r.edges = 7;
  const std::string line = format_log_line(r);
  for (const char* key : {"iter=3", "nll=1.5", "h=0.25", "lambda=2", "rho=10", "edges=7"})
    EXPECT_NE(line.find(key), std::string::npos) << line;
}

TEST(Standardization, UnitMomentsAndConstantColumn) {
  std::mt19937_64 rng(11);
  DenseMatrix x = testing::normal_matrix(500, 3, rng);
  for (std::size_t i = 0; i < 500; ++i) x(i, 1) = 5.0 + 3.0 * x(i, 1);
  const DenseMatrix z = standardize(x, fit_standardization(x));
  for (std::size_t j = 0; j < 3; ++j) {
    double m = 0.0, v = 0.0;
    for (std::size_t i = 0; i < 500; ++i) m += z(i, j);
    m /= 500;
    for (std::size_t i = 0; i < 500; ++i) v += (z(i, j) - m) * (z(i, j) - m);
    EXPECT_NEAR(m, 0.0, 1e-12);
    EXPECT_NEAR(v / 500, 1.0, 1e-12);
  }
  DenseMatrix c(10, 2, 1.0);
  EXPECT_THROW(fit_standardization(c), Error);
}

}  // namespace
}  // namespace dagflow
