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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dagflow/errors.hpp"
#include "dagflow/graph.hpp"
#include "dagflow/synth.hpp"
#include "support.hpp"

namespace dagflow {
namespace {

GroundTruth make_truth(std::size_t d, const std::vector<Edge>& edges, Mechanism m = Mechanism::kGP) {
  GroundTruth gt;
  gt.graph = BinaryGraph(d, edges);
  gt.topo_order = *topological_order(gt.graph);
  gt.mechanism = m;
  gt.noise_scale.assign(d, 1.0);
  return gt;
}

std::vector<double> column(const DenseMatrix& x, std::size_t j) {
  std::vector<double> c(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) c[i] = x(i, j);
  return c;
}

// Share of the variance of y explained by decile bins of x.
double correlation_ratio(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double total = 0.0, between = 0.0;
  for (double v : y) total += (v - mean) * (v - mean);
  const std::size_t bins = 10, per = y.size() / bins;
  for (std::size_t b = 0; b < bins; ++b) {
    double m = 0.0;
    for (std::size_t k = b * per; k < (b + 1) * per; ++k) m += y[idx[k]];
    m /= per;
    between += per * (m - mean) * (m - mean);
  }
  return between / total;
}

TEST(ErDag, ExpectedEdgeCount) {
  double total = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const GroundTruth gt = sample_er_dag(10, 1.0, s);
    ASSERT_TRUE(is_acyclic(gt.graph));
    total += gt.graph.edge_count();
  }
  EXPECT_NEAR(total / 1000.0, 10.0, 0.5);
  double dense = 0.0;
  for (std::uint64_t s = 0; s < 300; ++s) dense += sample_er_dag(10, 4.0, s).graph.edge_count();
  EXPECT_NEAR(dense / 300.0, 40.0, 0.5);
}

TEST(ErDag, TopologicalOrderIsConsistent) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const GroundTruth gt = sample_er_dag(8, 2.0, s);
    std::vector<std::size_t> pos(8);
    for (std::size_t i = 0; i < 8; ++i) pos[gt.topo_order[i]] = i;
    for (const Edge& e : gt.graph.edges()) EXPECT_LT(pos[e.from], pos[e.to]);
  }
}

TEST(ErDag, InfeasibleBudgetThrows) {
  EXPECT_THROW(sample_er_dag(2, 1.0, 0), Error);
  EXPECT_THROW(sample_er_dag(1, 0.0, 0), Error);
  EXPECT_THROW(sample_er_dag(10, 5.0, 0), Error);
  EXPECT_NO_THROW(sample_er_dag(10, 4.5, 0));
}

TEST(ErDag, NoiseScaleOption) {
  EXPECT_EQ(sample_er_dag(6, 1.0, 0).noise_scale, std::vector<double>(6, 1.0));
  for (double s : sample_er_dag(6, 1.0, 0, Mechanism::kGP, true).noise_scale) {
    EXPECT_GE(s, 1.0);
    EXPECT_LE(s, 2.0);
  }
}

TEST(Sem, EmptyGraphIsStandardNoise) {
  const std::size_t n = 100000;
  const DenseMatrix x = simulate_sem(make_truth(3, {}), n, 1);
  for (std::size_t j = 0; j < 3; ++j) {
    const std::vector<double> c = column(x, j);
    const double m = std::accumulate(c.begin(), c.end(), 0.0) / n;
    double v = 0.0;
    for (double e : c) v += (e - m) * (e - m);
    v /= (n - 1);
    EXPECT_NEAR(m, 0.0, 3.0 / std::sqrt(n));
    EXPECT_NEAR(v, 1.0, 3.0 * std::sqrt(2.0 / (n - 1)));
  }
}

TEST(Sem, ChildDependsOnParentRootsIndependent) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const DenseMatrix x = simulate_sem(make_truth(3, {{0, 1}}), 1000, s);
    EXPECT_GT(correlation_ratio(column(x, 0), column(x, 1)), 0.05);
    EXPECT_LT(correlation_ratio(column(x, 0), column(x, 2)), 0.05);
  }
}

TEST(Sem, DeterministicUnderSeed) {
  for (Mechanism m : {Mechanism::kGP, Mechanism::kMLP, Mechanism::kAdditiveGP}) {
    const GroundTruth gt = sample_er_dag(6, 1.0, 3, m);
    const DenseMatrix a = simulate_sem(gt, 200, 9), b = simulate_sem(gt, 200, 9);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(a.all_finite());
    EXPECT_FALSE(a == simulate_sem(gt, 200, 10));
  }
}

TEST(Sem, ColumnsDependOnlyOnAncestorSeeds) {
  for (Mechanism m : {Mechanism::kGP, Mechanism::kMLP, Mechanism::kAdditiveGP}) {
    const GroundTruth gt = sample_er_dag(6, 1.5, 4, m);
    const auto reach = reachability(gt.graph);
    std::vector<std::uint64_t> seeds(6);
    for (std::size_t j = 0; j < 6; ++j) seeds[j] = node_seed(77, j);
    const DenseMatrix base = simulate_sem(gt, 150, seeds);
    for (std::size_t k = 0; k < 6; ++k) {
      std::vector<std::uint64_t> changed = seeds;
      changed[k] ^= 0xabcdef;
      const DenseMatrix x = simulate_sem(gt, 150, changed);
      for (std::size_t j = 0; j < 6; ++j) {
        const bool affected = j == k || reach[k][j];
        if (!affected) EXPECT_EQ(column(x, j), column(base, j)) << "node " << k << " column " << j;
        else EXPECT_NE(column(x, j), column(base, j)) << "node " << k << " column " << j;
      }
    }
  }
}

TEST(Sem, NoiseScaleMultipliesRootNoise) {
  GroundTruth gt = make_truth(2, {});
  const DenseMatrix a = simulate_sem(gt, 50, 3);
  gt.noise_scale = {2.0, 1.0};
  const DenseMatrix b = simulate_sem(gt, 50, 3);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_DOUBLE_EQ(b(i, 0), 2.0 * a(i, 0));
    EXPECT_EQ(b(i, 1), a(i, 1));
  }
}

TEST(Kernel, SymmetricUnitDiagonalPositiveDefinite) {
  std::mt19937_64 rng(5);
  const DenseMatrix pts = testing::normal_matrix(40, 2, rng);
  const DenseMatrix k = rbf_kernel(pts, 1e-6);
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_DOUBLE_EQ(k(i, i), 1.0 + 1e-6);
    for (std::size_t j = 0; j < 40; ++j) EXPECT_EQ(k(i, j), k(j, i));
  }
  const double sq = (pts(0, 0) - pts(1, 0)) * (pts(0, 0) - pts(1, 0)) + (pts(0, 1) - pts(1, 1)) * (pts(0, 1) - pts(1, 1));
  EXPECT_NEAR(k(0, 1), std::exp(-0.5 * sq), 1e-15);
  EXPECT_NO_THROW(cholesky_lower(k));
}

TEST(Mechanisms, NamesRoundTrip) {
  for (Mechanism m : {Mechanism::kGP, Mechanism::kMLP, Mechanism::kAdditiveGP})
    EXPECT_EQ(parse_mechanism(mechanism_name(m)), m);
  EXPECT_THROW(parse_mechanism("quadratic"), Error);
}

}  // namespace
}  // namespace dagflow
