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
#include <random>
#include <sstream>

#include "dagflow/errors.hpp"
#include "dagflow/graph.hpp"
#include "dagflow/linalg.hpp"
#include "support.hpp"

namespace dagflow {
namespace {

using testing::max_abs_diff;
using testing::naive_matmul;
using testing::random_matrix;
using testing::taylor_exp;

TEST(Matmul, IdentityIsNeutral) {
  std::mt19937_64 rng(1);
  const DenseMatrix a = random_matrix(3, 3, rng);
  EXPECT_EQ(matmul(DenseMatrix::identity(3), a), a);
}

TEST(Matmul, HandExample) {
  const DenseMatrix a{{1, 2}, {3, 4}};
  const DenseMatrix b{{0, 1}, {1, 0}};
  EXPECT_EQ(matmul(a, b), (DenseMatrix{{2, 1}, {4, 3}}));
}

TEST(Matmul, Associative) {
  std::mt19937_64 rng(2);
  const DenseMatrix a = random_matrix(5, 5, rng), b = random_matrix(5, 5, rng), c = random_matrix(5, 5, rng);
  EXPECT_LE(max_abs_diff(matmul(matmul(a, b), c), matmul(a, matmul(b, c))), 1e-12);
}

TEST(Matmul, AgreesWithTripleLoop) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const DenseMatrix a = random_matrix(7, 4, rng), b = random_matrix(4, 9, rng);
    EXPECT_LE(max_abs_diff(matmul(a, b), naive_matmul(a, b)), 1e-12);
  }
}

TEST(Matmul, DimensionMismatchThrows) {
  EXPECT_THROW(matmul(DenseMatrix(2, 3), DenseMatrix(2, 3)), Error);
}

TEST(Hadamard, Examples) {
  std::mt19937_64 rng(4);
  const DenseMatrix a = random_matrix(3, 4, rng);
  EXPECT_EQ(hadamard(a, DenseMatrix(3, 4, 1.0)), a);
  EXPECT_EQ(hadamard(a, DenseMatrix(3, 4, 0.0)), DenseMatrix(3, 4, 0.0));
  const DenseMatrix s{{1, 2}, {3, 4}};
  EXPECT_EQ(hadamard(s, s), (DenseMatrix{{1, 4}, {9, 16}}));
  EXPECT_THROW(hadamard(DenseMatrix(2, 2), DenseMatrix(2, 3)), Error);
}

TEST(Trace, AgreesWithLoop) {
  std::mt19937_64 rng(5);
  const DenseMatrix a = random_matrix(6, 6, rng);
  double t = 0.0;
  for (std::size_t i = 0; i < 6; ++i) t += a(i, i);
  EXPECT_NEAR(trace(a), t, 1e-12);
}

TEST(MatrixExp, ZeroGivesIdentity) {
  EXPECT_EQ(matrix_exp(DenseMatrix(4, 4)), DenseMatrix::identity(4));
}

TEST(MatrixExp, Nilpotent) {
  EXPECT_LE(max_abs_diff(matrix_exp(DenseMatrix{{0, 1}, {0, 0}}), DenseMatrix{{1, 1}, {0, 1}}), 1e-15);
}

TEST(MatrixExp, SwapMatrixGivesHyperbolicFunctions) {
  const DenseMatrix e = matrix_exp(DenseMatrix{{0, 1}, {1, 0}});
  const DenseMatrix oracle = taylor_exp(DenseMatrix{{0, 1}, {1, 0}});
  EXPECT_LE(max_abs_diff(e, oracle), 1e-14);
  EXPECT_NEAR(e(0, 0), 1.5430806348152437, 1e-14);
  EXPECT_NEAR(e(0, 1), 1.1752011936438014, 1e-14);
}

TEST(MatrixExp, StrictlyTriangularEqualsFiniteSeries) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    DenseMatrix a = random_matrix(5, 5, rng, -2.0, 2.0);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = 0.0;
    DenseMatrix sum = DenseMatrix::identity(5), term = DenseMatrix::identity(5);
    for (int k = 1; k < 5; ++k) {
      term = scale(naive_matmul(term, a), 1.0 / k);
      sum = add(sum, term);
    }
    EXPECT_LE(max_abs_diff(matrix_exp(a), sum), 1e-12);
  }
}

TEST(MatrixExp, MatchesTaylorOracleUpToSpectralRadiusTen) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    DenseMatrix a = random_matrix(4, 4, rng, -1.0, 1.0);
    // Scale so the spectral radius is at most 10 (1-norm bounds it).
    const double target = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
    a = scale(a, target / norm_one(a));
    const DenseMatrix e = matrix_exp(a);
    const DenseMatrix oracle = taylor_exp(a);
    double scale_ref = 0.0;
    for (double v : oracle.data()) scale_ref = std::max(scale_ref, std::abs(v));
    EXPECT_LE(max_abs_diff(e, oracle) / scale_ref, 1e-10) << "trial " << t;
  }
}

TEST(MatrixExp, Errors) {
  EXPECT_THROW(matrix_exp(DenseMatrix(2, 3)), Error);
  EXPECT_THROW(matrix_exp(DenseMatrix{{0, NAN}, {0, 0}}), Error);
}

TEST(MatrixPowerTrace, Examples) {
  EXPECT_DOUBLE_EQ(matrix_power_trace(DenseMatrix(3, 3), 1.0, 3), 3.0);
  EXPECT_DOUBLE_EQ(matrix_power_trace(DenseMatrix{{0, 1}, {1, 0}}, 1.0, 2), 4.0);
  EXPECT_DOUBLE_EQ(matrix_power_trace(DenseMatrix{{0, 1}, {0, 0}}, 1.0, 2), 2.0);
  EXPECT_THROW(matrix_power_trace(DenseMatrix(2, 2), 0.0, 2), Error);
  EXPECT_THROW(matrix_power_trace(DenseMatrix(2, 2), -1.0, 2), Error);
}

TEST(Cholesky, ReconstructsAndRejectsIndefinite) {
  std::mt19937_64 rng(8);
  const DenseMatrix b = random_matrix(5, 5, rng);
  const DenseMatrix spd = add(matmul(b, transpose(b)), DenseMatrix::identity(5));
  const DenseMatrix l = cholesky_lower(spd);
  EXPECT_LE(max_abs_diff(matmul(l, transpose(l)), spd), 1e-12);
  EXPECT_THROW(cholesky_lower(DenseMatrix{{1, 2}, {2, 1}}), Error);
}

TEST(MatrixText, RoundTrip) {
  std::mt19937_64 rng(9);
  const DenseMatrix a = random_matrix(3, 4, rng);
  std::stringstream s;
  write_matrix_text(s, a);
  EXPECT_EQ(read_matrix_text(s), a);
  std::istringstream bad("2 2\n1 2 3\n");
  EXPECT_THROW(read_matrix_text(bad), Error);
}

TEST(IsAcyclic, Examples) {
  EXPECT_TRUE(is_acyclic(BinaryGraph(3)));
  EXPECT_FALSE(is_acyclic(BinaryGraph(2, {{0, 1}, {1, 0}})));
  EXPECT_TRUE(is_acyclic(BinaryGraph(3, {{0, 1}, {1, 2}})));
  EXPECT_FALSE(is_acyclic(BinaryGraph(2, {{1, 1}})));
}

TEST(IsAcyclic, AgreesWithPeelingOracle) {
  std::mt19937_64 rng(10);
  std::bernoulli_distribution coin(0.25);
  for (int t = 0; t < 2000; ++t) {
    BinaryGraph g(6);
    for (std::size_t u = 0; u < 6; ++u)
      for (std::size_t v = 0; v < 6; ++v)
        if (u != v && coin(rng)) g.add_edge(u, v);
    EXPECT_EQ(is_acyclic(g), testing::acyclic_by_peeling(g.to_matrix()));
  }
}

TEST(TopologicalOrder, RespectsEdges) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const BinaryGraph g = testing::random_dag(8, 0.4, rng);
    const auto order = topological_order(g);
    ASSERT_TRUE(order.has_value());
    std::vector<std::size_t> pos(8);
    for (std::size_t i = 0; i < 8; ++i) pos[(*order)[i]] = i;
    for (const Edge& e : g.edges()) EXPECT_LT(pos[e.from], pos[e.to]);
  }
}

TEST(Reachability, Chain) {
  const auto r = reachability(BinaryGraph(3, {{0, 1}, {1, 2}}));
  EXPECT_TRUE(r[0][2]);
  EXPECT_FALSE(r[2][0]);
  EXPECT_FALSE(r[0][0]);
}

}  // namespace
}  // namespace dagflow
