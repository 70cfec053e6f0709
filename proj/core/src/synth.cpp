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

#include "dagflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dagflow/errors.hpp"

namespace dagflow {

namespace {

constexpr std::size_t kMlpHidden = 100;

std::vector<double> gp_draw(const DenseMatrix& points, std::mt19937_64& rng) {
  const std::size_t n = points.rows();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(n);
  for (double& v : z) v = normal(rng);

  for (double jitter = 1e-6; jitter <= 1e-1; jitter *= 10.0) {
    try {
      const DenseMatrix l = cholesky_lower(rbf_kernel(points, jitter));
      std::vector<double> f(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double* li = &l(i, 0);
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) s += li[k] * z[k];
        f[i] = s;
      }
      return f;
    } catch (const Error& e) {
      if (e.category() != ErrorCategory::kNumerical) throw;
    }
  }
  throw numerical_error("GP sampling: kernel matrix not positive definite after jitter escalation");
}

DenseMatrix parent_columns(const DenseMatrix& x, const std::vector<std::size_t>& parents) {
  DenseMatrix p(x.rows(), parents.size());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < parents.size(); ++k) p(i, k) = x(i, parents[k]);
  return p;
}

std::vector<double> mlp_draw(const DenseMatrix& points, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t in = points.cols();
  DenseMatrix w1(in, kMlpHidden);
  std::vector<double> b1(kMlpHidden), w2(kMlpHidden);
  for (double& v : w1.data()) v = normal(rng);
  for (double& v : b1) v = normal(rng);
  for (double& v : w2) v = normal(rng);
  std::vector<double> f(points.rows(), 0.0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    for (std::size_t h = 0; h < kMlpHidden; ++h) {
      double a = b1[h];
      for (std::size_t k = 0; k < in; ++k) a += points(i, k) * w1(k, h);
      f[i] += w2[h] * std::tanh(a);
    }
  }
  return f;
}

}  // namespace

Mechanism parse_mechanism(const std::string& name) {
  if (name == "gp") return Mechanism::kGP;
  if (name == "mlp") return Mechanism::kMLP;
  if (name == "gp-add" || name == "additive-gp") return Mechanism::kAdditiveGP;
  throw invalid_argument("unknown mechanism '" + name + "' (expected gp, mlp, gp-add)");
}

std::string mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::kGP: return "gp";
    case Mechanism::kMLP: return "mlp";
    case Mechanism::kAdditiveGP: return "gp-add";
  }
  return "gp";
}

GroundTruth sample_er_dag(std::size_t d, double edges_per_node, std::uint64_t seed,
                          Mechanism mechanism, bool random_noise_scale) {
  if (d < 2) throw invalid_argument("sample_er_dag: need at least 2 nodes");
  if (!(edges_per_node >= 0.0)) throw invalid_argument("sample_er_dag: edges per node must be >= 0");
  const double pairs = static_cast<double>(d * (d - 1)) / 2.0;
  const double expected = edges_per_node * static_cast<double>(d);
  if (expected > pairs) {
    throw invalid_argument("sample_er_dag: " + std::to_string(expected) + " expected edges exceed the " +
                           std::to_string(static_cast<std::size_t>(pairs)) + " available pairs");
  }
  const double p = expected / pairs;

  std::mt19937_64 rng(seed);
  GroundTruth gt;
  gt.mechanism = mechanism;
  gt.topo_order.resize(d);
  std::iota(gt.topo_order.begin(), gt.topo_order.end(), std::size_t{0});
  std::shuffle(gt.topo_order.begin(), gt.topo_order.end(), rng);
  gt.graph = BinaryGraph(d);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b)
      if (unit(rng) < p) gt.graph.add_edge(gt.topo_order[a], gt.topo_order[b]);

  gt.noise_scale.assign(d, 1.0);
  if (random_noise_scale) {
    std::uniform_real_distribution<double> sigma(1.0, 2.0);
    for (double& s : gt.noise_scale) s = sigma(rng);
  }
  return gt;
}

std::uint64_t node_seed(std::uint64_t seed, std::size_t node) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(node), 0x5e3du};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

DenseMatrix rbf_kernel(const DenseMatrix& points, double jitter) {
  const std::size_t n = points.rows();
  DenseMatrix k(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    k(a, a) = 1.0 + jitter;
    for (std::size_t b = a + 1; b < n; ++b) {
      double r2 = 0.0;
      for (std::size_t c = 0; c < points.cols(); ++c) {
        const double diff = points(a, c) - points(b, c);
        r2 += diff * diff;
      }
      k(a, b) = k(b, a) = std::exp(-0.5 * r2);
    }
  }
  return k;
}

DenseMatrix simulate_sem(const GroundTruth& truth, std::size_t n, std::uint64_t seed) {
  std::vector<std::uint64_t> seeds(truth.graph.num_nodes());
  for (std::size_t j = 0; j < seeds.size(); ++j) seeds[j] = node_seed(seed, j);
  return simulate_sem(truth, n, seeds);
}

DenseMatrix simulate_sem(const GroundTruth& truth, std::size_t n,
                         const std::vector<std::uint64_t>& node_seeds) {
  const std::size_t d = truth.graph.num_nodes();
  if (n == 0) throw invalid_argument("simulate_sem: need at least one sample");
  if (node_seeds.size() != d || truth.topo_order.size() != d) {
    throw invalid_argument("simulate_sem: ground truth and seeds disagree on node count");
  }
  DenseMatrix x(n, d);
  for (std::size_t node : truth.topo_order) {
    std::mt19937_64 rng(node_seeds[node]);
    std::vector<std::size_t> parents;
    for (std::size_t k = 0; k < d; ++k)
      if (truth.graph.has_edge(k, node)) parents.push_back(k);

    std::vector<double> f(n, 0.0);
    if (!parents.empty()) {
      const DenseMatrix p = parent_columns(x, parents);
      switch (truth.mechanism) {
        case Mechanism::kGP:
          f = gp_draw(p, rng);
          break;
        case Mechanism::kMLP:
          f = mlp_draw(p, rng);
          break;
        case Mechanism::kAdditiveGP:
          for (std::size_t k = 0; k < parents.size(); ++k) {
            const auto part = gp_draw(parent_columns(x, {parents[k]}), rng);
            for (std::size_t i = 0; i < n; ++i) f[i] += part[i];
          }
          break;
      }
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sigma = truth.noise_scale.empty() ? 1.0 : truth.noise_scale[node];
    for (std::size_t i = 0; i < n; ++i) x(i, node) = f[i] + sigma * normal(rng);
  }
  return x;
}

}  // namespace dagflow
