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
#include <string>
#include <vector>

#include "dagflow/graph.hpp"
#include "dagflow/linalg.hpp"

namespace dagflow {

enum class Mechanism { kGP, kMLP, kAdditiveGP };

Mechanism parse_mechanism(const std::string& name);
std::string mechanism_name(Mechanism m);

struct GroundTruth {
  BinaryGraph graph;
  std::vector<std::size_t> topo_order;
  Mechanism mechanism = Mechanism::kGP;
  std::vector<double> noise_scale;
};

// Erdos-Renyi DAG with `edges_per_node * d` expected edges: a random
// permutation fixes the topological order and each of the d(d-1)/2 forward
// pairs is kept independently with p = edges_per_node * d / (d(d-1)/2).
// Throws if that budget exceeds the number of forward pairs.
GroundTruth sample_er_dag(std::size_t d, double edges_per_node, std::uint64_t seed,
                          Mechanism mechanism = Mechanism::kGP, bool random_noise_scale = false);

// Seed used for node j's mechanism and noise draws.
std::uint64_t node_seed(std::uint64_t seed, std::size_t node);

// X_j = f_j(X_pa(j)) + sigma_j z_j in topological order. Roots are pure noise.
//   GP:          f_j realised on the n parent rows as one joint draw from a
//                zero-mean GP with unit-bandwidth, unit-variance RBF kernel.
//   MLP:         tanh network with 100 hidden units and N(0, 1) weights.
//   AdditiveGP:  sum over parents of independent one-dimensional GP draws.
// All randomness for node j comes from node_seeds[j].
DenseMatrix simulate_sem(const GroundTruth& truth, std::size_t n, std::uint64_t seed);
DenseMatrix simulate_sem(const GroundTruth& truth, std::size_t n,
                         const std::vector<std::uint64_t>& node_seeds);

// RBF kernel over rows of `points` with `jitter` added to the diagonal.
DenseMatrix rbf_kernel(const DenseMatrix& points, double jitter);

}  // namespace dagflow
