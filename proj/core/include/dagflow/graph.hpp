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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dagflow/linalg.hpp"

namespace dagflow {

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Directed graph over nodes 0..d-1 stored as a dense boolean adjacency.
// Self-loops are allowed in the representation (they count as cycles).
class BinaryGraph {
 public:
  BinaryGraph() = default;
  explicit BinaryGraph(std::size_t d) : d_(d), adj_(d * d, 0) {}
  BinaryGraph(std::size_t d, const std::vector<Edge>& edges);

  // Edge u->v wherever m(u, v) > threshold.
  static BinaryGraph from_weights(const DenseMatrix& m, double threshold);

  std::size_t num_nodes() const noexcept { return d_; }
  bool has_edge(std::size_t from, std::size_t to) const { return adj_[from * d_ + to] != 0; }
  void add_edge(std::size_t from, std::size_t to);
  void remove_edge(std::size_t from, std::size_t to);
  std::size_t edge_count() const noexcept;

  // Edges sorted by (from, to).
  std::vector<Edge> edges() const;
  DenseMatrix to_matrix() const;

  friend bool operator==(const BinaryGraph&, const BinaryGraph&) = default;

 private:
  std::size_t d_ = 0;
  std::vector<std::uint8_t> adj_;
};

// Kahn's algorithm. Ties are broken by smallest node index, so the order is
// deterministic. Empty when the graph has a cycle.
std::optional<std::vector<std::size_t>> topological_order(const BinaryGraph& g);

bool is_acyclic(const BinaryGraph& g);

// reach(u, v) is true iff there is a directed path of length >= 1 from u to v.
std::vector<std::vector<bool>> reachability(const BinaryGraph& g);

}  // namespace dagflow
