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

#include "dagflow/graph.hpp"

#include <queue>
#include <string>

#include "dagflow/errors.hpp"

namespace dagflow {

BinaryGraph::BinaryGraph(std::size_t d, const std::vector<Edge>& edges) : BinaryGraph(d) {
  for (const Edge& e : edges) add_edge(e.from, e.to);
}

BinaryGraph BinaryGraph::from_weights(const DenseMatrix& m, double threshold) {
  if (!m.is_square()) throw invalid_argument("BinaryGraph::from_weights: matrix must be square");
  BinaryGraph g(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) > threshold) g.add_edge(i, j);
  return g;
}

void BinaryGraph::add_edge(std::size_t from, std::size_t to) {
  if (from >= d_ || to >= d_) {
    throw invalid_argument("BinaryGraph: edge " + std::to_string(from) + "->" +
                           std::to_string(to) + " out of range for " + std::to_string(d_) +
                           " nodes");
  }
  adj_[from * d_ + to] = 1;
}

void BinaryGraph::remove_edge(std::size_t from, std::size_t to) {
  if (from >= d_ || to >= d_) throw invalid_argument("BinaryGraph: edge out of range");
  adj_[from * d_ + to] = 0;
}

std::size_t BinaryGraph::edge_count() const noexcept {
  std::size_t n = 0;
  for (auto v : adj_) n += v;
  return n;
}

std::vector<Edge> BinaryGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j)
      if (has_edge(i, j)) out.push_back({i, j});
  return out;
}

DenseMatrix BinaryGraph::to_matrix() const {
  DenseMatrix m(d_, d_);
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j) m(i, j) = has_edge(i, j) ? 1.0 : 0.0;
  return m;
}

std::optional<std::vector<std::size_t>> topological_order(const BinaryGraph& g) {
  const std::size_t d = g.num_nodes();
  std::vector<std::size_t> indegree(d, 0);
  for (std::size_t u = 0; u < d; ++u)
    for (std::size_t v = 0; v < d; ++v)
      if (g.has_edge(u, v)) ++indegree[v];

  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < d; ++v)
    if (indegree[v] == 0) ready.push(v);

  std::vector<std::size_t> order;
  order.reserve(d);
  while (!ready.empty()) {
    const std::size_t u = ready.top();
    ready.pop();
    order.push_back(u);
    for (std::size_t v = 0; v < d; ++v) {
      if (g.has_edge(u, v) && --indegree[v] == 0) ready.push(v);
    }
  }
  if (order.size() != d) return std::nullopt;
  return order;
}

bool is_acyclic(const BinaryGraph& g) { return topological_order(g).has_value(); }

std::vector<std::vector<bool>> reachability(const BinaryGraph& g) {
  const std::size_t d = g.num_nodes();
  std::vector<std::vector<bool>> reach(d, std::vector<bool>(d, false));
  for (std::size_t s = 0; s < d; ++s) {
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < d; ++v)
      if (g.has_edge(s, v) && !reach[s][v]) {
        reach[s][v] = true;
        stack.push_back(v);
      }
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < d; ++v)
        if (g.has_edge(u, v) && !reach[s][v]) {
          reach[s][v] = true;
          stack.push_back(v);
        }
    }
  }
  return reach;
}

}  // namespace dagflow
