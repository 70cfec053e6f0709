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

#include "dagflow/dot.hpp"

#include <sstream>

#include "dagflow/errors.hpp"

namespace dagflow {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string emit_dot(const BinaryGraph& graph, const std::vector<std::string>& names,
                     const BinaryGraph* previous) {
  if (names.size() != graph.num_nodes()) throw invalid_argument("emit_dot: wrong number of names");
  if (previous && previous->num_nodes() != graph.num_nodes()) {
    throw invalid_argument("emit_dot: previous graph has a different node count");
  }
  std::ostringstream out;
  out << "digraph G {\n";
  for (const auto& name : names) out << "  " << quoted(name) << ";\n";
  for (const Edge& e : graph.edges()) {
    out << "  " << quoted(names[e.from]) << " -> " << quoted(names[e.to]);
    if (previous && !previous->has_edge(e.from, e.to)) out << " [color=blue, status=new]";
    out << ";\n";
  }
  if (previous) {
    for (const Edge& e : previous->edges()) {
      if (graph.has_edge(e.from, e.to)) continue;
      out << "  " << quoted(names[e.from]) << " -> " << quoted(names[e.to])
          << " [color=red, style=dashed, status=removed];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string edge_diff(const BinaryGraph& previous, const BinaryGraph& current,
                      const std::vector<std::string>& names) {
  std::ostringstream out;
  for (const Edge& e : current.edges())
    if (!previous.has_edge(e.from, e.to)) out << "+ " << names[e.from] << ' ' << names[e.to] << '\n';
  for (const Edge& e : previous.edges())
    if (!current.has_edge(e.from, e.to)) out << "- " << names[e.from] << ' ' << names[e.to] << '\n';
  return out.str();
}

}  // namespace dagflow
