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

#include <string>
#include <vector>

#include "dagflow/graph.hpp"

namespace dagflow {

// Graphviz digraph. With `previous`, edges absent from it are drawn blue and
// edges that disappeared are kept as red dashed entries; unchanged edges are
// plain.
std::string emit_dot(const BinaryGraph& graph, const std::vector<std::string>& names,
                     const BinaryGraph* previous = nullptr);

// "+ src dst" for added edges and "- src dst" for removed ones.
std::string edge_diff(const BinaryGraph& previous, const BinaryGraph& current,
                      const std::vector<std::string>& names);

}  // namespace dagflow
