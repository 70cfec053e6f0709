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

#include <optional>
#include <string>
#include <vector>

#include "dagflow/graph.hpp"

namespace dagflow {

// Raf, Mek, Plcg, PIP2, PIP3, Erk, Akt, PKA, PKC, P38, Jnk.
const std::vector<std::string>& sachs_variable_names();

// 17-edge consensus signaling network over sachs_variable_names().
BinaryGraph load_sachs_ground_truth();

// Index into sachs_variable_names() for a dataset column header. Matching is
// case-insensitive and accepts common spellings such as "praf", "p44/42",
// "pakt", "plc" or "pjnk".
std::optional<std::size_t> sachs_index(const std::string& column);

// Consensus graph re-indexed to the dataset's column order. Throws
// invalid_argument if the columns are not a permutation of the 11 proteins.
BinaryGraph sachs_truth_for_columns(const std::vector<std::string>& columns);

}  // namespace dagflow
