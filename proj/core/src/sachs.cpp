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

#include "dagflow/sachs.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "dagflow/errors.hpp"

namespace dagflow {

namespace {

enum : std::size_t { kRaf, kMek, kPlcg, kPIP2, kPIP3, kErk, kAkt, kPKA, kPKC, kP38, kJnk };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

const std::vector<std::string>& sachs_variable_names() {
  static const std::vector<std::string> names{"Raf", "Mek", "Plcg", "PIP2", "PIP3", "Erk",
                                              "Akt", "PKA", "PKC",  "P38",  "Jnk"};
  return names;
}

BinaryGraph load_sachs_ground_truth() {
  static const std::vector<Edge> edges{
      {kRaf, kMek},  {kMek, kErk},  {kPlcg, kPIP2}, {kPlcg, kPIP3}, {kPIP3, kPIP2}, {kErk, kAkt},
      {kPKA, kRaf},  {kPKA, kErk},  {kPKA, kAkt},   {kPKA, kMek},   {kPKA, kP38},   {kPKA, kJnk},
      {kPKC, kMek},  {kPKC, kP38},  {kPKC, kRaf},   {kPKC, kPKA},   {kPKC, kJnk},
  };
  return BinaryGraph(sachs_variable_names().size(), edges);
}

std::optional<std::size_t> sachs_index(const std::string& column) {
  static const std::vector<std::pair<std::string, std::size_t>> aliases{
      {"raf", kRaf},       {"praf", kRaf},      {"mek", kMek},    {"pmek", kMek},   {"mek1/2", kMek},
      {"plcg", kPlcg},     {"plc", kPlcg},      {"plcgamma", kPlcg}, {"pip2", kPIP2}, {"pip3", kPIP3},
      {"erk", kErk},       {"p44/42", kErk},    {"erk1/2", kErk}, {"akt", kAkt},    {"pakt", kAkt},
      {"akt473", kAkt},    {"pakts473", kAkt},  {"pka", kPKA},    {"pkc", kPKC},    {"p38", kP38},
      {"jnk", kJnk},       {"pjnk", kJnk},
  };
  const std::string key = lower(column);
  for (const auto& [alias, index] : aliases)
    if (alias == key) return index;
  return std::nullopt;
}

BinaryGraph sachs_truth_for_columns(const std::vector<std::string>& columns) {
  const std::size_t d = sachs_variable_names().size();
  if (columns.size() != d) {
    throw invalid_argument("Sachs truth needs 11 columns, dataset has " + std::to_string(columns.size()));
  }
  std::vector<std::size_t> column_of(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    const auto idx = sachs_index(columns[c]);
    if (!idx) throw invalid_argument("column '" + columns[c] + "' is not a Sachs protein");
    if (column_of[*idx] != d) throw invalid_argument("column '" + columns[c] + "' appears twice");
    column_of[*idx] = c;
  }
  const BinaryGraph canonical = load_sachs_ground_truth();
  BinaryGraph out(d);
  for (const Edge& e : canonical.edges()) out.add_edge(column_of[e.from], column_of[e.to]);
  return out;
}

}  // namespace dagflow
