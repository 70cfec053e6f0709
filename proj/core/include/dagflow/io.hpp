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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dagflow/dag_constraint.hpp"
#include "dagflow/graph.hpp"
#include "dagflow/linalg.hpp"

namespace dagflow {

// Header row of variable names followed by numeric rows. Numbers use a
// decimal point and optional exponent; there is no locale handling.
struct Dataset {
  std::vector<std::string> names;
  DenseMatrix values;
};

// Throws a parse error naming the 1-based line for ragged rows or
// non-numeric cells, and an io error when the file cannot be opened.
Dataset parse_csv(std::istream& in, const std::string& source = "<stream>");
Dataset read_csv(const std::filesystem::path& path);
// Values are written with max_digits10 so a read back is bitwise equal.
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::filesystem::path& path, const Dataset& data);

std::vector<std::string> default_names(std::size_t d);

// Header of d names, then d rows of d decimals.
void write_adjacency_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                         const DenseMatrix& w);
Dataset read_adjacency_csv(const std::filesystem::path& path);

// One "src dst" pair of variable names per line. Blank lines and lines
// starting with '#' are ignored when reading.
void write_edge_list(std::ostream& out, const BinaryGraph& g, const std::vector<std::string>& names);
void write_edge_list(const std::filesystem::path& path, const BinaryGraph& g,
                     const std::vector<std::string>& names);
BinaryGraph parse_edge_list(std::istream& in, const std::vector<std::string>& names,
                            const std::string& source = "<stream>");
BinaryGraph read_edge_list(const std::filesystem::path& path, const std::vector<std::string>& names);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dagflow
