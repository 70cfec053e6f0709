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

#include "dagflow/io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "dagflow/errors.hpp"

namespace dagflow {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  if (first == last) return false;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::kIo, "cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  Dataset ds;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (line_no == 0 || trim(line).empty()) throw Error(ErrorCategory::kParse, source + ": empty file");
  ds.names = split_commas(trim(line));
  const std::size_t d = ds.names.size();
  for (const auto& name : ds.names)
    if (name.empty()) throw Error(ErrorCategory::kParse, source + ": empty column name in header");

  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto cells = split_commas(t);
    if (cells.size() != d) {
      throw Error(ErrorCategory::kParse, source + ": line " + std::to_string(line_no) + " has " +
                                             std::to_string(cells.size()) + " cells, expected " +
                                             std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0.0;
      if (!parse_double(cells[j], v)) {
        throw Error(ErrorCategory::kParse, source + ": line " + std::to_string(line_no) + ", column " +
                                               std::to_string(j + 1) + ": non-numeric cell '" +
                                               cells[j] + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  ds.values = DenseMatrix(rows, d, std::move(values));
  return ds;
}

Dataset read_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_csv(in, path.string());
}

void write_csv(std::ostream& out, const Dataset& data) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t j = 0; j < data.names.size(); ++j) out << (j ? "," : "") << data.names[j];
  out << '\n';
  for (std::size_t i = 0; i < data.values.rows(); ++i) {
    for (std::size_t j = 0; j < data.values.cols(); ++j) out << (j ? "," : "") << data.values(i, j);
    out << '\n';
  }
  out.precision(old_precision);
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  auto out = open_output(path);
  write_csv(out, data);
}

std::vector<std::string> default_names(std::size_t d) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("X" + std::to_string(j + 1));
  return names;
}

void write_adjacency_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                         const DenseMatrix& w) {
  if (names.size() != w.rows() || !w.is_square()) {
    throw invalid_argument("write_adjacency_csv: names do not match the matrix");
  }
  write_csv(path, Dataset{names, w});
}

Dataset read_adjacency_csv(const std::filesystem::path& path) {
  Dataset ds = read_csv(path);
  if (ds.values.rows() != ds.names.size()) {
    throw Error(ErrorCategory::kParse, path.string() + ": adjacency must have one row per column");
  }
  return ds;
}

void write_edge_list(std::ostream& out, const BinaryGraph& g, const std::vector<std::string>& names) {
  if (names.size() != g.num_nodes()) throw invalid_argument("write_edge_list: wrong number of names");
  for (const Edge& e : g.edges()) out << names[e.from] << ' ' << names[e.to] << '\n';
}

void write_edge_list(const std::filesystem::path& path, const BinaryGraph& g,
                     const std::vector<std::string>& names) {
  auto out = open_output(path);
  write_edge_list(out, g, names);
}

BinaryGraph parse_edge_list(std::istream& in, const std::vector<std::string>& names,
                            const std::string& source) {
  auto index_of = [&](const std::string& name, std::size_t line_no) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw Error(ErrorCategory::kParse, source + ": line " + std::to_string(line_no) +
                                           ": unknown variable '" + name + "'");
  };
  BinaryGraph g(names.size());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields(t);
    std::string src, dst, rest;
    if (!(fields >> src >> dst) || (fields >> rest)) {
      throw Error(ErrorCategory::kParse, source + ": line " + std::to_string(line_no) +
                                             ": expected 'src dst'");
    }
    g.add_edge(index_of(src, line_no), index_of(dst, line_no));
  }
  return g;
}

BinaryGraph read_edge_list(const std::filesystem::path& path, const std::vector<std::string>& names) {
  auto in = open_input(path);
  return parse_edge_list(in, names, path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
}

}  // namespace dagflow
