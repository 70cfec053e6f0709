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

#include <algorithm>
#include <string>

#include "dagflow/errors.hpp"
#include "dagflow/made.hpp"

namespace dagflow {

namespace {

void require_permutation(const std::vector<std::size_t>& ordering, std::size_t d) {
  if (ordering.size() != d) {
    throw invalid_argument("ordering has " + std::to_string(ordering.size()) +
                           " entries, expected " + std::to_string(d));
  }
  std::vector<bool> seen(d, false);
  for (std::size_t v : ordering) {
    if (v >= d || seen[v]) throw invalid_argument("ordering is not a permutation of 0..d-1");
    seen[v] = true;
  }
}

}  // namespace

MaskSet build_masks(std::size_t d, const std::vector<std::size_t>& hidden_sizes,
                    const std::vector<std::size_t>& ordering, std::uint64_t seed,
                    DegreeMode mode) {
  if (d < 2) throw invalid_argument("build_masks: need at least 2 variables");
  if (hidden_sizes.empty()) throw invalid_argument("build_masks: need at least one hidden layer");
  for (std::size_t h : hidden_sizes)
    if (h == 0) throw invalid_argument("build_masks: hidden layer sizes must be >= 1");
  require_permutation(ordering, d);

  MaskSet set;
  set.dim = d;
  set.ordering = ordering;
  set.variable_degrees.assign(d, 0);
  for (std::size_t pos = 0; pos < d; ++pos) set.variable_degrees[ordering[pos]] = static_cast<int>(pos) + 1;

  const int max_degree = static_cast<int>(d) - 1;
  std::mt19937_64 rng(seed);
  int previous_min = 1;
  for (std::size_t size : hidden_sizes) {
    std::vector<int> degrees(size);
    if (mode == DegreeMode::kBalanced) {
      for (std::size_t u = 0; u < size; ++u)
        degrees[u] = 1 + static_cast<int>(u * static_cast<std::size_t>(max_degree) / size);
    } else {
      std::uniform_int_distribution<int> pick(previous_min, max_degree);
      for (int& deg : degrees) deg = pick(rng);
      previous_min = *std::min_element(degrees.begin(), degrees.end());
    }
    set.hidden_degrees.push_back(std::move(degrees));
  }

  // input -> first hidden
  {
    const auto& hd = set.hidden_degrees.front();
    DenseMatrix m(d, hd.size());
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t u = 0; u < hd.size(); ++u)
        m(k, u) = hd[u] >= set.variable_degrees[k] ? 1.0 : 0.0;
    set.masks.push_back(std::move(m));
  }
  for (std::size_t l = 1; l < set.hidden_degrees.size(); ++l) {
    const auto& prev = set.hidden_degrees[l - 1];
    const auto& next = set.hidden_degrees[l];
    DenseMatrix m(prev.size(), next.size());
    for (std::size_t i = 0; i < prev.size(); ++i)
      for (std::size_t u = 0; u < next.size(); ++u) m(i, u) = next[u] >= prev[i] ? 1.0 : 0.0;
    set.masks.push_back(std::move(m));
  }
  {
    const auto& hd = set.hidden_degrees.back();
    DenseMatrix m(hd.size(), d);
    for (std::size_t u = 0; u < hd.size(); ++u)
      for (std::size_t j = 0; j < d; ++j)
        m(u, j) = set.variable_degrees[j] > hd[u] ? 1.0 : 0.0;
    set.masks.push_back(std::move(m));
  }
  return set;
}

DenseMatrix mask_connectivity(const MaskSet& masks) {
  DenseMatrix reach = masks.masks.front();
  for (std::size_t l = 1; l < masks.masks.size(); ++l) {
    reach = matmul(reach, masks.masks[l]);
    for (double& v : reach.data()) v = v > 0.0 ? 1.0 : 0.0;
  }
  return reach;
}

std::vector<std::vector<std::size_t>> stack_orderings(std::size_t num_blocks, std::size_t d) {
  if (num_blocks == 0) throw invalid_argument("stack_orderings: need at least one block");
  std::vector<std::size_t> natural(d);
  for (std::size_t i = 0; i < d; ++i) natural[i] = i;
  std::vector<std::size_t> reversed(natural.rbegin(), natural.rend());
  std::vector<std::vector<std::size_t>> out;
  out.reserve(num_blocks);
  for (std::size_t k = 0; k < num_blocks; ++k) out.push_back(k % 2 == 0 ? natural : reversed);
  return out;
}

}  // namespace dagflow
