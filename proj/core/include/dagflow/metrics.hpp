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
#include <string>
#include <vector>

#include "dagflow/graph.hpp"

namespace dagflow {

// Buckets of a predicted graph against a ground truth. For graphs without
// 2-cycles, true_positives + reversed + missing partition the truth edges and
// true_positives + reversed + extra partition the predicted edges. Reversed
// edges are listed in their ground-truth direction.
struct EdgeReport {
  std::vector<Edge> true_positives;
  std::vector<Edge> reversed;
  std::vector<Edge> missing;
  std::vector<Edge> extra;
};

EdgeReport classify_edges(const BinaryGraph& predicted, const BinaryGraph& truth);

// missing + extra + reversal_cost * reversed. A reversal cost of 2 counts a
// flipped edge as one deletion plus one insertion.
std::size_t shd(const BinaryGraph& predicted, const BinaryGraph& truth, int reversal_cost = 2);

// Fraction of truth edges recovered with the right direction.
double tpr(const BinaryGraph& predicted, const BinaryGraph& truth);

struct GraphMetrics {
  std::size_t shd = 0;
  std::size_t shd_cost1 = 0;
  double tpr = 0.0;
  std::size_t true_positives = 0;
  std::size_t reversed = 0;
  std::size_t missing = 0;
  std::size_t extra = 0;
  std::size_t num_predicted = 0;
  std::size_t num_truth = 0;
};

GraphMetrics evaluate(const BinaryGraph& predicted, const BinaryGraph& truth);

// {shd, shd_cost1, tpr, counts{tp, reversed, missing, extra}, num_predicted, num_truth}
std::string metrics_json(const GraphMetrics& m);

}  // namespace dagflow
