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

#include "dagflow/metrics.hpp"

#include <json.hpp>

#include "dagflow/errors.hpp"

namespace dagflow {

namespace {

void require_same_nodes(const BinaryGraph& a, const BinaryGraph& b) {
  if (a.num_nodes() != b.num_nodes()) {
    throw invalid_argument("graph comparison: node counts differ (" + std::to_string(a.num_nodes()) +
                           " vs " + std::to_string(b.num_nodes()) + ")");
  }
}

}  // namespace

EdgeReport classify_edges(const BinaryGraph& predicted, const BinaryGraph& truth) {
  require_same_nodes(predicted, truth);
  EdgeReport report;
  for (const Edge& e : truth.edges()) {
    if (predicted.has_edge(e.from, e.to)) {
      report.true_positives.push_back(e);
    } else if (predicted.has_edge(e.to, e.from)) {
      report.reversed.push_back(e);
    } else {
      report.missing.push_back(e);
    }
  }
  for (const Edge& e : predicted.edges()) {
    if (truth.has_edge(e.from, e.to)) continue;
    if (truth.has_edge(e.to, e.from) && !predicted.has_edge(e.to, e.from)) continue;
    report.extra.push_back(e);
  }
  return report;
}

std::size_t shd(const BinaryGraph& predicted, const BinaryGraph& truth, int reversal_cost) {
  if (reversal_cost != 1 && reversal_cost != 2) throw invalid_argument("shd: reversal cost must be 1 or 2");
  const EdgeReport r = classify_edges(predicted, truth);
  return r.missing.size() + r.extra.size() + static_cast<std::size_t>(reversal_cost) * r.reversed.size();
}

double tpr(const BinaryGraph& predicted, const BinaryGraph& truth) {
  const std::size_t total = truth.edge_count();
  if (total == 0) throw invalid_argument("tpr: ground truth has no edges");
  const EdgeReport r = classify_edges(predicted, truth);
  return static_cast<double>(r.true_positives.size()) / static_cast<double>(total);
}

GraphMetrics evaluate(const BinaryGraph& predicted, const BinaryGraph& truth) {
  const EdgeReport r = classify_edges(predicted, truth);
  GraphMetrics m;
  m.true_positives = r.true_positives.size();
  m.reversed = r.reversed.size();
  m.missing = r.missing.size();
  m.extra = r.extra.size();
  m.shd = m.missing + m.extra + 2 * m.reversed;
  m.shd_cost1 = m.missing + m.extra + m.reversed;
  m.num_predicted = predicted.edge_count();
  m.num_truth = truth.edge_count();
  m.tpr = m.num_truth == 0 ? 0.0 : static_cast<double>(m.true_positives) / static_cast<double>(m.num_truth);
  return m;
}

std::string metrics_json(const GraphMetrics& m) {
  nlohmann::ordered_json j;
  j["shd"] = m.shd;
  j["shd_cost1"] = m.shd_cost1;
  j["tpr"] = m.tpr;
  j["counts"] = {{"tp", m.true_positives}, {"reversed", m.reversed}, {"missing", m.missing}, {"extra", m.extra}};
  j["num_predicted"] = m.num_predicted;
  j["num_truth"] = m.num_truth;
  return j.dump(2);
}

}  // namespace dagflow
