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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dagflow/metrics.hpp"
#include "dagflow/synth.hpp"
#include "dagflow/trainer.hpp"

namespace dagflow {

enum class RunMode { kSynth, kFit, kEval, kBenchmark };

RunMode parse_run_mode(const std::string& name);
std::string run_mode_name(RunMode mode);

struct SynthSpec {
  std::size_t d = 10;
  double edges_per_node = 1.0;
  Mechanism mechanism = Mechanism::kGP;
  std::size_t n = 1000;
  std::vector<std::uint64_t> seeds{0};
  bool random_noise_scale = false;
};

struct ExperimentConfig {
  RunMode mode = RunMode::kFit;
  // fit: dataset CSV. eval: optional, only its header is used for names.
  std::optional<std::filesystem::path> dataset;
  std::optional<SynthSpec> synth;
  TrainConfig train;
  std::filesystem::path output_dir = "run";

  // Ground truth for fit/eval: an edge list file, or the bundled Sachs graph.
  std::optional<std::filesystem::path> truth_edges;
  bool sachs_truth = false;
  // eval: predicted edge list.
  std::optional<std::filesystem::path> predicted_edges;

  bool log1p = false;
  // Extra thresholds evaluated on the final adjacency when truth is known.
  std::vector<double> threshold_sweep{0.1, 0.2, 0.3, 0.4, 0.5};
  std::size_t jobs = 1;
  bool verbose = false;

  // Throws invalid_argument when the input sources do not fit the mode.
  void validate() const;
};

// Nested JSON document; every field is optional and falls back to the
// defaults above. Unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

struct SynthArtifacts {
  GroundTruth truth;
  std::vector<std::string> names;
  DenseMatrix data;
};

// Graph and data for one seed; the data seed is derived from the graph seed.
SynthArtifacts generate_synthetic(const SynthSpec& spec, std::uint64_t seed);

// Writes data.csv, truth.txt and truth.dot for every seed in the spec, into
// seed_<s>/ subdirectories when there is more than one seed.
void run_synth(const ExperimentConfig& config);

struct ThresholdPoint {
  double threshold = 0.0;
  GraphMetrics metrics;
};

struct FitOutcome {
  TrainResult result;
  std::vector<std::string> names;
  std::optional<GraphMetrics> metrics;
  std::vector<ThresholdPoint> sweep;
  double seconds = 0.0;
};

using LogSink = std::function<void(const std::string&)>;

// Trains on `data` and writes config.json, train.log, adjacency.csv,
// edges.txt, graph.dot, snapshot_<k>.dot and snapshot_<k>.diff per outer
// iteration, checkpoint.json, and metrics.json when `truth` is given.
FitOutcome fit_and_write(const DenseMatrix& data, const std::vector<std::string>& names,
                         const std::optional<BinaryGraph>& truth, const ExperimentConfig& config,
                         const std::filesystem::path& dir, const LogSink& log = nullptr);

// Reads the dataset named by the config and calls fit_and_write.
FitOutcome run_fit(const ExperimentConfig& config, const LogSink& log = nullptr);

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  GraphMetrics metrics;
  std::vector<ThresholdPoint> sweep;
  bool converged = false;
  double final_h = 0.0;
  bool acyclic = false;
  double seconds = 0.0;
};

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single value
};

MeanSd mean_sd(const std::vector<double>& values);
// "1.3±2.3" with the given number of decimals.
std::string format_cell(const MeanSd& v, int decimals);

struct BenchmarkSummary {
  std::vector<SeedOutcome> seeds;
  std::size_t successes = 0;
  MeanSd shd;
  MeanSd shd_cost1;
  MeanSd tpr;
  std::string text;  // table with one row per seed and a mean±sd line
};

// Generate, train and evaluate every seed; failed seeds are recorded and
// skipped. Writes seed_<s>/ run directories, seed_<s>/metrics.json,
// summary.json and summary.txt. Throws if no seed succeeds.
BenchmarkSummary run_synth_benchmark(const ExperimentConfig& config, const LogSink& log = nullptr);

// Compares the predicted edge list with the truth and writes metrics.json.
GraphMetrics run_eval(const ExperimentConfig& config);

}  // namespace dagflow
