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

#include "dagflow/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "dagflow/checkpoint.hpp"
#include "dagflow/dot.hpp"
#include "dagflow/errors.hpp"
#include "dagflow/io.hpp"
#include "dagflow/sachs.hpp"

namespace dagflow {

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDataSeedOffset = 0x632be59bd9b4e019ULL;

std::string constraint_name(ConstraintForm f) { return f == ConstraintForm::kExp ? "exp" : "poly"; }

ConstraintForm parse_constraint(const std::string& s) {
  if (s == "exp") return ConstraintForm::kExp;
  if (s == "poly") return ConstraintForm::kPoly;
  throw invalid_argument("unknown constraint '" + s + "' (expected exp or poly)");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCategory::kParse, where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw Error(ErrorCategory::kParse, where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ordered_json train_to_json(const TrainConfig& t) {
  return ordered_json{
      {"num_blocks", t.num_blocks},       {"hidden_sizes", t.hidden_sizes},
      {"alpha_clamp", t.alpha_clamp},     {"learning_rate", t.learning_rate},
      {"inner_steps", t.inner_steps},     {"batch_size", t.batch_size},
      {"adam_beta1", t.adam_beta1},       {"adam_beta2", t.adam_beta2},
      {"adam_eps", t.adam_eps},           {"lambda_init", t.lambda_init},
      {"rho_init", t.rho_init},           {"rho_max", t.rho_max},
      {"h_tolerance", t.h_tolerance},     {"max_outer_iters", t.max_outer_iters},
      {"constraint", constraint_name(t.constraint)}, {"poly_alpha", t.poly_alpha},
      {"jacobian_batch", t.jacobian_batch}, {"threshold", t.threshold},
      {"l1_weight", t.l1_weight},         {"guard_interval", t.guard_interval},
      {"guard_tolerance", t.guard_tolerance}, {"seed", t.seed},
  };
}

TrainConfig train_from_json(const json& j) {
  reject_unknown(j,
                 {"num_blocks", "hidden_sizes", "alpha_clamp", "learning_rate", "inner_steps",
                  "batch_size", "adam_beta1", "adam_beta2", "adam_eps", "lambda_init", "rho_init",
                  "rho_max", "h_tolerance", "max_outer_iters", "constraint", "poly_alpha",
                  "jacobian_batch", "threshold", "l1_weight", "guard_interval", "guard_tolerance",
                  "seed"},
                 "train");
  TrainConfig t;
  read_field(j, "num_blocks", t.num_blocks);
  read_field(j, "hidden_sizes", t.hidden_sizes);
  read_field(j, "alpha_clamp", t.alpha_clamp);
  read_field(j, "learning_rate", t.learning_rate);
  read_field(j, "inner_steps", t.inner_steps);
  read_field(j, "batch_size", t.batch_size);
  read_field(j, "adam_beta1", t.adam_beta1);
  read_field(j, "adam_beta2", t.adam_beta2);
  read_field(j, "adam_eps", t.adam_eps);
  read_field(j, "lambda_init", t.lambda_init);
  read_field(j, "rho_init", t.rho_init);
  read_field(j, "rho_max", t.rho_max);
  read_field(j, "h_tolerance", t.h_tolerance);
  read_field(j, "max_outer_iters", t.max_outer_iters);
  if (j.contains("constraint")) t.constraint = parse_constraint(j.at("constraint").get<std::string>());
  read_field(j, "poly_alpha", t.poly_alpha);
  read_field(j, "jacobian_batch", t.jacobian_batch);
  read_field(j, "threshold", t.threshold);
  read_field(j, "l1_weight", t.l1_weight);
  read_field(j, "guard_interval", t.guard_interval);
  read_field(j, "guard_tolerance", t.guard_tolerance);
  read_field(j, "seed", t.seed);
  return t;
}

ordered_json synth_to_json(const SynthSpec& s) {
  return ordered_json{{"d", s.d},
                      {"edges_per_node", s.edges_per_node},
                      {"mechanism", mechanism_name(s.mechanism)},
                      {"n", s.n},
                      {"seeds", s.seeds},
                      {"random_noise_scale", s.random_noise_scale}};
}

SynthSpec synth_from_json(const json& j) {
  reject_unknown(j, {"d", "edges_per_node", "mechanism", "n", "seeds", "random_noise_scale"}, "synth");
  SynthSpec s;
  read_field(j, "d", s.d);
  read_field(j, "edges_per_node", s.edges_per_node);
  if (j.contains("mechanism")) s.mechanism = parse_mechanism(j.at("mechanism").get<std::string>());
  read_field(j, "n", s.n);
  read_field(j, "seeds", s.seeds);
  read_field(j, "random_noise_scale", s.random_noise_scale);
  return s;
}

void check_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCategory::kIo, "cannot create output directory '" + dir.string() + "'");
  }
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw Error(ErrorCategory::kIo, "output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

std::vector<std::string> edge_list_tokens(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open '" + path.string() + "'");
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string t;
    while (fields >> t) tokens.push_back(t);
  }
  return tokens;
}

std::vector<std::string> read_header(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  std::istringstream header(line + "\n");
  return parse_csv(header, path.string()).names;
}

DenseMatrix preprocess(DenseMatrix data, bool log1p) {
  if (log1p) {
    for (double& v : data.data()) {
      if (!(v > -1.0)) throw invalid_argument("log1p preprocessing needs every value > -1");
      v = std::log1p(v);
    }
  }
  return standardize(data, fit_standardization(data));
}

std::vector<ThresholdPoint> sweep_thresholds(const WeightedAdjacency& w, const BinaryGraph& truth,
                                             const std::vector<double>& thresholds) {
  std::vector<ThresholdPoint> out;
  for (double t : thresholds) out.push_back({t, evaluate(threshold_and_repair(w, t), truth)});
  return out;
}

ordered_json sweep_json(const std::vector<ThresholdPoint>& sweep) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : sweep) {
    arr.push_back({{"threshold", p.threshold},
                   {"shd", p.metrics.shd},
                   {"shd_cost1", p.metrics.shd_cost1},
                   {"tpr", p.metrics.tpr},
                   {"num_predicted", p.metrics.num_predicted}});
  }
  return arr;
}

std::string fixed(double v, int decimals) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(decimals) << v;
  return out.str();
}

}  // namespace

RunMode parse_run_mode(const std::string& name) {
  if (name == "synth") return RunMode::kSynth;
  if (name == "fit") return RunMode::kFit;
  if (name == "eval") return RunMode::kEval;
  if (name == "benchmark") return RunMode::kBenchmark;
  throw invalid_argument("unknown mode '" + name + "'");
}

std::string run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::kSynth: return "synth";
    case RunMode::kFit: return "fit";
    case RunMode::kEval: return "eval";
    case RunMode::kBenchmark: return "benchmark";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  train.validate();
  if (jobs == 0) throw invalid_argument("jobs must be >= 1");
  if (truth_edges && sachs_truth) throw invalid_argument("give either a truth edge list or the Sachs truth, not both");
  auto check_synth = [&] {
    if (!synth) throw invalid_argument(run_mode_name(mode) + " needs a synth spec");
    if (dataset) throw invalid_argument(run_mode_name(mode) + " takes a synth spec, not a dataset");
    if (synth->seeds.empty()) throw invalid_argument("synth spec needs at least one seed");
    if (synth->d < 2) throw invalid_argument("synth spec needs d >= 2");
    if (synth->n == 0) throw invalid_argument("synth spec needs n >= 1");
  };
  switch (mode) {
    case RunMode::kSynth:
    case RunMode::kBenchmark:
      check_synth();
      break;
    case RunMode::kFit:
      if (!dataset) throw invalid_argument("fit needs a dataset");
      if (synth) throw invalid_argument("fit takes a dataset, not a synth spec");
      break;
    case RunMode::kEval:
      if (!predicted_edges) throw invalid_argument("eval needs a predicted edge list");
      if (!truth_edges && !sachs_truth) throw invalid_argument("eval needs a truth edge list or the Sachs truth");
      break;
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCategory::kParse, std::string("config: ") + e.what());
  }
  try {
    reject_unknown(j,
                   {"mode", "data", "synth", "train", "output", "truth", "sachs_truth", "predicted",
                    "log1p", "threshold_sweep", "jobs", "verbose"},
                   "config");
    ExperimentConfig c;
    if (j.contains("mode")) c.mode = parse_run_mode(j.at("mode").get<std::string>());
    if (j.contains("data") && !j.at("data").is_null()) c.dataset = j.at("data").get<std::string>();
    if (j.contains("synth") && !j.at("synth").is_null()) c.synth = synth_from_json(j.at("synth"));
    if (j.contains("train")) c.train = train_from_json(j.at("train"));
    if (j.contains("output")) c.output_dir = j.at("output").get<std::string>();
    if (j.contains("truth") && !j.at("truth").is_null()) c.truth_edges = j.at("truth").get<std::string>();
    if (j.contains("predicted") && !j.at("predicted").is_null())
      c.predicted_edges = j.at("predicted").get<std::string>();
    read_field(j, "sachs_truth", c.sachs_truth);
    read_field(j, "log1p", c.log1p);
    read_field(j, "threshold_sweep", c.threshold_sweep);
    read_field(j, "jobs", c.jobs);
    read_field(j, "verbose", c.verbose);
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCategory::kParse, std::string("config: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["mode"] = run_mode_name(c.mode);
  j["data"] = c.dataset ? json(c.dataset->string()) : json(nullptr);
  j["synth"] = c.synth ? synth_to_json(*c.synth) : ordered_json(nullptr);
  j["train"] = train_to_json(c.train);
  j["output"] = c.output_dir.string();
  j["truth"] = c.truth_edges ? json(c.truth_edges->string()) : json(nullptr);
  j["sachs_truth"] = c.sachs_truth;
  j["predicted"] = c.predicted_edges ? json(c.predicted_edges->string()) : json(nullptr);
  j["log1p"] = c.log1p;
  j["threshold_sweep"] = c.threshold_sweep;
  j["jobs"] = c.jobs;
  j["verbose"] = c.verbose;
  return j.dump(2) + "\n";
}

SynthArtifacts generate_synthetic(const SynthSpec& spec, std::uint64_t seed) {
  SynthArtifacts out;
  out.truth = sample_er_dag(spec.d, spec.edges_per_node, seed, spec.mechanism, spec.random_noise_scale);
  out.data = simulate_sem(out.truth, spec.n, seed ^ kDataSeedOffset);
  out.names = default_names(spec.d);
  return out;
}

void run_synth(const ExperimentConfig& config) {
  config.validate();
  const SynthSpec& spec = *config.synth;
  check_writable(config.output_dir);
  write_text_file(config.output_dir / "config.json", config_to_json(config));
  for (std::uint64_t seed : spec.seeds) {
    const fs::path dir =
        spec.seeds.size() == 1 ? config.output_dir : config.output_dir / ("seed_" + std::to_string(seed));
    fs::create_directories(dir);
    const SynthArtifacts a = generate_synthetic(spec, seed);
    write_csv(dir / "data.csv", Dataset{a.names, a.data});
    write_edge_list(dir / "truth.txt", a.truth.graph, a.names);
    write_text_file(dir / "truth.dot", emit_dot(a.truth.graph, a.names));
  }
}

FitOutcome fit_and_write(const DenseMatrix& data, const std::vector<std::string>& names,
                         const std::optional<BinaryGraph>& truth, const ExperimentConfig& config,
                         const fs::path& dir, const LogSink& log) {
  if (names.size() != data.cols()) throw invalid_argument("fit: names do not match the data width");
  if (truth && truth->num_nodes() != data.cols()) throw invalid_argument("fit: truth graph has the wrong size");
  config.train.validate();
  check_writable(dir);
  write_text_file(dir / "config.json", config_to_json(config));

  const auto start = std::chrono::steady_clock::now();
  const DenseMatrix prepared = preprocess(data, config.log1p);

  std::ofstream train_log(dir / "train.log");
  if (!train_log) throw Error(ErrorCategory::kIo, "cannot write '" + (dir / "train.log").string() + "'");
  BinaryGraph previous(data.cols());
  auto observer = [&](const IterationRecord& rec, const WeightedAdjacency&, const BinaryGraph& g) {
    const std::string line = format_log_line(rec);
    train_log << line << '\n' << std::flush;
    if (log) log(line);
    const std::string stem = "snapshot_" + std::to_string(rec.iteration);
    write_text_file(dir / (stem + ".dot"), emit_dot(g, names, &previous));
    write_text_file(dir / (stem + ".diff"), edge_diff(previous, g, names));
    previous = g;
  };

  FitOutcome out;
  out.names = names;
  try {
    out.result = outer_loop(config.train, prepared, observer);
  } catch (const Error& e) {
    train_log << "status=failed category=" << category_name(e.category()) << " message=\"" << e.what()
              << "\"\n";
    throw;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const TrainResult& r = out.result;
  const double final_h = r.history.empty() ? 0.0 : r.history.back().h;
  train_log << "status=" << (r.converged ? "converged" : "not_converged") << " final_h=" << final_h
            << " edges=" << r.graph.edge_count() << " seconds=" << fixed(out.seconds, 1) << " note=\""
            << r.status << "\"\n";
  if (log) log("status: " + r.status);

  write_adjacency_csv(dir / "adjacency.csv", names, r.adjacency.matrix());
  write_edge_list(dir / "edges.txt", r.graph, names);
  write_text_file(dir / "graph.dot", emit_dot(r.graph, names));
  save_checkpoint(dir / "checkpoint.json", r.flow);

  if (truth) {
    out.metrics = evaluate(r.graph, *truth);
    out.sweep = sweep_thresholds(r.adjacency, *truth, config.threshold_sweep);
    ordered_json m = ordered_json::parse(metrics_json(*out.metrics));
    m["threshold"] = config.train.threshold;
    m["converged"] = r.converged;
    m["final_h"] = final_h;
    m["acyclic"] = is_acyclic(r.graph);
    m["seconds"] = out.seconds;
    m["threshold_sweep"] = sweep_json(out.sweep);
    write_text_file(dir / "metrics.json", m.dump(2) + "\n");
  }
  return out;
}

FitOutcome run_fit(const ExperimentConfig& config, const LogSink& log) {
  config.validate();
  const Dataset ds = read_csv(*config.dataset);
  if (ds.values.rows() < 2) throw invalid_argument("fit: dataset needs at least 2 rows");
  std::optional<BinaryGraph> truth;
  if (config.truth_edges) truth = read_edge_list(*config.truth_edges, ds.names);
  if (config.sachs_truth) truth = sachs_truth_for_columns(ds.names);
  return fit_and_write(ds.values, ds.names, truth, config, config.output_dir, log);
}

MeanSd mean_sd(const std::vector<double>& values) {
  if (values.empty()) throw invalid_argument("mean_sd: no values");
  MeanSd r;
  for (double v : values) r.mean += v;
  r.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return r;
}

std::string format_cell(const MeanSd& v, int decimals) {
  return fixed(v.mean, decimals) + "±" + fixed(v.sd, decimals);
}

BenchmarkSummary run_synth_benchmark(const ExperimentConfig& config, const LogSink& log) {
  config.validate();
  const SynthSpec& spec = *config.synth;
  check_writable(config.output_dir);
  write_text_file(config.output_dir / "config.json", config_to_json(config));

  std::mutex log_mutex;
  auto locked_log = [&](std::uint64_t seed, const std::string& line) {
    if (!log) return;
    std::lock_guard<std::mutex> lock(log_mutex);
    log("seed " + std::to_string(seed) + ": " + line);
  };

  BenchmarkSummary summary;
  summary.seeds.resize(spec.seeds.size());
  auto run_one = [&](std::size_t i) {
    const std::uint64_t seed = spec.seeds[i];
    SeedOutcome& o = summary.seeds[i];
    o.seed = seed;
    const fs::path dir = config.output_dir / ("seed_" + std::to_string(seed));
    try {
      const SynthArtifacts a = generate_synthetic(spec, seed);
      fs::create_directories(dir);
      write_csv(dir / "data.csv", Dataset{a.names, a.data});
      write_edge_list(dir / "truth.txt", a.truth.graph, a.names);
      ExperimentConfig seed_config = config;
      seed_config.mode = RunMode::kFit;
      seed_config.synth.reset();
      seed_config.dataset = dir / "data.csv";
      seed_config.truth_edges = dir / "truth.txt";
      seed_config.output_dir = dir;
      seed_config.train.seed = config.train.seed + seed;
      const FitOutcome fit = fit_and_write(a.data, a.names, a.truth.graph, seed_config, dir,
                                           [&](const std::string& line) { locked_log(seed, line); });
      o.ok = true;
      o.metrics = *fit.metrics;
      o.sweep = fit.sweep;
      o.converged = fit.result.converged;
      o.final_h = fit.result.history.empty() ? 0.0 : fit.result.history.back().h;
      o.acyclic = is_acyclic(fit.result.graph);
      o.seconds = fit.seconds;
    } catch (const std::exception& e) {
      o.ok = false;
      o.error = e.what();
      locked_log(seed, std::string("failed: ") + e.what());
    }
  };

  const std::size_t workers = std::min(config.jobs, spec.seeds.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < spec.seeds.size(); i = next++) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<double> shd, shd1, tpr_values;
  for (const SeedOutcome& o : summary.seeds) {
    if (!o.ok) continue;
    ++summary.successes;
    shd.push_back(static_cast<double>(o.metrics.shd));
    shd1.push_back(static_cast<double>(o.metrics.shd_cost1));
    tpr_values.push_back(o.metrics.tpr);
  }

  std::ostringstream text;
  text << "ER" << spec.edges_per_node << " d=" << spec.d << " n=" << spec.n << " mechanism="
       << mechanism_name(spec.mechanism) << " threshold=" << config.train.threshold << "\n";
  text << std::left << std::setw(8) << "seed" << std::setw(6) << "shd" << std::setw(7) << "shd1"
       << std::setw(8) << "tpr" << std::setw(7) << "edges" << std::setw(11) << "converged"
       << std::setw(12) << "final_h" << "seconds\n";
  for (const SeedOutcome& o : summary.seeds) {
    text << std::left << std::setw(8) << o.seed;
    if (!o.ok) {
      text << "failed: " << o.error << "\n";
      continue;
    }
    std::ostringstream h;
    h << std::scientific << std::setprecision(2) << o.final_h;
    text << std::setw(6) << o.metrics.shd << std::setw(7) << o.metrics.shd_cost1 << std::setw(8)
         << fixed(o.metrics.tpr, 3) << std::setw(7) << o.metrics.num_predicted << std::setw(11)
         << (o.converged ? "yes" : "no") << std::setw(12) << h.str() << fixed(o.seconds, 1) << "\n";
  }

  ordered_json js;
  js["config"] = ordered_json::parse(config_to_json(config));
  js["successes"] = summary.successes;
  js["seeds"] = ordered_json::array();
  for (const SeedOutcome& o : summary.seeds) {
    ordered_json s{{"seed", o.seed}, {"ok", o.ok}};
    if (o.ok) {
      s["metrics"] = ordered_json::parse(metrics_json(o.metrics));
      s["converged"] = o.converged;
      s["final_h"] = o.final_h;
      s["acyclic"] = o.acyclic;
      s["seconds"] = o.seconds;
      s["threshold_sweep"] = sweep_json(o.sweep);
    } else {
      s["error"] = o.error;
    }
    js["seeds"].push_back(s);
  }

  if (summary.successes == 0) {
    text << "no seed succeeded\n";
    write_text_file(config.output_dir / "summary.txt", text.str());
    write_text_file(config.output_dir / "summary.json", js.dump(2) + "\n");
    throw Error(ErrorCategory::kNumerical, "benchmark: every seed failed");
  }
  summary.shd = mean_sd(shd);
  summary.shd_cost1 = mean_sd(shd1);
  summary.tpr = mean_sd(tpr_values);
  text << "mean±sd (" << summary.successes << "/" << summary.seeds.size()
       << " seeds)  SHD " << format_cell(summary.shd, 1) << "  SHD(cost 1) "
       << format_cell(summary.shd_cost1, 1) << "  TPR " << format_cell(summary.tpr, 2) << "\n";

  ordered_json sweep = ordered_json::array();
  for (std::size_t t = 0; t < config.threshold_sweep.size(); ++t) {
    std::vector<double> s, r;
    for (const SeedOutcome& o : summary.seeds) {
      if (!o.ok) continue;
      s.push_back(static_cast<double>(o.sweep[t].metrics.shd));
      r.push_back(o.sweep[t].metrics.tpr);
    }
    const MeanSd ms = mean_sd(s), mr = mean_sd(r);
    text << "  threshold " << fixed(config.threshold_sweep[t], 2) << ": SHD " << format_cell(ms, 1)
         << "  TPR " << format_cell(mr, 2) << "\n";
    sweep.push_back({{"threshold", config.threshold_sweep[t]},
                     {"shd_mean", ms.mean}, {"shd_sd", ms.sd},
                     {"tpr_mean", mr.mean}, {"tpr_sd", mr.sd}});
  }
  js["summary"] = {{"shd_mean", summary.shd.mean},       {"shd_sd", summary.shd.sd},
                   {"shd_cost1_mean", summary.shd_cost1.mean}, {"shd_cost1_sd", summary.shd_cost1.sd},
                   {"tpr_mean", summary.tpr.mean},       {"tpr_sd", summary.tpr.sd},
                   {"shd_cell", format_cell(summary.shd, 1)},
                   {"tpr_cell", format_cell(summary.tpr, 2)},
                   {"threshold_sweep", sweep}};
  summary.text = text.str();
  write_text_file(config.output_dir / "summary.txt", summary.text);
  write_text_file(config.output_dir / "summary.json", js.dump(2) + "\n");
  return summary;
}

GraphMetrics run_eval(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::string> names;
  const fs::path sibling = config.predicted_edges->parent_path() / "adjacency.csv";
  if (config.dataset) {
    names = read_header(*config.dataset);
  } else if (fs::exists(sibling)) {
    names = read_header(sibling);
  } else if (config.sachs_truth) {
    names = sachs_variable_names();
  } else {
    auto tokens = edge_list_tokens(*config.predicted_edges);
    const auto more = edge_list_tokens(*config.truth_edges);
    tokens.insert(tokens.end(), more.begin(), more.end());
    for (const auto& t : tokens)
      if (std::find(names.begin(), names.end(), t) == names.end()) names.push_back(t);
  }
  const BinaryGraph predicted = read_edge_list(*config.predicted_edges, names);
  const BinaryGraph truth =
      config.sachs_truth ? sachs_truth_for_columns(names) : read_edge_list(*config.truth_edges, names);
  const GraphMetrics m = evaluate(predicted, truth);
  check_writable(config.output_dir);
  write_text_file(config.output_dir / "metrics.json", metrics_json(m) + "\n");
  return m;
}

}  // namespace dagflow
