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

// dagflow command-line tool: synth, fit, eval and benchmark verbs.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "dagflow/errors.hpp"
#include "dagflow/runner.hpp"

namespace {

using dagflow::ExperimentConfig;

struct Overrides {
  std::string config_path;
  std::string data, output, truth, predicted, mechanism, constraint;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> hidden;
  std::vector<double> sweep;
};

void add_train_flags(CLI::App* cmd, ExperimentConfig& c, Overrides& o) {
  auto& t = c.train;
  cmd->add_option("--num-blocks", t.num_blocks, "MADE blocks in the flow");
  cmd->add_option("--hidden", o.hidden, "hidden layer sizes");
  cmd->add_option("--alpha-clamp", t.alpha_clamp, "soft clamp on log-scales");
  cmd->add_option("--learning-rate,--lr", t.learning_rate, "Adam learning rate");
  cmd->add_option("--inner-steps", t.inner_steps, "Adam steps per outer iteration");
  cmd->add_option("--batch-size", t.batch_size, "minibatch rows");
  cmd->add_option("--lambda-init", t.lambda_init, "initial Lagrange multiplier");
  cmd->add_option("--rho-init", t.rho_init, "initial penalty");
  cmd->add_option("--rho-max", t.rho_max, "penalty ceiling");
  cmd->add_option("--h-tolerance", t.h_tolerance, "acyclicity tolerance");
  cmd->add_option("--max-outer-iters", t.max_outer_iters, "outer iterations");
  cmd->add_option("--constraint", o.constraint, "exp or poly")->check(CLI::IsMember({"exp", "poly"}));
  cmd->add_option("--poly-alpha", t.poly_alpha, "alpha for the poly constraint (<= 0: 1/d)");
  cmd->add_option("--jacobian-batch", t.jacobian_batch, "rows used for W(f) in the penalty");
  cmd->add_option("--threshold", t.threshold, "edge threshold on W");
  cmd->add_option("--l1-weight", t.l1_weight, "L1 weight on W");
  cmd->add_option("--guard-interval", t.guard_interval, "divergence check interval (0: off)");
  cmd->add_option("--guard-tolerance", t.guard_tolerance, "divergence tolerance");
  cmd->add_option("--seed", t.seed, "training seed");
  cmd->add_option("--threshold-sweep", o.sweep, "extra thresholds evaluated against the truth");
}

void add_synth_flags(CLI::App* cmd, ExperimentConfig& c, Overrides& o) {
  auto& s = *c.synth;
  cmd->add_option("--d", s.d, "number of variables");
  cmd->add_option("--er", s.edges_per_node, "expected edges per node");
  cmd->add_option("--mechanism", o.mechanism, "gp, mlp or gp-add");
  cmd->add_option("--n", s.n, "samples");
  cmd->add_option("--seeds", o.seeds, "graph seeds");
  cmd->add_flag("--random-noise-scale", s.random_noise_scale, "noise scales drawn from U[1, 2]");
}

// Config file first, then explicit flags on top.
ExperimentConfig resolve(CLI::App* cmd, const ExperimentConfig& flags, const Overrides& o,
                         dagflow::RunMode mode) {
  ExperimentConfig c = flags;
  if (!o.config_path.empty()) {
    c = dagflow::load_experiment_config(o.config_path);
    auto set_if = [&](const char* name, auto apply) {
      if (cmd->get_option_no_throw(name) && cmd->get_option(name)->count() > 0) apply();
    };
    set_if("--num-blocks", [&] { c.train.num_blocks = flags.train.num_blocks; });
    set_if("--alpha-clamp", [&] { c.train.alpha_clamp = flags.train.alpha_clamp; });
    set_if("--learning-rate", [&] { c.train.learning_rate = flags.train.learning_rate; });
    set_if("--inner-steps", [&] { c.train.inner_steps = flags.train.inner_steps; });
    set_if("--batch-size", [&] { c.train.batch_size = flags.train.batch_size; });
    set_if("--lambda-init", [&] { c.train.lambda_init = flags.train.lambda_init; });
    set_if("--rho-init", [&] { c.train.rho_init = flags.train.rho_init; });
    set_if("--rho-max", [&] { c.train.rho_max = flags.train.rho_max; });
    set_if("--h-tolerance", [&] { c.train.h_tolerance = flags.train.h_tolerance; });
    set_if("--max-outer-iters", [&] { c.train.max_outer_iters = flags.train.max_outer_iters; });
    set_if("--poly-alpha", [&] { c.train.poly_alpha = flags.train.poly_alpha; });
    set_if("--jacobian-batch", [&] { c.train.jacobian_batch = flags.train.jacobian_batch; });
    set_if("--threshold", [&] { c.train.threshold = flags.train.threshold; });
    set_if("--l1-weight", [&] { c.train.l1_weight = flags.train.l1_weight; });
    set_if("--guard-interval", [&] { c.train.guard_interval = flags.train.guard_interval; });
    set_if("--guard-tolerance", [&] { c.train.guard_tolerance = flags.train.guard_tolerance; });
    set_if("--seed", [&] { c.train.seed = flags.train.seed; });
    set_if("--log1p", [&] { c.log1p = flags.log1p; });
    set_if("--sachs-truth", [&] { c.sachs_truth = flags.sachs_truth; });
    set_if("--jobs", [&] { c.jobs = flags.jobs; });
    set_if("--verbose", [&] { c.verbose = flags.verbose; });
    if (flags.synth) {
      if (!c.synth) c.synth = dagflow::SynthSpec{};
      set_if("--d", [&] { c.synth->d = flags.synth->d; });
      set_if("--er", [&] { c.synth->edges_per_node = flags.synth->edges_per_node; });
      set_if("--n", [&] { c.synth->n = flags.synth->n; });
      set_if("--random-noise-scale", [&] { c.synth->random_noise_scale = flags.synth->random_noise_scale; });
    }
  }
  c.mode = mode;
  if (!o.data.empty()) c.dataset = o.data;
  if (!o.output.empty()) c.output_dir = o.output;
  if (!o.truth.empty()) c.truth_edges = o.truth;
  if (!o.predicted.empty()) c.predicted_edges = o.predicted;
  if (!o.hidden.empty()) c.train.hidden_sizes = o.hidden;
  if (!o.sweep.empty()) c.threshold_sweep = o.sweep;
  if (!o.constraint.empty())
    c.train.constraint = o.constraint == "poly" ? dagflow::ConstraintForm::kPoly : dagflow::ConstraintForm::kExp;
  if (c.synth) {
    if (!o.mechanism.empty()) c.synth->mechanism = dagflow::parse_mechanism(o.mechanism);
    if (!o.seeds.empty()) c.synth->seeds = o.seeds;
  }
  if (mode == dagflow::RunMode::kFit || mode == dagflow::RunMode::kEval) c.synth.reset();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DAG structure learning with masked autoregressive flows"};
  app.require_subcommand(1);

  ExperimentConfig synth_cfg, fit_cfg, eval_cfg, bench_cfg;
  synth_cfg.synth = dagflow::SynthSpec{};
  bench_cfg.synth = dagflow::SynthSpec{};
  Overrides synth_o, fit_o, eval_o, bench_o;

  auto* synth = app.add_subcommand("synth", "generate an ER graph and SEM data");
  synth->add_option("--config", synth_o.config_path, "JSON config file");
  synth->add_option("-o,--output", synth_o.output, "output directory");
  add_synth_flags(synth, synth_cfg, synth_o);

  auto* fit = app.add_subcommand("fit", "learn a DAG from a CSV dataset");
  fit->add_option("--config", fit_o.config_path, "JSON config file");
  fit->add_option("--data", fit_o.data, "CSV with a header row");
  fit->add_option("-o,--output", fit_o.output, "output directory");
  fit->add_option("--truth", fit_o.truth, "ground-truth edge list");
  fit->add_flag("--sachs-truth", fit_cfg.sachs_truth, "compare with the bundled Sachs consensus graph");
  fit->add_flag("--log1p", fit_cfg.log1p, "apply log1p before standardization");
  fit->add_flag("-v,--verbose", fit_cfg.verbose, "print the training log");
  add_train_flags(fit, fit_cfg, fit_o);

  auto* eval = app.add_subcommand("eval", "score a predicted edge list");
  eval->add_option("--config", eval_o.config_path, "JSON config file");
  eval->add_option("--predicted", eval_o.predicted, "predicted edge list");
  eval->add_option("--truth", eval_o.truth, "ground-truth edge list");
  eval->add_option("--data", eval_o.data, "CSV whose header gives the variable order");
  eval->add_flag("--sachs-truth", eval_cfg.sachs_truth, "compare with the bundled Sachs consensus graph");
  eval->add_option("-o,--output", eval_o.output, "output directory");

  auto* bench = app.add_subcommand("benchmark", "synthetic benchmark over several seeds");
  bench->add_option("--config", bench_o.config_path, "JSON config file");
  bench->add_option("-o,--output", bench_o.output, "output directory");
  bench->add_option("--jobs", bench_cfg.jobs, "parallel seeds");
  bench->add_flag("-v,--verbose", bench_cfg.verbose, "print training logs");
  add_synth_flags(bench, bench_cfg, bench_o);
  add_train_flags(bench, bench_cfg, bench_o);

  CLI11_PARSE(app, argc, argv);

  try {
    auto printer = [](bool on) -> dagflow::LogSink {
      if (!on) return nullptr;
      return [](const std::string& line) { std::cerr << line << '\n'; };
    };
    if (synth->parsed()) {
      const auto c = resolve(synth, synth_cfg, synth_o, dagflow::RunMode::kSynth);
      dagflow::run_synth(c);
      std::cout << "wrote " << c.output_dir.string() << '\n';
    } else if (fit->parsed()) {
      const auto c = resolve(fit, fit_cfg, fit_o, dagflow::RunMode::kFit);
      const auto out = dagflow::run_fit(c, printer(c.verbose));
      std::cout << "status: " << out.result.status << '\n'
                << "edges: " << out.result.graph.edge_count() << '\n';
      if (out.metrics) {
        std::cout << "shd: " << out.metrics->shd << " (reversal cost 1: " << out.metrics->shd_cost1
                  << ")\n"
                  << "tpr: " << out.metrics->tpr << '\n';
      }
      std::cout << "artifacts: " << c.output_dir.string() << '\n';
    } else if (eval->parsed()) {
      const auto c = resolve(eval, eval_cfg, eval_o, dagflow::RunMode::kEval);
      const auto m = dagflow::run_eval(c);
      std::cout << "shd: " << m.shd << " (reversal cost 1: " << m.shd_cost1 << ")\n"
                << "tpr: " << m.tpr << '\n'
                << "tp=" << m.true_positives << " reversed=" << m.reversed << " missing=" << m.missing
                << " extra=" << m.extra << '\n';
    } else if (bench->parsed()) {
      const auto c = resolve(bench, bench_cfg, bench_o, dagflow::RunMode::kBenchmark);
      const auto s = dagflow::run_synth_benchmark(c, printer(c.verbose));
      std::cout << s.text;
    }
  } catch (const dagflow::Error& e) {
    std::cerr << "error (" << dagflow::category_name(e.category()) << "): " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
