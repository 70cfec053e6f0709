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

#include <benchmark/benchmark.h>

#include <random>

#include "dagflow/dag_constraint.hpp"
#include "dagflow/linalg.hpp"
#include "dagflow/made.hpp"
#include "dagflow/trainer.hpp"

namespace {

using namespace dagflow;

DenseMatrix gaussian(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  DenseMatrix m(r, c);
  for (double& v : m.data()) v = n(rng);
  return m;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix a = gaussian(n, n, 1), b = gaussian(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(10)->Arg(100)->Arg(256);

void BM_MatrixExp(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  DenseMatrix w = gaussian(d, d, 3);
  for (double& v : w.data()) v = v * v * 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(h_exp(w));
}
BENCHMARK(BM_MatrixExp)->Arg(10)->Arg(50);

void BM_TrainStep(benchmark::State& state) {
  TrainConfig config;
  config.jacobian_batch = static_cast<std::size_t>(state.range(0));
  TrainState s = make_initial_state(10, config);
  const DenseMatrix batch = gaussian(config.batch_size, 10, 4);
  for (auto _ : state) benchmark::DoNotOptimize(train_step(s, batch, config));
}
BENCHMARK(BM_TrainStep)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FlowLogLikelihood(benchmark::State& state) {
  const FlowModel flow = FlowModel::create(10, FlowConfig{}, 5);
  const DenseMatrix x = gaussian(1000, 10, 6);
  for (auto _ : state) benchmark::DoNotOptimize(flow_log_likelihood(flow, x));
}
BENCHMARK(BM_FlowLogLikelihood)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
