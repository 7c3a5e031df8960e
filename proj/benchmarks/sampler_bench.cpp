// Copyright 2026 The Knit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "knit/circuit.hpp"
#include "knit/sampler.hpp"

namespace {

knit::CircuitIR two_cnot_circuit() {
  return knit::parse_circuit(R"({
    "numQubits": 4,
    "partition": ["A", "A", "B", "B"],
    "gates": [
      {"name": "RY", "qubits": [0], "params": [0.9]},
      {"name": "RY", "qubits": [1], "params": [0.6]},
      {"name": "RX", "qubits": [2], "params": [0.4]},
      {"name": "CNOT", "qubits": [0, 2]},
      {"name": "CNOT", "qubits": [1, 3]}
    ],
    "observable": "ZZZZ"
  })");
}

void run(benchmark::State& state, knit::Setting setting, int k) {
  const auto c = two_cnot_circuit();
  const auto plan = knit::default_plan(c, setting, k);
  const auto cuts = knit::build_cuts(c, plan);
  const int shots = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(knit::estimate(c, plan, cuts, shots, 1).mean);
  state.SetItemsProcessed(state.iterations() * shots);
}

void BM_EstimateLo(benchmark::State& state) { run(state, knit::Setting::LO, 1); }
void BM_EstimateLoccK2(benchmark::State& state) { run(state, knit::Setting::LOCC, 2); }
void BM_EstimateOneWay(benchmark::State& state) { run(state, knit::Setting::LO_ONEWAY_CC, 1); }
BENCHMARK(BM_EstimateLo)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateLoccK2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateOneWay)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
