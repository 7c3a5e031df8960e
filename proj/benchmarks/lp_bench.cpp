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

#include "knit/atoms.hpp"
#include "knit/circuit.hpp"
#include "knit/qpd.hpp"

namespace {

void BM_LpCnot(benchmark::State& state) {
  const auto& atoms = knit::default_atom_set();
  const auto u = knit::gate_matrix(knit::GateName::CNOT);
  for (auto _ : state) benchmark::DoNotOptimize(knit::lo_gate_qpd(u, atoms).kappa);
}
BENCHMARK(BM_LpCnot)->Unit(benchmark::kMillisecond);

void BM_LpCrz(benchmark::State& state) {
  const auto& atoms = knit::default_atom_set();
  const auto u = knit::gate_matrix(knit::GateName::CRZ, {1.1});
  for (auto _ : state) benchmark::DoNotOptimize(knit::lo_gate_qpd(u, atoms).kappa);
}
BENCHMARK(BM_LpCrz)->Unit(benchmark::kMillisecond);

void BM_FactoryCnot(benchmark::State& state) {
  const auto u = knit::gate_matrix(knit::GateName::CNOT);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(knit::factory_qpd(u, k).kappa);
}
BENCHMARK(BM_FactoryCnot)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
