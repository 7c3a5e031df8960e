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

#include <random>

#include "knit/gamma.hpp"
#include "knit/kak.hpp"
#include "knit/tensor.hpp"

namespace {

knit::CMatrix random_unitary(std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  knit::CMatrix z(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) z(i, j) = knit::Complex(n(gen), n(gen));
  Eigen::HouseholderQR<knit::CMatrix> qr(z);
  return qr.householderQ();
}

void BM_Kak(benchmark::State& state) {
  std::mt19937_64 gen(3);
  const auto u = random_unitary(gen);
  for (auto _ : state) benchmark::DoNotOptimize(knit::kak(u).thetaX);
}
BENCHMARK(BM_Kak);

void BM_GammaReport(benchmark::State& state) {
  std::mt19937_64 gen(4);
  const auto u = random_unitary(gen);
  for (auto _ : state) benchmark::DoNotOptimize(knit::gamma_report(u).gammaLO_upper);
}
BENCHMARK(BM_GammaReport);

void BM_Schmidt(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n;
  knit::CVector psi(dim * dim);
  for (auto& a : psi) a = knit::Complex(n(gen), n(gen));
  psi.normalize();
  for (auto _ : state) benchmark::DoNotOptimize(knit::schmidt_decompose(psi, dim, dim).coefficients(0));
}
BENCHMARK(BM_Schmidt)->Arg(4)->Arg(16)->Arg(64);

}  // namespace
