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

#include <gtest/gtest.h>

#include <random>

#include "knit/error.hpp"
#include "knit/gamma.hpp"
#include "knit/kak.hpp"
#include "oracles.hpp"

namespace {

using knit::CMatrix;
using oracle::kPi;

/// 2 (sum of Choi Schmidt coefficients)^2 - 1, Choi state built as U on halves of two Bell pairs.
double choi_oracle(const CMatrix& u) {
  CMatrix m(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x)
      for (int b = 0; b < 2; ++b)
        for (int y = 0; y < 2; ++y) m(a * 2 + x, b * 2 + y) = u(a * 2 + b, x * 2 + y) / 2.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const double s = svd.singularValues().sum();
  return 2 * s * s - 1;
}

CMatrix dress(const CMatrix& core, std::mt19937_64& gen) {
  const CMatrix l = Eigen::kroneckerProduct(oracle::haar_unitary(2, gen), oracle::haar_unitary(2, gen)).eval();
  const CMatrix r = Eigen::kroneckerProduct(oracle::haar_unitary(2, gen), oracle::haar_unitary(2, gen)).eval();
  return l * core * r;
}

TEST(Gamma, ClosedFormTable) {
  EXPECT_NEAR(knit::gamma_exact(oracle::cnot()), 3.0, 1e-9);
  EXPECT_NEAR(knit::gamma_exact(oracle::cz()), 3.0, 1e-9);
  EXPECT_NEAR(knit::gamma_exact(oracle::iswap()), 7.0, 1e-9);
  EXPECT_NEAR(knit::gamma_exact(oracle::swap_gate()), 7.0, 1e-9);
  EXPECT_NEAR(knit::gamma_exact(CMatrix::Identity(4, 4)), 1.0, 1e-9);
  for (int i = 0; i < 32; ++i) {
    const double t = 2 * kPi * i / 31.0;
    const double cr = 1 + 2 * std::abs(std::sin(t / 2));
    const double rr = 1 + 2 * std::abs(std::sin(t));
    for (char s : std::string("XYZ")) {
      EXPECT_NEAR(knit::gamma_exact(oracle::controlled_rotation(s, t)), cr, 1e-9) << s << " " << t;
      EXPECT_NEAR(knit::gamma_exact(oracle::pauli_rotation(std::string(2, s), t)), rr, 1e-9) << s << " " << t;
    }
  }
}

TEST(Gamma, UpperAndLowerBoundsAgreeWhenThetaZVanishes) {
  std::mt19937_64 gen(64);
  std::uniform_real_distribution<double> d(0, kPi / 4);
  for (int trial = 0; trial < 64; ++trial) {
    double x = d(gen), y = d(gen);
    if (y > x) std::swap(x, y);
    const CMatrix u = dress(oracle::canonical(x, y, 0), gen);
    const double upper = knit::gamma_lo_upper(u);
    const double lower = knit::choi_schmidt_lower(u);
    EXPECT_NEAR(upper, lower, 1e-8);
    EXPECT_NEAR(lower, choi_oracle(u), 1e-9);
    EXPECT_NEAR(knit::gamma_exact(u), upper, 1e-8);
  }
  const CMatrix sw = dress(oracle::swap_gate(), gen);
  EXPECT_NEAR(knit::gamma_lo_upper(sw), 7.0, 1e-8);
  EXPECT_NEAR(knit::choi_schmidt_lower(sw), 7.0, 1e-8);
}

TEST(Gamma, GeneralGatesOnlyHaveBounds) {
  std::mt19937_64 gen(7);
  const CMatrix u = oracle::canonical(0.6, 0.4, 0.2);
  EXPECT_THROW(knit::gamma_exact(u), knit::UnsupportedError);
  EXPECT_GE(knit::gamma_lo_upper(u) + 1e-12, knit::choi_schmidt_lower(u));
  const auto report = knit::gamma_report(dress(u, gen));
  EXPECT_FALSE(report.gammaExact.has_value());
  EXPECT_EQ(report.kakClass, knit::KakClass::GENERAL);
}

TEST(Gamma, LowerBoundNeverExceedsUpperOnHaarGates) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix u = oracle::haar_unitary(4, gen);
    EXPECT_LE(knit::choi_schmidt_lower(u), knit::gamma_lo_upper(u) + 1e-9);
    EXPECT_NEAR(knit::choi_schmidt_lower(u), choi_oracle(u), 1e-9);
  }
}

TEST(Gamma, BellBatchValues) {
  for (int n = 1; n <= 4; ++n) {
    const int dim = 1 << n;
    knit::CVector psi = knit::CVector::Zero(dim * dim);
    for (int x = 0; x < dim; ++x) psi(x * dim + x) = 1.0 / std::sqrt(static_cast<double>(dim));
    EXPECT_NEAR(knit::gamma_pure_state(psi, dim, dim), std::pow(2.0, n + 1) - 1, 1e-9);
  }
  knit::CVector product = knit::CVector::Zero(4);
  product(0) = 1;
  EXPECT_NEAR(knit::gamma_pure_state(product, 2, 2), 1.0, 1e-12);
}

TEST(Gamma, PureStateMatchesReducedSpectrum) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = oracle::random_state(8, gen);
    const double s = oracle::schmidt_from_reduced(psi, 2, 4).sum();
    EXPECT_NEAR(knit::gamma_pure_state(psi, 2, 4), 2 * s * s - 1, 1e-9);
  }
}

TEST(Gamma, EffectiveGammaCurve) {
  const std::vector<std::pair<int, double>> points{{1, 3.0}, {2, 2.64575}, {5, 2.29017}, {10, 2.14344}, {20, 2.07053}};
  for (auto [k, v] : points) EXPECT_NEAR(knit::effective_gamma_k(oracle::cnot(), k), v, 5e-5) << k;
  for (int k = 1; k < 30; ++k) {
    const double gk = knit::effective_gamma_k(oracle::cnot(), k);
    EXPECT_NEAR(gk, std::pow(std::pow(2.0, k + 1) - 1, 1.0 / k), 1e-12);
    EXPECT_GT(gk, 2.0);
    EXPECT_LT(knit::effective_gamma_k(oracle::cnot(), k + 1), gk);
  }
  EXPECT_THROW(knit::effective_gamma_k(oracle::controlled_rotation('Z', 0.5), 2), knit::InputError);
  EXPECT_THROW(knit::effective_gamma_k(oracle::cnot(), 0), knit::InputError);
}

TEST(Gamma, ControlledRotationEnvelope) {
  EXPECT_DOUBLE_EQ(knit::crx_bounds(0).lower, 1.0);
  EXPECT_DOUBLE_EQ(knit::crx_bounds(0).upper, 1.0);
  EXPECT_NEAR(knit::crx_bounds(kPi).lower, 2.0, 1e-15);
  EXPECT_EQ(knit::crx_bounds(kPi).upper, 2.0);
  EXPECT_NEAR(knit::crx_bounds(kPi / 3).lower, 1.5, 1e-12);
  EXPECT_EQ(knit::crx_bounds(kPi / 3).upper, 2.0);
  EXPECT_EQ(knit::crx_bounds(5 * kPi / 3).upper, 2.0);
  for (int i = 0; i <= 200; ++i) {
    const double t = i * kPi / 100;
    const auto b = knit::crx_bounds(t);
    EXPECT_LE(b.lower, b.upper + 1e-15);
    const double s = std::abs(std::sin(t / 2));
    EXPECT_NEAR(b.lower, 1 + s, 1e-15);
    EXPECT_NEAR(b.upperLo, 1 + 2 * s, 1e-15);
    if (t > kPi / 3 && t < 5 * kPi / 3) EXPECT_EQ(b.upper, 2.0);
    // The LO bound is the exact LO gamma of the gate.
    EXPECT_NEAR(b.upperLo, knit::gamma_exact(oracle::controlled_rotation('X', t)), 1e-9);
  }
}

}  // namespace
