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

#include "knit/circuit.hpp"
#include "knit/clifford.hpp"
#include "knit/error.hpp"
#include "oracles.hpp"

namespace {

using knit::CMatrix;

// Dense check: U P U^dagger equals the tableau image including its phase.
void expect_conjugation(const CMatrix& u, int n) {
  const knit::Tableau t = knit::Tableau::from_unitary(u);
  for (const std::string& w : oracle::pauli_basis(n)) {
    const knit::PauliString img = t.conjugate(knit::PauliString{0, w});
    const CMatrix dense = u * oracle::pauli_word(w) * u.adjoint();
    EXPECT_LT((img.matrix() - dense).norm(), 1e-10) << w << " -> " << img.str();
  }
}

TEST(Clifford, TableauMatchesDenseConjugation) {
  expect_conjugation(oracle::cnot(), 2);
  expect_conjugation(oracle::cz(), 2);
  expect_conjugation(oracle::swap_gate(), 2);
  expect_conjugation(oracle::iswap(), 2);
  for (const CMatrix& c : knit::single_qubit_cliffords()) expect_conjugation(c, 1);
  const CMatrix h = knit::gate_matrix(knit::GateName::H);
  const CMatrix s = knit::gate_matrix(knit::GateName::S);
  const CMatrix three = oracle::embed(oracle::cnot(), {0, 2}, 3) * oracle::embed(h, {1}, 3) *
                        oracle::embed(s, {2}, 3) * oracle::embed(oracle::cz(), {1, 0}, 3);
  expect_conjugation(three, 3);
}

TEST(Clifford, SingleQubitGroupHas24DistinctElements) {
  const auto& group = knit::single_qubit_cliffords();
  ASSERT_EQ(group.size(), 24u);
  EXPECT_LT((group[0] - CMatrix::Identity(2, 2)).norm(), 1e-12);
  for (size_t i = 0; i < group.size(); ++i)
    for (size_t j = i + 1; j < group.size(); ++j) {
      // Distinct up to global phase.
      const double overlap = std::abs((group[i].adjoint() * group[j]).trace()) / 2.0;
      EXPECT_LT(overlap, 1.0 - 1e-9);
    }
}

TEST(Clifford, NonCliffordDetection) {
  EXPECT_FALSE(knit::is_clifford(knit::gate_matrix(knit::GateName::T)));
  EXPECT_FALSE(knit::is_clifford(oracle::controlled_rotation('Z', 0.7)));
  EXPECT_TRUE(knit::is_clifford(oracle::controlled_rotation('Z', oracle::kPi)));
  EXPECT_THROW(knit::Tableau::from_unitary(knit::gate_matrix(knit::GateName::T)), knit::InputError);
}

TEST(Clifford, PauliAlgebra) {
  const auto xy = knit::parse_pauli("X") * knit::parse_pauli("Y");
  EXPECT_LT((xy.matrix() - oracle::pauli('X') * oracle::pauli('Y')).norm(), 1e-15);
  EXPECT_EQ(knit::parse_pauli("-iXZ").str(), "-iXZ");
  EXPECT_EQ(knit::pauli_conjugate(oracle::cnot(), knit::parse_pauli("XI")).str(), "+XX");
  EXPECT_EQ(knit::pauli_conjugate(oracle::cnot(), knit::parse_pauli("IZ")).str(), "+ZZ");
}

}  // namespace
