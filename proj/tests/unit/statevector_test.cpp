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
#include "knit/random.hpp"
#include "knit/statevector.hpp"
#include "oracles.hpp"

namespace {

using knit::CMatrix;
using knit::CVector;

TEST(Statevector, ApplyMatrixMatchesDenseEmbedding) {
  std::mt19937_64 gen(1);
  const int n = 4;
  for (const auto& qubits : std::vector<std::vector<int>>{{0}, {3}, {0, 1}, {2, 0}, {3, 1}, {1, 3, 2}}) {
    const CMatrix g = oracle::haar_unitary(1 << qubits.size(), gen);
    const CVector psi = oracle::random_state(1 << n, gen);
    CVector got = psi;
    knit::apply_matrix(got, g, qubits);
    EXPECT_LT((got - oracle::embed(g, qubits, n) * psi).norm(), 1e-12);
  }
}

TEST(Statevector, PauliExpectationMatchesDense) {
  std::mt19937_64 gen(2);
  const CVector psi = oracle::random_state(8, gen);
  for (const std::string obs : {"ZII", "IXI", "YYZ", "XZY", "III"}) {
    EXPECT_NEAR(knit::pauli_expectation(psi, obs), oracle::expectation(psi, obs), 1e-12);
  }
}

TEST(Statevector, CapacityLimit) {
  EXPECT_NO_THROW(knit::make_state(knit::kMaxQubits));
  EXPECT_THROW(knit::make_state(knit::kMaxQubits + 1), knit::CapacityError);
}

TEST(Statevector, MeasurementFollowsBornRule) {
  // RY(t)|0> gives P(1) = sin^2(t/2).
  const double t = 1.1;
  knit::TwoPartyProtocol p;
  p.qubitParty = {knit::Party::A};
  p.instrA.steps = {knit::UnitaryStep{{0}, oracle::pauli_rotation("Y", t)}, knit::MeasureStep{0, 'Z', "m"}};
  int ones = 0;
  const int shots = 20000;
  for (int s = 0; s < shots; ++s) {
    knit::SimState st = knit::make_state(1);
    knit::RandomStream rng(9, s);
    knit::execute_protocol(st, p, {0}, rng);
    ones += st.classicalBits.at("m");
    EXPECT_NEAR(st.amplitudes.norm(), 1.0, 1e-12);
  }
  const double p1 = std::pow(std::sin(t / 2), 2);
  EXPECT_NEAR(static_cast<double>(ones) / shots, p1, 5 * std::sqrt(p1 * (1 - p1) / shots));
}

TEST(Statevector, MeasureChannelPtmIsDephasing) {
  knit::TwoPartyProtocol p;
  p.qubitParty = {knit::Party::A};
  p.instrA.steps = {knit::MeasureStep{0, 'X', "m"}};
  const knit::RMatrix r = knit::protocol_ptm(p, 1);
  knit::RMatrix expected = knit::RMatrix::Zero(4, 4);
  expected(0, 0) = expected(1, 1) = 1.0;
  EXPECT_LT((r - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Statevector, SignRuleGivesSignedChannel) {
  // Measure Z, weight (-1)^m: rho -> Z-component only, i.e. the map rho -> (tr(Z rho)) Z/... in PTM terms
  // the Z column maps I-less: R has a single entry R(0, 3) = 1 and R(3, 0) = 1.
  knit::TwoPartyProtocol p;
  p.qubitParty = {knit::Party::A};
  p.instrA.steps = {knit::MeasureStep{0, 'Z', "m"}, knit::SignStep{{"m"}, 1.0}};
  const knit::RMatrix r = knit::protocol_ptm(p, 1);
  // Output is P0 rho P0 - P1 rho P1, which equals (Z rho + rho Z)/2 on the diagonal part.
  knit::RMatrix expected = knit::RMatrix::Zero(4, 4);
  expected(0, 3) = expected(3, 0) = 1.0;
  EXPECT_LT((r - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Statevector, ConditionalCorrectionRestoresState) {
  // Measure X then apply Z on outcome 1: the X eigenstate is restored to |+>, a full reset to |+>.
  knit::TwoPartyProtocol p;
  p.qubitParty = {knit::Party::A};
  p.instrA.steps = {knit::MeasureStep{0, 'X', "m"},
                    knit::ConditionalStep{{"m"}, {oracle::pauli('I'), oracle::pauli('Z')}, {0}}};
  const knit::RMatrix r = knit::protocol_ptm(p, 1);
  knit::RMatrix expected = knit::RMatrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 0) = 1.0;
  EXPECT_LT((r - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Statevector, PrepareWithSharedPhasesAveragesCoherences) {
  // A prepares (|0> + e^{i phi}|1>)/sqrt2, B prepares (|0> + e^{-i phi}|1>)/sqrt2; averaged over phi the
  // joint state is (|00><00| + |11><11|)/4 + (|01><01| + |10><10|)/4 + (|00><11| + h.c.)/4.
  knit::TwoPartyProtocol p;
  p.qubitParty = {knit::Party::A, knit::Party::B};
  p.sharedPhases = 2;
  CVector e0 = CVector::Zero(2), e1 = CVector::Zero(2);
  e0(0) = 1;
  e1(1) = 1;
  const double h = 1 / std::sqrt(2.0);
  p.instrA.steps = {knit::PrepareStep{{0}, {e0, e1}, {h, h}, 1}};
  p.instrB.steps = {knit::PrepareStep{{1}, {e0, e1}, {h, h}, -1}};
  const knit::RMatrix r = knit::protocol_ptm(p, 2);
  // Column 0 of the PTM holds the Pauli expansion of the output state (replacement channel).
  CMatrix rho = CMatrix::Identity(4, 4) / 4.0;
  rho(0, 3) = rho(3, 0) = 0.25;
  for (int i = 0; i < 16; ++i) {
    const double coeff = (oracle::pauli_word(oracle::pauli_basis(2)[i]) * rho).trace().real();
    EXPECT_NEAR(r(i, 0), coeff, 1e-12) << i;
    EXPECT_NEAR(r.row(i).tail(15).norm(), 0.0, 1e-12);
  }
}

TEST(Statevector, SeedDeterminism) {
  knit::TwoPartyProtocol p;
  p.qubitParty = {knit::Party::A};
  p.instrA.steps = {knit::UnitaryStep{{0}, oracle::pauli_rotation("Y", 1.0)}, knit::MeasureStep{0, 'Z', "m"}};
  for (int s = 0; s < 50; ++s) {
    knit::SimState a = knit::make_state(1), b = knit::make_state(1);
    knit::RandomStream ra(77, s), rb(77, s);
    knit::execute_protocol(a, p, {0}, ra);
    knit::execute_protocol(b, p, {0}, rb);
    EXPECT_EQ(a.classicalBits, b.classicalBits);
    EXPECT_EQ(a.amplitudes, b.amplitudes);
  }
}

TEST(Statevector, ProtocolOwnershipIsChecked) {
  knit::TwoPartyProtocol p;
  p.qubitParty = {knit::Party::A, knit::Party::B};
  p.instrA.steps = {knit::UnitaryStep{{1}, oracle::pauli('X')}};
  EXPECT_THROW(knit::linearize(p), knit::InputError);
}

TEST(Statevector, MessagesMustRespectSetting) {
  knit::TwoPartyProtocol p;
  p.qubitParty = {knit::Party::A, knit::Party::B};
  p.instrB.steps = {knit::MeasureStep{1, 'Z', "b"}};
  p.instrA.steps = {knit::ConditionalStep{{"b"}, {oracle::pauli('I'), oracle::pauli('X')}, {0}}};
  p.messages = {knit::Message{knit::Party::B, {"b"}}};
  p.setting = knit::Setting::LO_ONEWAY_CC;
  EXPECT_THROW(knit::linearize(p), knit::InputError);
  p.setting = knit::Setting::LOCC;
  EXPECT_NO_THROW(knit::linearize(p));
  p.messages.clear();
  EXPECT_THROW(knit::linearize(p), knit::InputError);
}

}  // namespace
