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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "knit/circuit.hpp"
#include "knit/protocol.hpp"
#include "knit/random.hpp"
#include "knit/tensor.hpp"

namespace knit {

inline constexpr int kMaxQubits = 16;
inline constexpr long kMaxBranches = 1L << 20;

/// Qubit q is bit q of the amplitude index.
struct SimState {
  int numQubits = 0;
  CVector amplitudes;
  std::map<std::string, int> classicalBits;
  double accumulatedWeight = 1.0;
};

SimState make_state(int numQubits);

/// Applies a 2^k x 2^k matrix; qubits[0] is the matrix's most significant factor.
void apply_matrix(CVector& amplitudes, const CMatrix& m, const std::vector<int>& qubits);
void apply_gate(SimState& state, const GateSpec& gate);

/// <psi|O|psi> / <psi|psi>; observable letter k acts on qubit k, missing letters are I.
double pauli_expectation(const CVector& amplitudes, const std::string& observable);

/// accumulatedWeight * <O>.
double expectation(const SimState& state, const std::string& observable);

/// Samples one trajectory. binding[k] is the state qubit for protocol qubit k (-1 if unused).
/// Shared phases are drawn from `rng` at the start; measurement outcomes follow the Born rule.
void execute_protocol(SimState& state, const TwoPartyProtocol& protocol, const std::vector<int>& binding,
                      RandomStream& rng);

/// Exact PTM of a sequence of protocols run on one register. Protocol qubits [0, numActing) are the
/// channel's input/output (qubit 0 most significant); the remaining register qubits start in |0> and
/// are traced out. `ancillaState`, when given, replaces |0...0> on the remaining qubits (first ancilla most
/// significant). Branches are enumerated; shared phases run over a three-point grid with phi_0 = 0, which
/// reproduces the uniform phase average exactly.
RMatrix protocol_ptm(const std::vector<TwoPartyProtocol>& segments, int numActing,
                     const CVector& ancillaState = CVector());
RMatrix protocol_ptm(const TwoPartyProtocol& protocol, int numActing, const CVector& ancillaState = CVector());

}  // namespace knit
