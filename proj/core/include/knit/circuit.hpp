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

#include <optional>
#include <string>
#include <vector>

#include "knit/tensor.hpp"

namespace knit {

enum class GateName {
  H, X, Y, Z, S, T, RX, RY, RZ,
  CNOT, CZ, SWAP, ISWAP, RXX, RYY, RZZ, CRX, CRY, CRZ,
  U2x2, U4x4
};

enum class Party { A, B };

enum class Setting { LO, LO_ONEWAY_CC, LOCC };

enum class CutMethod { LP_QPD, TELEPORT_FACTORY };

std::string to_string(GateName name);
std::string to_string(Party party);
std::string to_string(Setting setting);
std::string to_string(CutMethod method);
GateName parse_gate_name(const std::string& text);
Setting parse_setting(const std::string& text);

int gate_arity(GateName name);
int gate_param_count(GateName name);

struct GateSpec {
  GateName name = GateName::H;
  std::vector<double> params;
  std::vector<int> qubits;
  std::optional<CMatrix> matrix;
};

/// Dense matrix; the first listed qubit is the most significant factor.
/// RZ(t) = exp(-i t Z / 2), RXX(t) = exp(-i t XX / 2), CRs(t) = |0><0| (x) 1 + |1><1| (x) Rs(t).
CMatrix gate_matrix(const GateSpec& gate);
CMatrix gate_matrix(GateName name, const std::vector<double>& params = {});

struct CircuitIR {
  int numQubits = 0;
  std::vector<Party> partition;
  std::vector<GateSpec> gates;
  std::string observable;  // letter k acts on qubit k
};

struct CutPlan {
  Setting setting = Setting::LO;
  int factorySize = 1;
  std::vector<CutMethod> perGateMethod;  // one entry per nonlocal gate, in order
};

CircuitIR parse_circuit(const std::string& text);
std::string serialize_circuit(const CircuitIR& circuit);
void validate_circuit(const CircuitIR& circuit);

/// Indices into circuit.gates of two-qubit gates spanning both parties.
std::vector<int> nonlocal_gates(const CircuitIR& circuit);

/// Gate matrix reordered so the party-A qubit is the most significant factor.
CMatrix nonlocal_gate_matrix(const CircuitIR& circuit, int gateIndex);

}  // namespace knit
