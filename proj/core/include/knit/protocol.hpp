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

#include <string>
#include <variant>
#include <vector>

#include "knit/circuit.hpp"
#include "knit/tensor.hpp"

namespace knit {

/// Protocol steps address qubits of the protocol register by index.
struct UnitaryStep {
  std::vector<int> qubits;
  CMatrix u;
};

/// Projective measurement of a single-qubit Pauli; outcome 0 is the +1 eigenspace.
struct MeasureStep {
  int qubit = 0;
  char basis = 'Z';
  std::string bit;
};

/// Applies table[index] where index reads `keys` as a binary number, first key most significant.
struct ConditionalStep {
  std::vector<std::string> keys;
  std::vector<CMatrix> table;
  std::vector<int> qubits;
};

/// weight *= scale * (-1)^(xor of keys)
struct SignStep {
  std::vector<std::string> keys;
  double scale = 1.0;
};

/// Branch weight is zeroed unless bit == value, otherwise multiplied by scale.
struct PostselectStep {
  std::string bit;
  int value = 0;
  double scale = 2.0;
};

/// Resets `qubits` and prepares normalize(sum_k amplitudes[k] e^{i phaseSign phi_k} components[k]).
/// With one component the state is deterministic; otherwise phi comes from the protocol's shared phases.
struct PrepareStep {
  std::vector<int> qubits;
  std::vector<CVector> components;
  std::vector<double> amplitudes;
  int phaseSign = 1;
};

using Step = std::variant<UnitaryStep, MeasureStep, ConditionalStep, SignStep, PostselectStep, PrepareStep>;

struct LocalInstrument {
  Party party = Party::A;
  std::vector<Step> steps;
};

struct Message {
  Party from = Party::A;
  std::vector<std::string> bits;
};

struct TwoPartyProtocol {
  Setting setting = Setting::LO;
  std::vector<Party> qubitParty;  // protocol register layout
  int sharedPhases = 0;
  LocalInstrument instrA{Party::A, {}};
  LocalInstrument instrB{Party::B, {}};
  std::vector<Message> messages;
};

struct ScheduledOp {
  enum Kind { STEP, DELIVER } kind = STEP;
  Party party = Party::A;
  int index = 0;  // step index, or message index for DELIVER
};

/// Orders steps and message deliveries causally. Throws InputError when a message or
/// step references a bit its party cannot know, when the message pattern violates the
/// setting, or when a step touches the other party's qubits.
std::vector<ScheduledOp> linearize(const TwoPartyProtocol& protocol);

std::vector<int> step_qubits(const Step& step);

}  // namespace knit
