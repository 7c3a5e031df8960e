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
#include <utility>
#include <vector>

#include "knit/protocol.hpp"
#include "knit/tensor.hpp"

namespace knit {

/// Single-qubit local operation: steps on qubit 0 recording into bit "m".
struct LocalOp {
  std::string label;
  std::vector<Step> steps;
  RMatrix ptm;  // 4x4
};

struct AtomSet {
  std::string name;
  std::vector<LocalOp> opsA;
  std::vector<LocalOp> opsB;
  std::vector<std::pair<int, int>> pairs;

  size_t size() const { return pairs.size(); }
  RMatrix atom_ptm(size_t index) const;  // 16x16, A is the most significant factor
  std::string label(size_t index) const;
};

/// Per party: the 24 single-qubit Cliffords (identity, Paulis and exp(+-i pi s / 4) among them) and
/// signed measure-and-prepare instruments: measure s in {X, Y, Z}, sign rule +/+ or +/-, then a Clifford
/// sending the measured eigenbasis to one of the six Pauli eigenbases. Deduplicated up to sign by PTM.
const AtomSet& default_atom_set();

/// Minimal preset: identity, Paulis and Pauli measurements only.
const AtomSet& pauli_atom_set();

const AtomSet& atom_set_by_name(const std::string& name);

/// Every op becomes post * op * pre on its party.
AtomSet dressed_atom_set(const AtomSet& base, const CMatrix& postA, const CMatrix& postB, const CMatrix& preA,
                         const CMatrix& preB);

/// Expected single-qubit PTM of a local op by branch enumeration.
RMatrix local_op_ptm(const std::vector<Step>& steps);

/// Rewrites qubit 0 to `qubit` and bit "m" to `bit`.
std::vector<Step> relocate(const std::vector<Step>& steps, int qubit, const std::string& bit);

}  // namespace knit
