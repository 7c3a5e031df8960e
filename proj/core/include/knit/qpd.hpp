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
#include <vector>

#include "knit/atoms.hpp"
#include "knit/clifford.hpp"
#include "knit/protocol.hpp"
#include "knit/tensor.hpp"

namespace knit {

/// Segment s of a term runs at gate slot s of its cut (segment 0 for single-slot and state QPDs).
struct QpdTerm {
  double coefficient = 0;
  std::string label;
  std::vector<TwoPartyProtocol> segments;
};

/// Register layout: gate QPDs place slot s on qubits 2s (party A) and 2s + 1 (party B), followed by
/// ancillas; state QPDs act on all register qubits.
struct Qpd {
  std::string target;
  Setting setting = Setting::LO;
  int slots = 1;
  int numActing = 2;
  std::vector<Party> registerParty;
  std::vector<QpdTerm> terms;
  double kappa = 0;
  RMatrix targetPtm;
  /// Product of postselection scales per term; multiplies the variance ceiling.
  double varianceFactor = 1.0;
  /// Per-slot large-batch cost: kappa^2 for LO, (sum alpha)^4 times postselection for teleportation.
  std::vector<double> asymptoticCostPerSlot;

  int ancilla_count() const { return static_cast<int>(registerParty.size()) - numActing; }
};

/// LO QPD minimizing sum |a_i| over the atom set. Throws UnsupportedError if the atoms miss the target,
/// NumericalError if the LP fails.
Qpd solve_min_l1(const RMatrix& targetPtm, const AtomSet& atoms, const std::string& target = "custom");

/// LO QPD for a two-qubit gate (party A most significant): LP on the canonical gate, terms dressed with
/// the KAK local unitaries.
Qpd lo_gate_qpd(const CMatrix& u, const AtomSet& atoms, const std::string& target = "custom");

/// Vidal decomposition of a bipartite pure state on qubitsA + qubitsB register qubits (A first).
Qpd vidal_state_qpd(const CVector& psi, int qubitsA, int qubitsB);

enum class TeleportShape { AUTO, BELL_CNOT, CHOI };

/// Gate teleportation consuming a pre-shared resource. Register: 0 = A workload, 1 = B workload,
/// then ancillas. BELL_CNOT: ancillas [A, B] holding a Bell pair, CNOT only (control A).
/// CHOI: ancillas [A, A', B, B'] holding the Choi state; any Clifford.
struct TeleportGadget {
  TeleportShape shape = TeleportShape::CHOI;
  TwoPartyProtocol protocol;
  std::vector<int> ancillasA;
  std::vector<int> ancillasB;
  CMatrix resourceCoefficients;  // rows: A-side ancillas, columns: B-side ancillas

  CVector resource_state() const;
};

TeleportGadget teleport_protocol(const CMatrix& u, TeleportShape shape = TeleportShape::AUTO);

/// Vidal QPD of the joint resource for all slots, each slot consumed by its teleportation gadget.
Qpd factory_qpd(const std::vector<CMatrix>& gates, TeleportShape shape = TeleportShape::AUTO);
Qpd factory_qpd(const CMatrix& u, int k, TeleportShape shape = TeleportShape::AUTO);

/// Removes B -> A messages by postselecting B's messaged outcomes on 0 with weight 2 each.
Qpd oneway_variant(const Qpd& q);

RMatrix qpd_ptm(const Qpd& q);
double qpd_identity_error(const Qpd& q);

std::string qpd_to_json(const Qpd& q);

bool is_cnot(const CMatrix& u, double tol = 1e-12);

}  // namespace knit
