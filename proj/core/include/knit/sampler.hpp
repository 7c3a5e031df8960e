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

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "knit/atoms.hpp"
#include "knit/circuit.hpp"
#include "knit/qpd.hpp"

namespace knit {

/// One QPD instance: a single nonlocal gate, or a factory batch whose slot s is gateIndices[s].
struct Cut {
  std::vector<int> gateIndices;
  std::shared_ptr<const Qpd> qpd;
};

struct TermTally {
  std::vector<int> gateIndices;
  std::vector<std::string> labels;
  std::vector<long> counts;
};

struct EstimateResult {
  double mean = 0;
  double standardError = 0;  // sample standard deviation / sqrt(shots)
  double variance = 0;       // unbiased sample variance of the per-shot values
  long shots = 0;
  double kappaTotal = 1;        // product of per-cut kappa
  double samplingOverhead = 1;  // product of kappa^2 times postselection variance factors
  std::vector<double> costPerGate;  // asymptotic per-gate cost, one entry per nonlocal gate
  std::vector<TermTally> termTallies;  // one per cut
  std::uint64_t seed = 0;
  Setting setting = Setting::LO;
};

/// LO: LP QPD everywhere. LOCC: teleportation factory (batches of k) for Clifford gates.
/// LO_ONEWAY_CC: one-way factory for CNOT with the control on party A, LP QPD otherwise.
CutPlan default_plan(const CircuitIR& circuit, Setting setting, int k = 1);

/// Throws InputError on a malformed plan or a method the setting does not allow.
void validate_plan(const CircuitIR& circuit, const CutPlan& plan);

/// QPDs for every cut of the plan; identical gates share one LP solve.
std::vector<Cut> build_cuts(const CircuitIR& circuit, const CutPlan& plan,
                            const AtomSet& atoms = default_atom_set());

/// Ancillas of a factory batch are live from its first slot through its last. Throws CapacityError
/// when workload plus live ancillas ever exceed the simulator cap.
int peak_register_size(const CircuitIR& circuit, const std::vector<Cut>& cuts);

/// Shot i draws from RandomStream(seed, i) only, so the result does not depend on `workers`.
EstimateResult estimate(const CircuitIR& circuit, const CutPlan& plan, const std::vector<Cut>& cuts, long shots,
                        std::uint64_t seed, int workers = 1);
EstimateResult estimate(const CircuitIR& circuit, const CutPlan& plan, long shots, std::uint64_t seed,
                        int workers = 1, const AtomSet& atoms = default_atom_set());

struct VarianceReport {
  double empiricalVariance = 0;
  double ceiling = 0;  // samplingOverhead * bound^2
  double ratio = 0;
  bool exceeded = false;
};

VarianceReport variance_report(const EstimateResult& result, double observableBound = 1.0);

/// Uncut statevector expectation of the circuit's observable.
double exact_expectation(const CircuitIR& circuit);

std::string estimate_to_json(const EstimateResult& result);

}  // namespace knit
