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

#include "knit/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include "knit/clifford.hpp"
#include "knit/error.hpp"
#include "knit/random.hpp"
#include "knit/statevector.hpp"

namespace knit {

namespace {

bool setting_allows(Setting plan, Setting qpd) {
  switch (plan) {
    case Setting::LO: return qpd == Setting::LO;
    case Setting::LO_ONEWAY_CC: return qpd != Setting::LOCC;
    case Setting::LOCC: return true;
  }
  return false;
}

std::string matrix_key(const CMatrix& m) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index i = 0; i < m.size(); ++i) out << m(i).real() << ',' << m(i).imag() << ';';
  return out.str();
}

/// Circuit qubits (A side, B side) of a nonlocal gate.
std::pair<int, int> party_qubits(const CircuitIR& circuit, int gateIndex) {
  const auto& q = circuit.gates[gateIndex].qubits;
  return circuit.partition[q[0]] == Party::A ? std::make_pair(q[0], q[1]) : std::make_pair(q[1], q[0]);
}

struct CutRuntime {
  const Qpd* qpd = nullptr;
  std::vector<int> binding;  // register qubit -> state qubit
  std::vector<double> cumulative;
};

struct GateSlot {
  int cut = -1;
  int slot = 0;
};

struct Schedule {
  int registerSize = 0;
  std::vector<CutRuntime> cuts;
  std::vector<GateSlot> gateSlots;  // per circuit gate
};

Schedule make_schedule(const CircuitIR& circuit, const std::vector<Cut>& cuts) {
  Schedule s;
  s.cuts.resize(cuts.size());
  s.gateSlots.assign(circuit.gates.size(), GateSlot{});
  for (size_t c = 0; c < cuts.size(); ++c) {
    const Qpd& q = *cuts[c].qpd;
    if (static_cast<int>(cuts[c].gateIndices.size()) != q.slots || q.numActing != 2 * q.slots) {
      throw InputError("cut " + std::to_string(c) + ": QPD slots do not match its gates");
    }
    if (q.terms.empty() || q.kappa <= 0) throw InputError("cut " + std::to_string(c) + ": empty QPD");
    for (int slot = 0; slot < q.slots; ++slot) {
      const int g = cuts[c].gateIndices[slot];
      if (g < 0 || g >= static_cast<int>(circuit.gates.size())) throw InputError("cut gate index out of range");
      if (slot > 0 && g <= cuts[c].gateIndices[slot - 1]) throw InputError("cut gates must be in circuit order");
      if (s.gateSlots[g].cut >= 0) throw InputError("gate " + std::to_string(g) + " is assigned to two cuts");
      s.gateSlots[g] = GateSlot{static_cast<int>(c), slot};
    }
    s.cuts[c].qpd = &q;
    double acc = 0;
    for (const QpdTerm& t : q.terms) {
      acc += std::abs(t.coefficient);
      s.cuts[c].cumulative.push_back(acc);
    }
  }
  const std::vector<int> nonlocal = nonlocal_gates(circuit);
  for (int g : nonlocal) {
    if (s.gateSlots[g].cut < 0) throw InputError("nonlocal gate " + std::to_string(g) + " has no QPD");
  }
  for (size_t g = 0; g < s.gateSlots.size(); ++g) {
    if (s.gateSlots[g].cut >= 0 && std::find(nonlocal.begin(), nonlocal.end(), static_cast<int>(g)) == nonlocal.end()) {
      throw InputError("gate " + std::to_string(g) + " is local but assigned to a cut");
    }
  }

  // Lowest-free allocation of ancilla qubits above the workload.
  std::vector<bool> used;
  int peak = circuit.numQubits;
  for (size_t g = 0; g < circuit.gates.size(); ++g) {
    const GateSlot gs = s.gateSlots[g];
    if (gs.cut < 0) continue;
    CutRuntime& rt = s.cuts[gs.cut];
    const Cut& cut = cuts[gs.cut];
    if (gs.slot == 0) {
      rt.binding.assign(rt.qpd->registerParty.size(), -1);
      for (int slot = 0; slot < rt.qpd->slots; ++slot) {
        const auto [qa, qb] = party_qubits(circuit, cut.gateIndices[slot]);
        rt.binding[2 * slot] = qa;
        rt.binding[2 * slot + 1] = qb;
      }
      for (size_t r = rt.qpd->numActing; r < rt.binding.size(); ++r) {
        size_t k = 0;
        while (k < used.size() && used[k]) ++k;
        if (k == used.size()) used.push_back(false);
        used[k] = true;
        rt.binding[r] = circuit.numQubits + static_cast<int>(k);
        peak = std::max(peak, rt.binding[r] + 1);
      }
    }
    if (gs.slot == rt.qpd->slots - 1) {
      for (size_t r = rt.qpd->numActing; r < rt.binding.size(); ++r) used[rt.binding[r] - circuit.numQubits] = false;
    }
  }
  if (peak > kMaxQubits) {
    throw CapacityError("register of " + std::to_string(peak) + " qubits (workload plus live ancillas) exceeds the " +
                        std::to_string(kMaxQubits) + "-qubit simulator cap");
  }
  s.registerSize = peak;
  return s;
}

void run_shots(const CircuitIR& circuit, const Schedule& schedule, std::uint64_t seed, long begin, long end,
               std::vector<double>& values, std::vector<std::vector<long>>& tallies) {
  const size_t numCuts = schedule.cuts.size();
  std::vector<int> chosen(numCuts);
  for (long shot = begin; shot < end; ++shot) {
    RandomStream rng(seed, static_cast<std::uint64_t>(shot));
    double weight = 1.0;
    for (size_t c = 0; c < numCuts; ++c) {
      const CutRuntime& rt = schedule.cuts[c];
      const double u = rng.uniform() * rt.cumulative.back();
      size_t t = 0;
      while (t + 1 < rt.cumulative.size() && u >= rt.cumulative[t]) ++t;
      chosen[c] = static_cast<int>(t);
      ++tallies[c][t];
      weight *= rt.qpd->kappa * (rt.qpd->terms[t].coefficient < 0 ? -1.0 : 1.0);
    }
    SimState state = make_state(schedule.registerSize);
    for (size_t g = 0; g < circuit.gates.size() && state.accumulatedWeight != 0.0; ++g) {
      const GateSlot gs = schedule.gateSlots[g];
      if (gs.cut < 0) {
        apply_gate(state, circuit.gates[g]);
        continue;
      }
      const CutRuntime& rt = schedule.cuts[gs.cut];
      execute_protocol(state, rt.qpd->terms[chosen[gs.cut]].segments[gs.slot], rt.binding, rng);
    }
    double value = 0.0;
    if (state.accumulatedWeight != 0.0) {
      const double e = pauli_expectation(state.amplitudes, circuit.observable);
      const double outcome = rng.uniform() < 0.5 * (1.0 + e) ? 1.0 : -1.0;
      value = weight * state.accumulatedWeight * outcome;
    }
    values[shot] = value;
  }
}

}  // namespace

CutPlan default_plan(const CircuitIR& circuit, Setting setting, int k) {
  if (k < 1) throw InputError("factory size k must be at least 1");
  CutPlan plan;
  plan.setting = setting;
  plan.factorySize = k;
  for (int g : nonlocal_gates(circuit)) {
    const CMatrix u = nonlocal_gate_matrix(circuit, g);
    CutMethod m = CutMethod::LP_QPD;
    if (setting == Setting::LOCC && is_clifford(u)) m = CutMethod::TELEPORT_FACTORY;
    if (setting == Setting::LO_ONEWAY_CC && is_cnot(u, 1e-10)) m = CutMethod::TELEPORT_FACTORY;
    plan.perGateMethod.push_back(m);
  }
  return plan;
}

void validate_plan(const CircuitIR& circuit, const CutPlan& plan) {
  validate_circuit(circuit);
  const std::vector<int> gates = nonlocal_gates(circuit);
  if (plan.perGateMethod.size() != gates.size()) {
    throw InputError("plan lists " + std::to_string(plan.perGateMethod.size()) + " methods for " +
                     std::to_string(gates.size()) + " nonlocal gates");
  }
  if (plan.factorySize < 1) throw InputError("factory size k must be at least 1");
  for (size_t i = 0; i < gates.size(); ++i) {
    if (plan.perGateMethod[i] != CutMethod::TELEPORT_FACTORY) continue;
    if (plan.setting == Setting::LO) {
      throw InputError("gate " + std::to_string(gates[i]) + ": teleportation needs classical communication");
    }
    if (!is_clifford(nonlocal_gate_matrix(circuit, gates[i]))) {
      throw InputError("gate " + std::to_string(gates[i]) + ": teleportation factory requires a Clifford gate");
    }
  }
}

std::vector<Cut> build_cuts(const CircuitIR& circuit, const CutPlan& plan, const AtomSet& atoms) {
  validate_plan(circuit, plan);
  const std::vector<int> gates = nonlocal_gates(circuit);
  std::map<std::string, std::shared_ptr<const Qpd>> cache;
  std::vector<Cut> cuts;
  std::vector<int> batch;
  auto flush = [&]() {
    if (batch.empty()) return;
    std::vector<CMatrix> us;
    std::string key = "factory|" + to_string(plan.setting) + "|";
    for (int g : batch) {
      us.push_back(nonlocal_gate_matrix(circuit, g));
      key += matrix_key(us.back()) + "|";
    }
    auto& slot = cache[key];
    if (!slot) {
      Qpd q = factory_qpd(us);
      if (plan.setting == Setting::LO_ONEWAY_CC) q = oneway_variant(q);
      slot = std::make_shared<const Qpd>(std::move(q));
    }
    cuts.push_back(Cut{batch, slot});
    batch.clear();
  };
  for (size_t i = 0; i < gates.size(); ++i) {
    const int g = gates[i];
    if (plan.perGateMethod[i] == CutMethod::TELEPORT_FACTORY) {
      batch.push_back(g);
      if (static_cast<int>(batch.size()) == plan.factorySize) flush();
      continue;
    }
    const CMatrix u = nonlocal_gate_matrix(circuit, g);
    auto& slot = cache["lp|" + atoms.name + "|" + matrix_key(u)];
    if (!slot) slot = std::make_shared<const Qpd>(lo_gate_qpd(u, atoms, to_string(circuit.gates[g].name)));
    cuts.push_back(Cut{{g}, slot});
  }
  flush();
  // Factory batches are emitted when complete; keep cuts ordered by their first gate.
  std::stable_sort(cuts.begin(), cuts.end(),
                   [](const Cut& a, const Cut& b) { return a.gateIndices.front() < b.gateIndices.front(); });
  peak_register_size(circuit, cuts);
  return cuts;
}

int peak_register_size(const CircuitIR& circuit, const std::vector<Cut>& cuts) {
  return make_schedule(circuit, cuts).registerSize;
}

EstimateResult estimate(const CircuitIR& circuit, const CutPlan& plan, const std::vector<Cut>& cuts, long shots,
                        std::uint64_t seed, int workers) {
  validate_circuit(circuit);
  if (shots < 2) throw InputError("shots must be at least 2");
  if (workers < 1) throw InputError("workers must be at least 1");
  for (const Cut& c : cuts) {
    if (!c.qpd) throw InputError("cut without a QPD");
    if (!setting_allows(plan.setting, c.qpd->setting)) {
      throw InputError("QPD for gate " + std::to_string(c.gateIndices.front()) + " needs " +
                       to_string(c.qpd->setting) + ", plan allows " + to_string(plan.setting));
    }
  }
  const Schedule schedule = make_schedule(circuit, cuts);

  std::vector<double> values(static_cast<size_t>(shots));
  const int numWorkers = static_cast<int>(std::min<long>(workers, shots));
  std::vector<std::vector<std::vector<long>>> tallies(numWorkers);
  for (auto& t : tallies) {
    for (const CutRuntime& rt : schedule.cuts) t.emplace_back(rt.qpd->terms.size(), 0);
  }
  std::vector<std::exception_ptr> errors(numWorkers);
  auto work = [&](int w) {
    try {
      const long begin = shots * w / numWorkers;
      const long end = shots * (w + 1) / numWorkers;
      run_shots(circuit, schedule, seed, begin, end, values, tallies[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (numWorkers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < numWorkers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EstimateResult r;
  r.shots = shots;
  r.seed = seed;
  r.setting = plan.setting;
  double sum = 0;
  for (double v : values) sum += v;
  r.mean = sum / static_cast<double>(shots);
  double ss = 0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  r.variance = ss / static_cast<double>(shots - 1);
  r.standardError = std::sqrt(r.variance / static_cast<double>(shots));

  for (size_t c = 0; c < cuts.size(); ++c) {
    const Qpd& q = *cuts[c].qpd;
    r.kappaTotal *= q.kappa;
    r.samplingOverhead *= q.kappa * q.kappa * q.varianceFactor;
    TermTally tally;
    tally.gateIndices = cuts[c].gateIndices;
    tally.counts.assign(q.terms.size(), 0);
    for (size_t t = 0; t < q.terms.size(); ++t) {
      tally.labels.push_back(q.terms[t].label);
      for (const auto& wt : tallies) tally.counts[t] += wt[c][t];
    }
    r.termTallies.push_back(std::move(tally));
  }
  for (int g : nonlocal_gates(circuit)) {
    const GateSlot gs = schedule.gateSlots[g];
    const Qpd& q = *schedule.cuts[gs.cut].qpd;
    r.costPerGate.push_back(q.asymptoticCostPerSlot.empty() ? q.kappa * q.kappa
                                                            : q.asymptoticCostPerSlot[gs.slot]);
  }
  return r;
}

EstimateResult estimate(const CircuitIR& circuit, const CutPlan& plan, long shots, std::uint64_t seed, int workers,
                        const AtomSet& atoms) {
  return estimate(circuit, plan, build_cuts(circuit, plan, atoms), shots, seed, workers);
}

VarianceReport variance_report(const EstimateResult& result, double observableBound) {
  VarianceReport v;
  v.empiricalVariance = result.variance;
  v.ceiling = result.samplingOverhead * observableBound * observableBound;
  v.ratio = v.ceiling > 0 ? v.empiricalVariance / v.ceiling : 0.0;
  v.exceeded = v.empiricalVariance > v.ceiling;
  return v;
}

double exact_expectation(const CircuitIR& circuit) {
  validate_circuit(circuit);
  SimState state = make_state(circuit.numQubits);
  for (const GateSpec& g : circuit.gates) apply_gate(state, g);
  return pauli_expectation(state.amplitudes, circuit.observable);
}

std::string estimate_to_json(const EstimateResult& r) {
  nlohmann::ordered_json j;
  j["mean"] = r.mean;
  j["stderr"] = r.standardError;
  j["variance"] = r.variance;
  j["shots"] = r.shots;
  j["seed"] = r.seed;
  j["setting"] = to_string(r.setting);
  j["kappaTotal"] = r.kappaTotal;
  j["samplingOverhead"] = r.samplingOverhead;
  j["costPerGate"] = r.costPerGate;
  j["termTallies"] = nlohmann::ordered_json::array();
  for (const TermTally& t : r.termTallies) {
    nlohmann::ordered_json jt;
    jt["gates"] = t.gateIndices;
    jt["counts"] = nlohmann::ordered_json::object();
    for (size_t i = 0; i < t.labels.size(); ++i) jt["counts"][t.labels[i]] = t.counts[i];
    j["termTallies"].push_back(jt);
  }
  return j.dump(2) + "\n";
}

}  // namespace knit
