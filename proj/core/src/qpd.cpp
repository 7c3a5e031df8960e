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

#include "knit/qpd.hpp"

#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>
#include "knit/circuit.hpp"
#include "knit/error.hpp"
#include "knit/gamma.hpp"
#include "knit/kak.hpp"
#include "knit/lp.hpp"
#include "knit/statevector.hpp"

namespace knit {

namespace {

using OrderedJson = nlohmann::ordered_json;

TwoPartyProtocol pair_protocol(const LocalOp& a, const LocalOp& b) {
  TwoPartyProtocol p;
  p.setting = Setting::LO;
  p.qubitParty = {Party::A, Party::B};
  p.instrA.steps = relocate(a.steps, 0, "mA");
  p.instrB.steps = relocate(b.steps, 1, "mB");
  return p;
}

RMatrix replacement_ptm(const CVector& psi) {
  int n = 0;
  while ((1L << n) < psi.size()) ++n;
  const long count = 1L << (2 * n);
  RMatrix r = RMatrix::Zero(count, count);
  for (long i = 0; i < count; ++i) {
    r(i, 0) = psi.dot(pauli_string(static_cast<int>(i), n) * psi).real();
  }
  return r;
}

struct VidalTerm {
  double coefficient = 0;
  std::string label;
  int sharedPhases = 0;
  PrepareStep prepA;
  PrepareStep prepB;
};

/// rho+ (weight 1 + E) as one random-phase product term, rho- (weight E) split into its product terms.
std::vector<VidalTerm> vidal_terms(const SchmidtData& s, const std::vector<int>& qubitsA,
                                   const std::vector<int>& qubitsB) {
  const int r = static_cast<int>(s.coefficients.size());
  const double sum = s.coefficients.sum();
  const double e = sum * sum - 1.0;
  std::vector<VidalTerm> out;

  VidalTerm plus;
  plus.coefficient = 1.0 + e;
  plus.label = r == 1 ? "product" : "rho+";
  plus.sharedPhases = r == 1 ? 0 : r;
  plus.prepA.qubits = qubitsA;
  plus.prepB.qubits = qubitsB;
  plus.prepB.phaseSign = -1;
  for (int k = 0; k < r; ++k) {
    const double amp = std::sqrt(s.coefficients(k));
    plus.prepA.components.push_back(s.basisA.col(k));
    plus.prepA.amplitudes.push_back(amp);
    plus.prepB.components.push_back(s.basisB.col(k));
    plus.prepB.amplitudes.push_back(amp);
  }
  if (r == 1) plus.coefficient = 1.0;
  out.push_back(std::move(plus));

  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      VidalTerm minus;
      minus.coefficient = -s.coefficients(i) * s.coefficients(j);
      minus.label = "rho-(" + std::to_string(i) + "," + std::to_string(j) + ")";
      minus.prepA = PrepareStep{qubitsA, {s.basisA.col(i)}, {1.0}, 1};
      minus.prepB = PrepareStep{qubitsB, {s.basisB.col(j)}, {1.0}, 1};
      out.push_back(std::move(minus));
    }
  }
  return out;
}

double kappa_of(const std::vector<QpdTerm>& terms) {
  double k = 0;
  for (const auto& t : terms) k += std::abs(t.coefficient);
  return k;
}

std::vector<Step> remap_steps(const std::vector<Step>& steps, const std::vector<int>& qubitMap,
                              const std::string& suffix) {
  auto q = [&](int x) { return qubitMap.at(x); };
  auto b = [&](const std::string& s) { return s + suffix; };
  std::vector<Step> out;
  for (const Step& step : steps) {
    Step s = step;
    std::visit(
        [&](auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, MeasureStep>) {
            v.qubit = q(v.qubit);
            v.bit = b(v.bit);
          } else if constexpr (std::is_same_v<T, UnitaryStep> || std::is_same_v<T, PrepareStep>) {
            for (int& x : v.qubits) x = q(x);
          } else if constexpr (std::is_same_v<T, ConditionalStep>) {
            for (int& x : v.qubits) x = q(x);
            for (auto& k : v.keys) k = b(k);
          } else if constexpr (std::is_same_v<T, SignStep>) {
            for (auto& k : v.keys) k = b(k);
          } else if constexpr (std::is_same_v<T, PostselectStep>) {
            v.bit = b(v.bit);
          }
        },
        s);
    out.push_back(std::move(s));
  }
  return out;
}


TeleportGadget bell_cnot_gadget() {
  TeleportGadget g;
  g.shape = TeleportShape::BELL_CNOT;
  TwoPartyProtocol& p = g.protocol;
  p.setting = Setting::LOCC;
  p.qubitParty = {Party::A, Party::B, Party::A, Party::B};
  const CMatrix cnot = gate_matrix(GateName::CNOT);
  const CMatrix h = gate_matrix(GateName::H);
  const std::vector<CMatrix> flipX{identity(2), pauli(1)};
  const std::vector<CMatrix> flipZ{identity(2), pauli(3)};
  p.instrA.steps = {UnitaryStep{{0, 2}, cnot}, MeasureStep{2, 'Z', "ma"}, ConditionalStep{{"ma"}, flipX, {2}},
                    ConditionalStep{{"mb"}, flipZ, {0}}};
  p.instrB.steps = {ConditionalStep{{"ma"}, flipX, {3}}, UnitaryStep{{3, 1}, cnot}, UnitaryStep{{3}, h},
                    MeasureStep{3, 'Z', "mb"}, ConditionalStep{{"mb"}, flipX, {3}}};
  p.messages = {Message{Party::A, {"ma"}}, Message{Party::B, {"mb"}}};
  g.ancillasA = {2};
  g.ancillasB = {3};
  g.resourceCoefficients = CMatrix::Identity(2, 2) / std::sqrt(2.0);
  return g;
}

TeleportGadget choi_gadget(const CMatrix& u) {
  const Tableau tab = Tableau::from_unitary(u);
  TeleportGadget g;
  g.shape = TeleportShape::CHOI;
  TwoPartyProtocol& p = g.protocol;
  p.setting = Setting::LOCC;
  // 0 = A workload, 1 = B workload, 2 = A, 3 = A', 4 = B, 5 = B'
  p.qubitParty = {Party::A, Party::B, Party::A, Party::A, Party::B, Party::B};
  const CMatrix cnot = gate_matrix(GateName::CNOT);
  const CMatrix h = gate_matrix(GateName::H);
  const CMatrix swap = gate_matrix(GateName::SWAP);
  const std::vector<CMatrix> flipX{identity(2), pauli(1)};

  // Bits (a0, a1, b0, b1): the teleported input carries X^a1 Z^a0 (x) X^b1 Z^b0 before u.
  std::vector<CMatrix> tableA;
  std::vector<CMatrix> tableB;
  for (int idx = 0; idx < 16; ++idx) {
    const int a0 = (idx >> 3) & 1, a1 = (idx >> 2) & 1, b0 = (idx >> 1) & 1, b1 = idx & 1;
    const PauliString err = PauliString{0, "II"};
    PauliString e = err;
    const PauliString xa{0, "XI"}, za{0, "ZI"}, xb{0, "IX"}, zb{0, "IZ"};
    if (a1) e = e * xa;
    if (a0) e = e * za;
    if (b1) e = e * xb;
    if (b0) e = e * zb;
    const PauliString corr = tab.conjugate(e);
    tableA.push_back(pauli_string(std::string(1, corr.letters[0])));
    tableB.push_back(pauli_string(std::string(1, corr.letters[1])));
  }
  const std::vector<std::string> keys{"a0", "a1", "b0", "b1"};
  p.instrA.steps = {UnitaryStep{{0, 3}, cnot},       UnitaryStep{{0}, h},
                    MeasureStep{0, 'Z', "a0"},        MeasureStep{3, 'Z', "a1"},
                    ConditionalStep{keys, tableA, {2}}, UnitaryStep{{0, 2}, swap},
                    ConditionalStep{{"a0"}, flipX, {2}}, ConditionalStep{{"a1"}, flipX, {3}}};
  p.instrB.steps = {UnitaryStep{{1, 5}, cnot},       UnitaryStep{{1}, h},
                    MeasureStep{1, 'Z', "b0"},        MeasureStep{5, 'Z', "b1"},
                    ConditionalStep{keys, tableB, {4}}, UnitaryStep{{1, 4}, swap},
                    ConditionalStep{{"b0"}, flipX, {4}}, ConditionalStep{{"b1"}, flipX, {5}}};
  p.messages = {Message{Party::A, {"a0", "a1"}}, Message{Party::B, {"b0", "b1"}}};
  g.ancillasA = {2, 3};
  g.ancillasB = {4, 5};
  g.resourceCoefficients = choi_coefficients(u, 2, 2);
  return g;
}

void write_matrix(OrderedJson& out, const CMatrix& m) {
  out = OrderedJson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
}

OrderedJson step_json(const Step& step) {
  OrderedJson j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UnitaryStep>) {
          j["kind"] = "unitary";
          j["qubits"] = v.qubits;
          write_matrix(j["matrix"], v.u);
        } else if constexpr (std::is_same_v<T, MeasureStep>) {
          j["kind"] = "measure";
          j["qubit"] = v.qubit;
          j["basis"] = std::string(1, v.basis);
          j["bit"] = v.bit;
        } else if constexpr (std::is_same_v<T, ConditionalStep>) {
          j["kind"] = "conditional";
          j["keys"] = v.keys;
          j["qubits"] = v.qubits;
          j["table"] = OrderedJson::array();
          for (const auto& m : v.table) {
            OrderedJson jm;
            write_matrix(jm, m);
            j["table"].push_back(jm);
          }
        } else if constexpr (std::is_same_v<T, SignStep>) {
          j["kind"] = "sign";
          j["keys"] = v.keys;
          j["scale"] = v.scale;
        } else if constexpr (std::is_same_v<T, PostselectStep>) {
          j["kind"] = "postselect";
          j["bit"] = v.bit;
          j["value"] = v.value;
          j["scale"] = v.scale;
        } else if constexpr (std::is_same_v<T, PrepareStep>) {
          j["kind"] = "prepare";
          j["qubits"] = v.qubits;
          j["phaseSign"] = v.phaseSign;
          j["amplitudes"] = v.amplitudes;
          j["components"] = OrderedJson::array();
          for (const auto& c : v.components) {
            OrderedJson jc = OrderedJson::array();
            for (Eigen::Index k = 0; k < c.size(); ++k) jc.push_back({c(k).real(), c(k).imag()});
            j["components"].push_back(jc);
          }
        }
      },
      step);
  return j;
}

OrderedJson instrument_json(const LocalInstrument& instr) {
  OrderedJson j;
  j["party"] = to_string(instr.party);
  j["steps"] = OrderedJson::array();
  for (const Step& s : instr.steps) j["steps"].push_back(step_json(s));
  return j;
}

}  // namespace

bool is_cnot(const CMatrix& u, double tol) {
  if (u.rows() != 4 || u.cols() != 4) return false;
  const CMatrix cnot = gate_matrix(GateName::CNOT);
  const Complex overlap = (cnot.adjoint() * u).trace() / 4.0;
  if (std::abs(std::abs(overlap) - 1.0) > tol) return false;
  return (u - overlap * cnot).cwiseAbs().maxCoeff() <= tol * 10;
}

Qpd solve_min_l1(const RMatrix& targetPtm, const AtomSet& atoms, const std::string& target) {
  const long rows = targetPtm.size();
  if (targetPtm.rows() != 16 || targetPtm.cols() != 16) {
    throw InputError("solve_min_l1: expected a two-qubit (16x16) target PTM");
  }
  const long n = static_cast<long>(atoms.size());
  RMatrix a(rows, 2 * n);
  for (long k = 0; k < n; ++k) {
    const RMatrix p = atoms.atom_ptm(static_cast<size_t>(k));
    const Eigen::Map<const RVector> col(p.data(), rows);
    a.col(k) = col;
    a.col(n + k) = -col;
  }
  const Eigen::Map<const RVector> b(targetPtm.data(), rows);
  const RVector c = RVector::Ones(2 * n);
  const LpResult lp = solve_lp(a, b, c);
  if (lp.status == LpStatus::INFEASIBLE) {
    throw UnsupportedError("solve_min_l1: atom set '" + atoms.name + "' does not span the target");
  }
  if (lp.status != LpStatus::OPTIMAL || lp.residual > 1e-7) {
    throw NumericalError("solve_min_l1: LP failed (" + to_string(lp.status) +
                         ", residual " + std::to_string(lp.residual) + ")");
  }
  Qpd q;
  q.target = target;
  q.setting = Setting::LO;
  q.slots = 1;
  q.numActing = 2;
  q.registerParty = {Party::A, Party::B};
  q.targetPtm = targetPtm;
  for (long k = 0; k < n; ++k) {
    const double coeff = lp.x(k) - lp.x(n + k);
    if (std::abs(coeff) <= 1e-12) continue;
    const auto& [i, j] = atoms.pairs[static_cast<size_t>(k)];
    q.terms.push_back(QpdTerm{coeff, atoms.label(static_cast<size_t>(k)),
                              {pair_protocol(atoms.opsA[i], atoms.opsB[j])}});
  }
  q.kappa = kappa_of(q.terms);
  q.asymptoticCostPerSlot = {q.kappa * q.kappa};
  return q;
}

Qpd lo_gate_qpd(const CMatrix& u, const AtomSet& atoms, const std::string& target) {
  const KakParams k = kak(u);
  const AtomSet frame = dressed_atom_set(atoms, k.a1, k.a2, k.b1, k.b2);
  const CMatrix canonical = canonical_gate(k.thetaX, k.thetaY, k.thetaZ);
  Qpd q = solve_min_l1(unitary_ptm(canonical), atoms, target);
  // Re-express the canonical solution with the dressed ops of the same atoms.
  std::map<std::string, size_t> index;
  for (size_t a = 0; a < atoms.size(); ++a) index.emplace(atoms.label(a), a);
  for (QpdTerm& t : q.terms) {
    const auto& [i, j] = frame.pairs[index.at(t.label)];
    t.segments = {pair_protocol(frame.opsA[i], frame.opsB[j])};
  }
  q.targetPtm = unitary_ptm(u);
  return q;
}

Qpd vidal_state_qpd(const CVector& psi, int qubitsA, int qubitsB) {
  if (qubitsA < 1 || qubitsB < 1) throw InputError("vidal_state_qpd: both parties need qubits");
  if (qubitsA + qubitsB > kMaxQubits) throw CapacityError("vidal_state_qpd: register too large");
  const SchmidtData s = schmidt_decompose(psi, 1 << qubitsA, 1 << qubitsB);
  if (s.coefficients.size() > 16) throw CapacityError("vidal_state_qpd: Schmidt rank above 16");
  std::vector<int> qa;
  std::vector<int> qb;
  Qpd q;
  q.target = "state";
  q.setting = Setting::LO;
  q.slots = 0;
  q.numActing = qubitsA + qubitsB;
  for (int k = 0; k < qubitsA; ++k) {
    qa.push_back(k);
    q.registerParty.push_back(Party::A);
  }
  for (int k = 0; k < qubitsB; ++k) {
    qb.push_back(qubitsA + k);
    q.registerParty.push_back(Party::B);
  }
  for (VidalTerm& v : vidal_terms(s, qa, qb)) {
    TwoPartyProtocol p;
    p.setting = Setting::LO;
    p.qubitParty = q.registerParty;
    p.sharedPhases = v.sharedPhases;
    p.instrA.steps = {v.prepA};
    p.instrB.steps = {v.prepB};
    q.terms.push_back(QpdTerm{v.coefficient, v.label, {p}});
  }
  q.kappa = kappa_of(q.terms);
  q.targetPtm = replacement_ptm(psi);
  return q;
}

CVector TeleportGadget::resource_state() const {
  CVector v(resourceCoefficients.size());
  for (Eigen::Index r = 0; r < resourceCoefficients.rows(); ++r)
    for (Eigen::Index c = 0; c < resourceCoefficients.cols(); ++c)
      v(r * resourceCoefficients.cols() + c) = resourceCoefficients(r, c);
  return v;
}

TeleportGadget teleport_protocol(const CMatrix& u, TeleportShape shape) {
  if (u.rows() != 4 || u.cols() != 4 || !is_unitary(u, 1e-9)) {
    throw InputError("teleport_protocol: expected a 4x4 unitary");
  }
  if (!is_clifford(u)) {
    throw InputError("teleport_protocol: gate is not Clifford; corrections would be nonlocal");
  }
  if (shape == TeleportShape::AUTO) shape = is_cnot(u) ? TeleportShape::BELL_CNOT : TeleportShape::CHOI;
  if (shape == TeleportShape::BELL_CNOT) {
    if (!is_cnot(u)) throw InputError("teleport_protocol: the Bell-pair shape only realizes CNOT");
    return bell_cnot_gadget();
  }
  return choi_gadget(u);
}

Qpd factory_qpd(const std::vector<CMatrix>& gates, TeleportShape shape) {
  if (gates.empty()) throw InputError("factory_qpd: k must be at least 1");
  const int k = static_cast<int>(gates.size());
  std::vector<TeleportGadget> gadgets;
  for (const CMatrix& u : gates) gadgets.push_back(teleport_protocol(u, shape));

  Qpd q;
  q.setting = Setting::LOCC;
  q.slots = k;
  q.numActing = 2 * k;
  for (int s = 0; s < k; ++s) {
    q.registerParty.push_back(Party::A);
    q.registerParty.push_back(Party::B);
  }
  std::vector<std::vector<int>> qubitMaps;
  std::vector<int> resA;
  std::vector<int> resB;
  CMatrix joint = CMatrix::Identity(1, 1);
  for (int s = 0; s < k; ++s) {
    const TeleportGadget& g = gadgets[s];
    std::vector<int> map(g.protocol.qubitParty.size());
    map[0] = 2 * s;
    map[1] = 2 * s + 1;
    for (size_t x = 2; x < map.size(); ++x) {
      map[x] = static_cast<int>(q.registerParty.size());
      q.registerParty.push_back(g.protocol.qubitParty[x]);
    }
    for (int x : g.ancillasA) resA.push_back(map[x]);
    for (int x : g.ancillasB) resB.push_back(map[x]);
    joint = kron(joint, g.resourceCoefficients);
    qubitMaps.push_back(std::move(map));
    const double sum = choi_schmidt(gates[s], 2, 2).sum();
    q.asymptoticCostPerSlot.push_back(std::pow(sum, 4));
  }
  if (static_cast<int>(q.registerParty.size()) > kMaxQubits) {
    throw CapacityError("factory_qpd: " + std::to_string(q.registerParty.size()) +
                        " register qubits exceed the simulator capacity");
  }
  CVector psi(joint.size());
  for (Eigen::Index r = 0; r < joint.rows(); ++r)
    for (Eigen::Index c = 0; c < joint.cols(); ++c) psi(r * joint.cols() + c) = joint(r, c);
  const SchmidtData schmidt = schmidt_decompose(psi, static_cast<int>(joint.rows()), static_cast<int>(joint.cols()));

  CMatrix target = CMatrix::Identity(1, 1);
  for (const CMatrix& u : gates) target = kron(target, u);
  q.targetPtm = unitary_ptm(target);
  q.target = "factory(" + std::to_string(k) + ")";

  for (VidalTerm& v : vidal_terms(schmidt, resA, resB)) {
    QpdTerm term;
    term.coefficient = v.coefficient;
    term.label = v.label;
    for (int s = 0; s < k; ++s) {
      const TwoPartyProtocol& g = gadgets[s].protocol;
      const std::string suffix = "_" + std::to_string(s);
      TwoPartyProtocol p;
      p.setting = Setting::LOCC;
      p.qubitParty = q.registerParty;
      if (s == 0) {
        p.sharedPhases = v.sharedPhases;
        p.instrA.steps.push_back(v.prepA);
        p.instrB.steps.push_back(v.prepB);
      }
      for (const Step& st : remap_steps(g.instrA.steps, qubitMaps[s], suffix)) p.instrA.steps.push_back(st);
      for (const Step& st : remap_steps(g.instrB.steps, qubitMaps[s], suffix)) p.instrB.steps.push_back(st);
      for (const Message& m : g.messages) {
        Message mm{m.from, {}};
        for (const auto& bit : m.bits) mm.bits.push_back(bit + suffix);
        p.messages.push_back(mm);
      }
      term.segments.push_back(std::move(p));
    }
    q.terms.push_back(std::move(term));
  }
  q.kappa = kappa_of(q.terms);
  return q;
}

Qpd factory_qpd(const CMatrix& u, int k, TeleportShape shape) {
  if (k < 1) throw InputError("factory_qpd: k must be at least 1");
  return factory_qpd(std::vector<CMatrix>(k, u), shape);
}

Qpd oneway_variant(const Qpd& q) {
  Qpd out = q;
  if (q.setting == Setting::LO) return out;
  out.setting = Setting::LO_ONEWAY_CC;
  double variance = 1.0;
  std::vector<int> postselectedPerSlot(std::max(q.slots, 1), 0);
  for (size_t t = 0; t < out.terms.size(); ++t) {
    double termVariance = 1.0;
    for (size_t s = 0; s < out.terms[t].segments.size(); ++s) {
      TwoPartyProtocol& p = out.terms[t].segments[s];
      std::set<std::string> removed;
      std::vector<Message> kept;
      for (const Message& m : p.messages) {
        if (m.from == Party::B) {
          removed.insert(m.bits.begin(), m.bits.end());
        } else {
          kept.push_back(m);
        }
      }
      p.messages = kept;
      p.setting = Setting::LO_ONEWAY_CC;
      if (removed.empty()) continue;
      std::vector<Step> stepsB;
      for (const Step& st : p.instrB.steps) {
        stepsB.push_back(st);
        if (const auto* m = std::get_if<MeasureStep>(&st); m && removed.count(m->bit)) {
          stepsB.push_back(PostselectStep{m->bit, 0, 2.0});
          termVariance *= 2.0;
          if (t == 0) ++postselectedPerSlot[s];
        }
      }
      p.instrB.steps = std::move(stepsB);
      std::vector<Step> stepsA;
      for (const Step& st : p.instrA.steps) {
        if (const auto* c = std::get_if<ConditionalStep>(&st)) {
          ConditionalStep reduced;
          reduced.qubits = c->qubits;
          std::vector<int> keepKeys;
          for (size_t k = 0; k < c->keys.size(); ++k) {
            if (removed.count(c->keys[k]) == 0) keepKeys.push_back(static_cast<int>(k));
          }
          if (keepKeys.size() == c->keys.size()) {
            stepsA.push_back(st);
            continue;
          }
          const size_t nk = c->keys.size();
          for (int k : keepKeys) reduced.keys.push_back(c->keys[k]);
          for (size_t idx = 0; idx < (size_t{1} << keepKeys.size()); ++idx) {
            size_t full = 0;
            for (size_t r = 0; r < keepKeys.size(); ++r) {
              if ((idx >> (keepKeys.size() - 1 - r)) & 1) full |= size_t{1} << (nk - 1 - keepKeys[r]);
            }
            reduced.table.push_back(c->table[full]);
          }
          if (reduced.keys.empty()) {
            if ((reduced.table[0] - identity(static_cast<int>(reduced.table[0].rows()))).cwiseAbs().maxCoeff() > 1e-12) {
              stepsA.push_back(UnitaryStep{reduced.qubits, reduced.table[0]});
            }
          } else {
            stepsA.push_back(reduced);
          }
          continue;
        }
        if (const auto* sg = std::get_if<SignStep>(&st)) {
          for (const auto& key : sg->keys) {
            if (removed.count(key)) throw InputError("oneway_variant: a sign rule depends on a message from B");
          }
        }
        if (const auto* ps = std::get_if<PostselectStep>(&st); ps && removed.count(ps->bit)) {
          throw InputError("oneway_variant: A postselects on a bit from B");
        }
        stepsA.push_back(st);
      }
      p.instrA.steps = std::move(stepsA);
      linearize(p);
    }
    if (t == 0) variance = termVariance;
  }
  out.varianceFactor = q.varianceFactor * variance;
  for (size_t s = 0; s < out.asymptoticCostPerSlot.size() && s < postselectedPerSlot.size(); ++s) {
    out.asymptoticCostPerSlot[s] *= std::pow(2.0, postselectedPerSlot[s]);
  }
  return out;
}

RMatrix qpd_ptm(const Qpd& q) {
  RMatrix total = RMatrix::Zero(q.targetPtm.rows(), q.targetPtm.cols());
  for (const QpdTerm& t : q.terms) total += t.coefficient * protocol_ptm(t.segments, q.numActing);
  return total;
}

double qpd_identity_error(const Qpd& q) { return (qpd_ptm(q) - q.targetPtm).cwiseAbs().maxCoeff(); }

std::string qpd_to_json(const Qpd& q) {
  OrderedJson j;
  j["target"] = q.target;
  j["setting"] = to_string(q.setting);
  j["kappa"] = q.kappa;
  j["slots"] = q.slots;
  j["numActing"] = q.numActing;
  j["register"] = OrderedJson::array();
  for (Party p : q.registerParty) j["register"].push_back(to_string(p));
  j["varianceFactor"] = q.varianceFactor;
  j["asymptoticCostPerSlot"] = q.asymptoticCostPerSlot;
  j["terms"] = OrderedJson::array();
  for (const QpdTerm& t : q.terms) {
    OrderedJson jt;
    jt["coefficient"] = t.coefficient;
    jt["label"] = t.label;
    jt["segments"] = OrderedJson::array();
    for (const TwoPartyProtocol& p : t.segments) {
      OrderedJson js;
      js["setting"] = to_string(p.setting);
      js["sharedPhases"] = p.sharedPhases;
      js["instrA"] = instrument_json(p.instrA);
      js["instrB"] = instrument_json(p.instrB);
      js["messages"] = OrderedJson::array();
      for (const Message& m : p.messages) {
        OrderedJson jm;
        jm["from"] = to_string(m.from);
        jm["bits"] = m.bits;
        js["messages"].push_back(jm);
      }
      jt["segments"].push_back(js);
    }
    j["terms"].push_back(jt);
  }
  return j.dump(2) + "\n";
}

}  // namespace knit
