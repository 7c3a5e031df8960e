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

#include "knit/statevector.hpp"

#include <cmath>

#include "knit/error.hpp"

namespace knit {

namespace {

CMatrix measurement_projector(char basis, int outcome) {
  int axis = 0;
  switch (basis) {
    case 'X': axis = 1; break;
    case 'Y': axis = 2; break;
    case 'Z': axis = 3; break;
    default: throw InputError(std::string("invalid measurement basis '") + basis + "'");
  }
  return 0.5 * (identity(2) + (outcome == 0 ? 1.0 : -1.0) * pauli(axis));
}

CMatrix preparation_unitary(const CVector& target) {
  const long dim = target.size();
  const double mag = std::abs(target(0));
  const Complex phase = mag > 1e-15 ? target(0) / mag : Complex(1, 0);
  CVector y = target / phase;
  CVector w = -y;
  w(0) += 1.0;
  const double wn = w.squaredNorm();
  CMatrix h = CMatrix::Identity(dim, dim);
  if (wn > 1e-30) h -= (2.0 / wn) * w * w.adjoint();
  return phase * h;
}

CVector prepared_vector(const PrepareStep& step, const std::vector<double>& phases) {
  CVector v = CVector::Zero(step.components.front().size());
  for (size_t k = 0; k < step.components.size(); ++k) {
    Complex coeff = step.amplitudes[k];
    if (step.components.size() > 1) coeff *= std::polar(1.0, step.phaseSign * phases.at(k));
    v += coeff * step.components[k];
  }
  const double n = v.norm();
  if (n < 1e-14) throw NumericalError("prepare step produced a zero vector");
  return v / n;
}

long table_index(const ConditionalStep& step, const std::map<std::string, int>& bits) {
  long idx = 0;
  for (const auto& k : step.keys) idx = (idx << 1) | bits.at(k);
  return idx;
}

int key_parity(const std::vector<std::string>& keys, const std::map<std::string, int>& bits) {
  int parity = 0;
  for (const auto& k : keys) parity ^= bits.at(k);
  return parity;
}

std::vector<int> bind_qubits(const std::vector<int>& qubits, const std::vector<int>& binding) {
  std::vector<int> out;
  out.reserve(qubits.size());
  for (int q : qubits) {
    if (q < 0 || q >= static_cast<int>(binding.size()) || binding[q] < 0) {
      throw InputError("protocol qubit " + std::to_string(q) + " is not bound to a state qubit");
    }
    out.push_back(binding[q]);
  }
  return out;
}

/// Moves the amplitude block with `qubits` == config onto `qubits` == 0 and zeroes the rest.
void reset_from(CVector& amps, const std::vector<int>& qubits, long config) {
  long mask = 0;
  long value = 0;
  const int k = static_cast<int>(qubits.size());
  for (int j = 0; j < k; ++j) {
    mask |= 1L << qubits[j];
    if ((config >> (k - 1 - j)) & 1) value |= 1L << qubits[j];
  }
  CVector out = CVector::Zero(amps.size());
  for (long i = 0; i < amps.size(); ++i) {
    if ((i & mask) == 0) out(i) = amps(i | value);
  }
  amps.swap(out);
}

const Step& step_at(const TwoPartyProtocol& p, const ScheduledOp& op) {
  const LocalInstrument& instr = op.party == Party::A ? p.instrA : p.instrB;
  return instr.steps.at(op.index);
}

}  // namespace

SimState make_state(int numQubits) {
  if (numQubits < 0) throw InputError("negative qubit count");
  if (numQubits > kMaxQubits) {
    throw CapacityError("simulator capacity is " + std::to_string(kMaxQubits) + " qubits, requested " +
                        std::to_string(numQubits));
  }
  SimState s;
  s.numQubits = numQubits;
  s.amplitudes = CVector::Zero(1L << numQubits);
  s.amplitudes(0) = 1.0;
  return s;
}

void apply_matrix(CVector& amps, const CMatrix& m, const std::vector<int>& qubits) {
  const int k = static_cast<int>(qubits.size());
  const long local = 1L << k;
  if (m.rows() != local || m.cols() != local) throw InputError("apply_matrix: size mismatch");
  std::vector<long> offset(local, 0);
  long mask = 0;
  for (long x = 0; x < local; ++x) {
    for (int j = 0; j < k; ++j) {
      if ((x >> (k - 1 - j)) & 1) offset[x] |= 1L << qubits[j];
    }
  }
  for (int q : qubits) mask |= 1L << q;
  std::vector<Complex> in(local);
  for (long base = 0; base < amps.size(); ++base) {
    if (base & mask) continue;
    for (long x = 0; x < local; ++x) in[x] = amps(base | offset[x]);
    for (long r = 0; r < local; ++r) {
      Complex acc = 0;
      for (long c = 0; c < local; ++c) acc += m(r, c) * in[c];
      amps(base | offset[r]) = acc;
    }
  }
}

void apply_gate(SimState& state, const GateSpec& gate) {
  for (int q : gate.qubits) {
    if (q < 0 || q >= state.numQubits) throw InputError("gate qubit out of range");
  }
  apply_matrix(state.amplitudes, gate_matrix(gate), gate.qubits);
}

double pauli_expectation(const CVector& amps, const std::string& obs) {
  long xmask = 0;
  long zmask = 0;
  int ycount = 0;
  for (size_t q = 0; q < obs.size(); ++q) {
    switch (obs[q]) {
      case 'I': break;
      case 'X': xmask |= 1L << q; break;
      case 'Y': xmask |= 1L << q; zmask |= 1L << q; ++ycount; break;
      case 'Z': zmask |= 1L << q; break;
      default: throw InputError(std::string("invalid Pauli letter '") + obs[q] + "'");
    }
  }
  if (amps.size() < (1L << obs.size())) throw InputError("observable longer than the register");
  // Y = i X Z on each qubit.
  Complex global(1, 0);
  for (int y = 0; y < ycount; ++y) global *= Complex(0, 1);
  Complex acc = 0;
  for (long i = 0; i < amps.size(); ++i) {
    const double sign = (__builtin_popcountl(i & zmask) & 1) ? -1.0 : 1.0;
    acc += std::conj(amps(i ^ xmask)) * sign * amps(i);
  }
  const double norm = amps.squaredNorm();
  if (norm <= 0) throw NumericalError("expectation of a zero state");
  return (global * acc).real() / norm;
}

double expectation(const SimState& state, const std::string& observable) {
  return state.accumulatedWeight * pauli_expectation(state.amplitudes, observable);
}

void execute_protocol(SimState& state, const TwoPartyProtocol& protocol, const std::vector<int>& binding,
                      RandomStream& rng) {
  const std::vector<ScheduledOp> order = linearize(protocol);
  std::vector<double> phases(protocol.sharedPhases);
  for (double& phi : phases) phi = 2.0 * kPi * rng.uniform();

  auto measure = [&](int qubit, char basis) {
    const CMatrix p0 = measurement_projector(basis, 0);
    CVector projected = state.amplitudes;
    apply_matrix(projected, p0, {qubit});
    const double total = state.amplitudes.squaredNorm();
    const double prob0 = projected.squaredNorm() / total;
    const int outcome = rng.uniform() < prob0 ? 0 : 1;
    if (outcome == 1) {
      projected = state.amplitudes;
      apply_matrix(projected, measurement_projector(basis, 1), {qubit});
    }
    projected /= projected.norm();
    state.amplitudes.swap(projected);
    return outcome;
  };

  for (const ScheduledOp& op : order) {
    if (op.kind == ScheduledOp::DELIVER) continue;
    const Step& step = step_at(protocol, op);
    if (const auto* u = std::get_if<UnitaryStep>(&step)) {
      apply_matrix(state.amplitudes, u->u, bind_qubits(u->qubits, binding));
    } else if (const auto* m = std::get_if<MeasureStep>(&step)) {
      state.classicalBits[m->bit] = measure(bind_qubits({m->qubit}, binding)[0], m->basis);
    } else if (const auto* c = std::get_if<ConditionalStep>(&step)) {
      apply_matrix(state.amplitudes, c->table.at(table_index(*c, state.classicalBits)), bind_qubits(c->qubits, binding));
    } else if (const auto* s = std::get_if<SignStep>(&step)) {
      state.accumulatedWeight *= s->scale * (key_parity(s->keys, state.classicalBits) ? -1.0 : 1.0);
    } else if (const auto* ps = std::get_if<PostselectStep>(&step)) {
      state.accumulatedWeight *= state.classicalBits.at(ps->bit) == ps->value ? ps->scale : 0.0;
    } else if (const auto* pr = std::get_if<PrepareStep>(&step)) {
      const std::vector<int> qubits = bind_qubits(pr->qubits, binding);
      for (int q : qubits) {
        if (measure(q, 'Z') == 1) apply_matrix(state.amplitudes, pauli(1), {q});
      }
      apply_matrix(state.amplitudes, preparation_unitary(prepared_vector(*pr, phases)), qubits);
    }
  }
}

namespace {

struct Enumerator {
  const std::vector<TwoPartyProtocol>& segments;
  std::vector<std::vector<ScheduledOp>> orders;
  std::vector<int> binding;
  int numActing;
  long dim;
  std::vector<long> reversed;
  CMatrix superop;
  long leaves = 0;

  struct Branch {
    std::vector<CVector> columns;
    std::map<std::string, int> bits;
    double weight = 1.0;
    std::vector<double> phases;
  };

  void run(Branch b, size_t seg, size_t pos) {
    if (b.weight == 0.0) return;
    while (seg < segments.size()) {
      const TwoPartyProtocol& p = segments[seg];
      if (pos == 0 && p.sharedPhases > 0) {
        // phi_0 = 0; the others range over {0, 2pi/3, 4pi/3}.
        long count = 1;
        for (int k = 1; k < p.sharedPhases; ++k) count *= 3;
        for (long g = 0; g < count; ++g) {
          Branch child = b;
          child.phases.assign(p.sharedPhases, 0.0);
          long rest = g;
          for (int k = 1; k < p.sharedPhases; ++k) {
            child.phases[k] = 2.0 * kPi * static_cast<double>(rest % 3) / 3.0;
            rest /= 3;
          }
          child.weight /= static_cast<double>(count);
          run_ops(std::move(child), seg, 0);
        }
        return;
      }
      run_ops(std::move(b), seg, pos);
      return;
    }
    finish(b);
  }

  void run_ops(Branch b, size_t seg, size_t pos) {
    const TwoPartyProtocol& p = segments[seg];
    const auto& order = orders[seg];
    for (; pos < order.size(); ++pos) {
      const ScheduledOp& op = order[pos];
      if (op.kind == ScheduledOp::DELIVER) continue;
      const Step& step = step_at(p, op);
      if (const auto* u = std::get_if<UnitaryStep>(&step)) {
        const auto q = bind_qubits(u->qubits, binding);
        for (auto& col : b.columns) apply_matrix(col, u->u, q);
      } else if (const auto* m = std::get_if<MeasureStep>(&step)) {
        const int q = bind_qubits({m->qubit}, binding)[0];
        for (int outcome = 0; outcome < 2; ++outcome) {
          Branch child = b;
          const CMatrix proj = measurement_projector(m->basis, outcome);
          double norm = 0;
          for (auto& col : child.columns) {
            apply_matrix(col, proj, {q});
            norm += col.squaredNorm();
          }
          if (norm < 1e-28) continue;
          child.bits[m->bit] = outcome;
          run_ops(std::move(child), seg, pos + 1);
        }
        return;
      } else if (const auto* c = std::get_if<ConditionalStep>(&step)) {
        const auto q = bind_qubits(c->qubits, binding);
        const CMatrix& u = c->table.at(table_index(*c, b.bits));
        for (auto& col : b.columns) apply_matrix(col, u, q);
      } else if (const auto* s = std::get_if<SignStep>(&step)) {
        b.weight *= s->scale * (key_parity(s->keys, b.bits) ? -1.0 : 1.0);
      } else if (const auto* ps = std::get_if<PostselectStep>(&step)) {
        if (b.bits.at(ps->bit) != ps->value) return;
        b.weight *= ps->scale;
      } else if (const auto* pr = std::get_if<PrepareStep>(&step)) {
        const auto q = bind_qubits(pr->qubits, binding);
        const CMatrix prep = preparation_unitary(prepared_vector(*pr, b.phases));
        const long configs = 1L << q.size();
        for (long config = 0; config < configs; ++config) {
          Branch child = b;
          double norm = 0;
          for (auto& col : child.columns) {
            reset_from(col, q, config);
            apply_matrix(col, prep, q);
            norm += col.squaredNorm();
          }
          if (norm < 1e-28) continue;
          run_ops(std::move(child), seg, pos + 1);
        }
        return;
      }
    }
    run(std::move(b), seg + 1, 0);
  }

  void finish(const Branch& b) {
    if (++leaves > kMaxBranches) {
      throw CapacityError("protocol_ptm: more than " + std::to_string(kMaxBranches) + " branches");
    }
    const long fullDim = b.columns.front().size();
    const long ancConfigs = fullDim / dim;
    CMatrix k(dim, dim);
    for (long c = 0; c < ancConfigs; ++c) {
      double norm = 0;
      for (long i = 0; i < dim; ++i) {
        for (long x = 0; x < dim; ++x) k(x, i) = b.columns[i]((c * dim) | reversed[x]);
        norm += k.col(i).squaredNorm();
      }
      if (norm < 1e-28) continue;
      superop.noalias() += b.weight * kron(k, CMatrix(k.conjugate()));
    }
  }
};

}  // namespace

RMatrix protocol_ptm(const std::vector<TwoPartyProtocol>& segments, int numActing, const CVector& ancillaState) {
  if (segments.empty()) throw InputError("protocol_ptm: no protocol");
  const int registerSize = static_cast<int>(segments.front().qubitParty.size());
  for (const auto& p : segments) {
    if (static_cast<int>(p.qubitParty.size()) != registerSize) {
      throw InputError("protocol_ptm: segments disagree on the register");
    }
  }
  if (numActing < 1 || numActing > registerSize) throw InputError("protocol_ptm: invalid acting count");
  int actingA = 0;
  for (int q = 0; q < numActing; ++q) actingA += segments.front().qubitParty[q] == Party::A;
  if (actingA > 3 || numActing - actingA > 3) {
    throw CapacityError("protocol_ptm: at most three acting qubits per party");
  }
  if (registerSize > kMaxQubits) throw CapacityError("protocol_ptm: register exceeds simulator capacity");

  Enumerator e{segments, {}, {}, numActing, 1L << numActing, {}, {}, 0};
  for (const auto& p : segments) e.orders.push_back(linearize(p));
  e.binding.resize(registerSize);
  for (int q = 0; q < registerSize; ++q) e.binding[q] = q;
  e.reversed.resize(e.dim);
  for (long x = 0; x < e.dim; ++x) {
    long r = 0;
    for (int j = 0; j < numActing; ++j)
      if ((x >> (numActing - 1 - j)) & 1) r |= 1L << j;
    e.reversed[x] = r;
  }
  e.superop = CMatrix::Zero(e.dim * e.dim, e.dim * e.dim);
  const int numAncilla = registerSize - numActing;
  const long ancDim = 1L << numAncilla;
  if (ancillaState.size() != 0 && ancillaState.size() != ancDim) {
    throw InputError("protocol_ptm: ancilla state has the wrong dimension");
  }
  Enumerator::Branch root;
  for (long i = 0; i < e.dim; ++i) {
    CVector col = CVector::Zero(1L << registerSize);
    if (ancillaState.size() == 0) {
      col(e.reversed[i]) = 1.0;
    } else {
      for (long c = 0; c < ancDim; ++c) {
        long high = 0;
        for (int t = 0; t < numAncilla; ++t)
          if ((c >> (numAncilla - 1 - t)) & 1) high |= 1L << t;
        col((high << numActing) | e.reversed[i]) = ancillaState(c);
      }
    }
    root.columns.push_back(col);
  }
  e.run(std::move(root), 0, 0);
  return ptm_from_superop(e.superop, numActing);
}

RMatrix protocol_ptm(const TwoPartyProtocol& protocol, int numActing, const CVector& ancillaState) {
  return protocol_ptm(std::vector<TwoPartyProtocol>{protocol}, numActing, ancillaState);
}

}  // namespace knit
