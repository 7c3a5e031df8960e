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

#include "knit/atoms.hpp"

#include <cmath>
#include <map>

#include "knit/clifford.hpp"
#include "knit/error.hpp"
#include "knit/statevector.hpp"

namespace knit {

namespace {

const char kAxes[] = "XYZ";

std::string sign_key(const RMatrix& ptm) {
  double sign = 1.0;
  for (Eigen::Index k = 0; k < ptm.size(); ++k) {
    if (std::abs(ptm.data()[k]) > 1e-9) {
      sign = ptm.data()[k] > 0 ? 1.0 : -1.0;
      break;
    }
  }
  std::string key;
  for (Eigen::Index k = 0; k < ptm.size(); ++k) {
    const long v = std::lround(sign * ptm.data()[k] * 1e6);
    key += std::to_string(v == 0 ? 0 : v) + ",";
  }
  return key;
}

/// Clifford c with c s_from c^dagger = sign * s_to.
CMatrix clifford_mapping(int from, int to, double sign) {
  const CMatrix target = sign * pauli(to);
  for (const CMatrix& c : single_qubit_cliffords()) {
    if ((c * pauli(from) * c.adjoint() - target).cwiseAbs().maxCoeff() < 1e-9) return c;
  }
  throw NumericalError("no Clifford maps the requested axes");
}

void add_unique(std::vector<LocalOp>& ops, std::map<std::string, int>& seen, LocalOp op) {
  op.ptm = local_op_ptm(op.steps);
  if (seen.emplace(sign_key(op.ptm), static_cast<int>(ops.size())).second) ops.push_back(std::move(op));
}

AtomSet all_pairs(std::string name, std::vector<LocalOp> ops) {
  AtomSet set;
  set.name = std::move(name);
  set.opsA = ops;
  set.opsB = std::move(ops);
  for (size_t i = 0; i < set.opsA.size(); ++i)
    for (size_t j = 0; j < set.opsB.size(); ++j) set.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return set;
}

std::vector<LocalOp> measurement_ops(bool allOutputs) {
  std::vector<LocalOp> out;
  for (int axis = 1; axis <= 3; ++axis) {
    for (int rule = 0; rule < 2; ++rule) {
      for (int to = 1; to <= 3; ++to) {
        for (double sign : {1.0, -1.0}) {
          if (!allOutputs && (to != axis || sign < 0)) continue;
          LocalOp op;
          op.label = std::string("meas") + kAxes[axis - 1] + (rule ? "+-" : "++") + "->" + (sign > 0 ? "+" : "-") +
                     kAxes[to - 1];
          op.steps.push_back(MeasureStep{0, kAxes[axis - 1], "m"});
          if (rule) op.steps.push_back(SignStep{{"m"}, 1.0});
          const CMatrix c = clifford_mapping(axis, to, sign);
          if ((c - identity(2)).cwiseAbs().maxCoeff() > 1e-12) op.steps.push_back(UnitaryStep{{0}, c});
          out.push_back(std::move(op));
        }
      }
    }
  }
  return out;
}

}  // namespace

RMatrix local_op_ptm(const std::vector<Step>& steps) {
  TwoPartyProtocol p;
  p.qubitParty = {Party::A};
  p.instrA.steps = steps;
  return protocol_ptm(p, 1);
}

std::vector<Step> relocate(const std::vector<Step>& steps, int qubit, const std::string& bit) {
  auto fixBit = [&](const std::string& b) { return b == "m" ? bit : b; };
  std::vector<Step> out;
  for (const Step& step : steps) {
    Step s = step;
    std::visit(
        [&](auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, MeasureStep>) {
            v.qubit = qubit;
            v.bit = fixBit(v.bit);
          } else if constexpr (std::is_same_v<T, UnitaryStep> || std::is_same_v<T, PrepareStep>) {
            for (int& q : v.qubits) q = qubit;
          } else if constexpr (std::is_same_v<T, ConditionalStep>) {
            for (int& q : v.qubits) q = qubit;
            for (auto& k : v.keys) k = fixBit(k);
          } else if constexpr (std::is_same_v<T, SignStep>) {
            for (auto& k : v.keys) k = fixBit(k);
          } else if constexpr (std::is_same_v<T, PostselectStep>) {
            v.bit = fixBit(v.bit);
          }
        },
        s);
    out.push_back(std::move(s));
  }
  return out;
}

RMatrix AtomSet::atom_ptm(size_t index) const {
  const auto& [i, j] = pairs.at(index);
  return kron(opsA[i].ptm, opsB[j].ptm);
}

std::string AtomSet::label(size_t index) const {
  const auto& [i, j] = pairs.at(index);
  return opsA[i].label + "|" + opsB[j].label;
}

const AtomSet& default_atom_set() {
  static const AtomSet set = [] {
    std::vector<LocalOp> ops;
    std::map<std::string, int> seen;
    const auto& cliffords = single_qubit_cliffords();
    for (size_t k = 0; k < cliffords.size(); ++k) {
      LocalOp op;
      op.label = "clifford" + std::to_string(k);
      if (k > 0) op.steps.push_back(UnitaryStep{{0}, cliffords[k]});
      add_unique(ops, seen, std::move(op));
    }
    for (auto& op : measurement_ops(true)) add_unique(ops, seen, std::move(op));
    return all_pairs("default", std::move(ops));
  }();
  return set;
}

const AtomSet& pauli_atom_set() {
  static const AtomSet set = [] {
    std::vector<LocalOp> ops;
    std::map<std::string, int> seen;
    for (int k = 0; k < 4; ++k) {
      LocalOp op;
      op.label = k == 0 ? "I" : std::string(1, kAxes[k - 1]);
      if (k > 0) op.steps.push_back(UnitaryStep{{0}, pauli(k)});
      add_unique(ops, seen, std::move(op));
    }
    for (auto& op : measurement_ops(false)) add_unique(ops, seen, std::move(op));
    return all_pairs("pauli", std::move(ops));
  }();
  return set;
}

const AtomSet& atom_set_by_name(const std::string& name) {
  if (name == "default") return default_atom_set();
  if (name == "pauli") return pauli_atom_set();
  throw InputError("unknown atom set '" + name + "' (expected default or pauli)");
}

AtomSet dressed_atom_set(const AtomSet& base, const CMatrix& postA, const CMatrix& postB, const CMatrix& preA,
                         const CMatrix& preB) {
  auto dress = [](const std::vector<LocalOp>& ops, const CMatrix& post, const CMatrix& pre) {
    const RMatrix postPtm = unitary_ptm(post);
    const RMatrix prePtm = unitary_ptm(pre);
    std::vector<LocalOp> out;
    for (const LocalOp& op : ops) {
      LocalOp d;
      d.label = op.label;
      d.steps.push_back(UnitaryStep{{0}, pre});
      d.steps.insert(d.steps.end(), op.steps.begin(), op.steps.end());
      d.steps.push_back(UnitaryStep{{0}, post});
      d.ptm = postPtm * op.ptm * prePtm;
      out.push_back(std::move(d));
    }
    return out;
  };
  AtomSet set;
  set.name = base.name + "+frame";
  set.opsA = dress(base.opsA, postA, preA);
  set.opsB = dress(base.opsB, postB, preB);
  set.pairs = base.pairs;
  return set;
}

}  // namespace knit
