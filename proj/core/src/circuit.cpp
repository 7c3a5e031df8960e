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

#include "knit/circuit.hpp"

#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "knit/error.hpp"

namespace knit {

namespace {

using OrderedJson = nlohmann::ordered_json;

const std::vector<std::pair<GateName, std::string>>& gate_names() {
  static const std::vector<std::pair<GateName, std::string>> names = {
      {GateName::H, "H"},       {GateName::X, "X"},       {GateName::Y, "Y"},
      {GateName::Z, "Z"},       {GateName::S, "S"},       {GateName::T, "T"},
      {GateName::RX, "RX"},     {GateName::RY, "RY"},     {GateName::RZ, "RZ"},
      {GateName::CNOT, "CNOT"}, {GateName::CZ, "CZ"},     {GateName::SWAP, "SWAP"},
      {GateName::ISWAP, "iSWAP"}, {GateName::RXX, "RXX"}, {GateName::RYY, "RYY"},
      {GateName::RZZ, "RZZ"},   {GateName::CRX, "CRX"},   {GateName::CRY, "CRY"},
      {GateName::CRZ, "CRZ"},   {GateName::U2x2, "U2x2"}, {GateName::U4x4, "U4x4"}};
  return names;
}

CMatrix rotation(int axis, double theta) {
  return std::cos(theta / 2) * identity(2) - Complex(0, std::sin(theta / 2)) * pauli(axis);
}

CMatrix two_body_rotation(int axis, double theta) {
  const CMatrix pp = kron(pauli(axis), pauli(axis));
  return std::cos(theta / 2) * identity(4) - Complex(0, std::sin(theta / 2)) * pp;
}

CMatrix controlled(const CMatrix& u) {
  CMatrix out = CMatrix::Zero(4, 4);
  out(0, 0) = 1;
  out(1, 1) = 1;
  out.block(2, 2, 2, 2) = u;
  return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError("circuit " + where + ": " + what);
}

}  // namespace

std::string to_string(GateName name) {
  for (const auto& [n, s] : gate_names())
    if (n == name) return s;
  return "?";
}

std::string to_string(Party party) { return party == Party::A ? "A" : "B"; }

std::string to_string(Setting setting) {
  switch (setting) {
    case Setting::LO: return "LO";
    case Setting::LO_ONEWAY_CC: return "LO_ONEWAY_CC";
    case Setting::LOCC: return "LOCC";
  }
  return "?";
}

std::string to_string(CutMethod method) {
  return method == CutMethod::LP_QPD ? "lp-qpd" : "teleport-factory";
}

GateName parse_gate_name(const std::string& text) {
  for (const auto& [n, s] : gate_names())
    if (s == text) return n;
  if (text == "ISWAP") return GateName::ISWAP;
  throw InputError("unknown gate name '" + text + "'");
}

Setting parse_setting(const std::string& text) {
  if (text == "lo" || text == "LO") return Setting::LO;
  if (text == "lo-oneway-cc" || text == "LO_ONEWAY_CC") return Setting::LO_ONEWAY_CC;
  if (text == "locc" || text == "LOCC") return Setting::LOCC;
  throw InputError("unknown setting '" + text + "'");
}

int gate_arity(GateName name) {
  switch (name) {
    case GateName::H: case GateName::X: case GateName::Y: case GateName::Z:
    case GateName::S: case GateName::T: case GateName::RX: case GateName::RY:
    case GateName::RZ: case GateName::U2x2:
      return 1;
    default:
      return 2;
  }
}

int gate_param_count(GateName name) {
  switch (name) {
    case GateName::RX: case GateName::RY: case GateName::RZ:
    case GateName::RXX: case GateName::RYY: case GateName::RZZ:
    case GateName::CRX: case GateName::CRY: case GateName::CRZ:
      return 1;
    default:
      return 0;
  }
}

CMatrix gate_matrix(GateName name, const std::vector<double>& params) {
  if (static_cast<int>(params.size()) != gate_param_count(name)) {
    throw InputError("gate " + to_string(name) + " expects " +
                     std::to_string(gate_param_count(name)) + " parameter(s)");
  }
  const Complex i(0, 1);
  CMatrix m;
  switch (name) {
    case GateName::H:
      m = CMatrix(2, 2);
      m << 1, 1, 1, -1;
      return m / std::sqrt(2.0);
    case GateName::X: return pauli(1);
    case GateName::Y: return pauli(2);
    case GateName::Z: return pauli(3);
    case GateName::S:
      m = CMatrix::Identity(2, 2);
      m(1, 1) = i;
      return m;
    case GateName::T:
      m = CMatrix::Identity(2, 2);
      m(1, 1) = std::polar(1.0, kPi / 4);
      return m;
    case GateName::RX: return rotation(1, params[0]);
    case GateName::RY: return rotation(2, params[0]);
    case GateName::RZ: return rotation(3, params[0]);
    case GateName::CNOT: return controlled(pauli(1));
    case GateName::CZ: return controlled(pauli(3));
    case GateName::SWAP:
      m = CMatrix::Zero(4, 4);
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
      return m;
    case GateName::ISWAP:
      m = CMatrix::Zero(4, 4);
      m(0, 0) = m(3, 3) = 1;
      m(1, 2) = m(2, 1) = i;
      return m;
    case GateName::RXX: return two_body_rotation(1, params[0]);
    case GateName::RYY: return two_body_rotation(2, params[0]);
    case GateName::RZZ: return two_body_rotation(3, params[0]);
    case GateName::CRX: return controlled(rotation(1, params[0]));
    case GateName::CRY: return controlled(rotation(2, params[0]));
    case GateName::CRZ: return controlled(rotation(3, params[0]));
    case GateName::U2x2:
    case GateName::U4x4:
      throw InputError("gate " + to_string(name) + " requires an explicit matrix");
  }
  throw InputError("unhandled gate");
}

CMatrix gate_matrix(const GateSpec& gate) {
  if (gate.name == GateName::U2x2 || gate.name == GateName::U4x4) {
    if (!gate.matrix) throw InputError("gate " + to_string(gate.name) + " requires an explicit matrix");
    return *gate.matrix;
  }
  return gate_matrix(gate.name, gate.params);
}

void validate_circuit(const CircuitIR& c) {
  if (c.numQubits <= 0) fail("/numQubits", "must be positive");
  if (static_cast<int>(c.partition.size()) != c.numQubits) {
    fail("/partition", "length " + std::to_string(c.partition.size()) + " != numQubits " +
                           std::to_string(c.numQubits));
  }
  for (size_t g = 0; g < c.gates.size(); ++g) {
    const GateSpec& gate = c.gates[g];
    const std::string where = "/gates/" + std::to_string(g);
    const int arity = gate_arity(gate.name);
    if (static_cast<int>(gate.qubits.size()) != arity) {
      fail(where + "/qubits", to_string(gate.name) + " acts on " + std::to_string(arity) + " qubit(s)");
    }
    std::set<int> seen;
    for (int q : gate.qubits) {
      if (q < 0 || q >= c.numQubits) fail(where + "/qubits", "qubit " + std::to_string(q) + " out of range");
      if (!seen.insert(q).second) fail(where + "/qubits", "repeated qubit " + std::to_string(q));
    }
    if (static_cast<int>(gate.params.size()) != gate_param_count(gate.name)) {
      fail(where + "/params", to_string(gate.name) + " expects " +
                                  std::to_string(gate_param_count(gate.name)) + " parameter(s)");
    }
    if (gate.name == GateName::U2x2 || gate.name == GateName::U4x4) {
      const int dim = 1 << arity;
      if (!gate.matrix || gate.matrix->rows() != dim || gate.matrix->cols() != dim) {
        fail(where + "/matrix", "expected " + std::to_string(dim * dim) + " entries");
      }
      if (!is_unitary(*gate.matrix, 1e-9)) fail(where + "/matrix", "matrix is not unitary");
    } else if (gate.matrix) {
      fail(where + "/matrix", "only U2x2 and U4x4 carry a matrix");
    }
  }
  if (!c.observable.empty() && static_cast<int>(c.observable.size()) != c.numQubits) {
    fail("/observable", "length must equal numQubits");
  }
  for (char ch : c.observable) {
    if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z') {
      fail("/observable", std::string("invalid Pauli letter '") + ch + "'");
    }
  }
}

CircuitIR parse_circuit(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("circuit JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("/", "expected an object");
  CircuitIR c;
  try {
    if (!doc.contains("numQubits") || !doc["numQubits"].is_number_integer()) {
      fail("/numQubits", "missing or not an integer");
    }
    c.numQubits = doc["numQubits"].get<int>();
    if (!doc.contains("partition") || !doc["partition"].is_array()) fail("/partition", "missing or not an array");
    for (size_t k = 0; k < doc["partition"].size(); ++k) {
      const auto& p = doc["partition"][k];
      if (p == "A") c.partition.push_back(Party::A);
      else if (p == "B") c.partition.push_back(Party::B);
      else fail("/partition/" + std::to_string(k), "expected \"A\" or \"B\"");
    }
    if (!doc.contains("gates") || !doc["gates"].is_array()) fail("/gates", "missing or not an array");
    for (size_t g = 0; g < doc["gates"].size(); ++g) {
      const auto& jg = doc["gates"][g];
      const std::string where = "/gates/" + std::to_string(g);
      if (!jg.is_object()) fail(where, "expected an object");
      GateSpec gate;
      if (!jg.contains("name") || !jg["name"].is_string()) fail(where + "/name", "missing or not a string");
      try {
        gate.name = parse_gate_name(jg["name"].get<std::string>());
      } catch (const InputError& e) {
        fail(where + "/name", e.what());
      }
      if (!jg.contains("qubits") || !jg["qubits"].is_array()) fail(where + "/qubits", "missing or not an array");
      for (const auto& q : jg["qubits"]) {
        if (!q.is_number_integer()) fail(where + "/qubits", "entries must be integers");
        gate.qubits.push_back(q.get<int>());
      }
      if (jg.contains("params")) {
        if (!jg["params"].is_array()) fail(where + "/params", "not an array");
        for (const auto& p : jg["params"]) {
          if (!p.is_number()) fail(where + "/params", "entries must be numbers");
          gate.params.push_back(p.get<double>());
        }
      }
      if (jg.contains("matrix")) {
        const auto& jm = jg["matrix"];
        const size_t n = jm.is_array() ? jm.size() : 0;
        const int dim = n == 4 ? 2 : n == 16 ? 4 : 0;
        if (dim == 0) fail(where + "/matrix", "expected 4 or 16 [re, im] entries");
        CMatrix m(dim, dim);
        for (size_t k = 0; k < n; ++k) {
          const auto& e = jm[k];
          if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            fail(where + "/matrix/" + std::to_string(k), "expected [re, im]");
          }
          m(k / dim, k % dim) = Complex(e[0].get<double>(), e[1].get<double>());
        }
        gate.matrix = m;
      }
      c.gates.push_back(std::move(gate));
    }
    if (doc.contains("observable")) {
      if (!doc["observable"].is_string()) fail("/observable", "not a string");
      c.observable = doc["observable"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("circuit JSON: ") + e.what());
  }
  validate_circuit(c);
  return c;
}

std::string serialize_circuit(const CircuitIR& c) {
  OrderedJson doc;
  doc["numQubits"] = c.numQubits;
  doc["partition"] = OrderedJson::array();
  for (Party p : c.partition) doc["partition"].push_back(to_string(p));
  doc["gates"] = OrderedJson::array();
  for (const GateSpec& g : c.gates) {
    OrderedJson jg;
    jg["name"] = to_string(g.name);
    jg["qubits"] = g.qubits;
    jg["params"] = g.params;
    if (g.matrix) {
      OrderedJson jm = OrderedJson::array();
      for (Eigen::Index r = 0; r < g.matrix->rows(); ++r)
        for (Eigen::Index k = 0; k < g.matrix->cols(); ++k)
          jm.push_back({(*g.matrix)(r, k).real(), (*g.matrix)(r, k).imag()});
      jg["matrix"] = jm;
    }
    doc["gates"].push_back(jg);
  }
  doc["observable"] = c.observable;
  return doc.dump(2) + "\n";
}

std::vector<int> nonlocal_gates(const CircuitIR& c) {
  std::vector<int> out;
  for (size_t g = 0; g < c.gates.size(); ++g) {
    const auto& q = c.gates[g].qubits;
    if (q.size() == 2 && c.partition.at(q[0]) != c.partition.at(q[1])) out.push_back(static_cast<int>(g));
  }
  return out;
}

CMatrix nonlocal_gate_matrix(const CircuitIR& c, int gateIndex) {
  const GateSpec& g = c.gates.at(gateIndex);
  CMatrix u = gate_matrix(g);
  if (c.partition.at(g.qubits[0]) == Party::B) {
    const CMatrix swap = gate_matrix(GateName::SWAP);
    u = swap * u * swap;
  }
  return u;
}

}  // namespace knit
