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

#include "cli.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>
#include "knit/atoms.hpp"
#include "knit/circuit.hpp"
#include "knit/error.hpp"
#include "knit/gamma.hpp"
#include "knit/kak.hpp"
#include "knit/qpd.hpp"
#include "knit/sampler.hpp"

namespace knit::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json matrix_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

/// Flat row-major list of 16 [re, im] pairs, or a 4 x 4 nested list of them.
CMatrix read_matrix_file(const std::string& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  std::vector<Json> entries;
  if (doc.is_array() && doc.size() == 4 && doc[0].is_array() && doc[0].size() == 4 && doc[0][0].is_array()) {
    for (const auto& row : doc)
      for (const auto& e : row) entries.push_back(e);
  } else if (doc.is_array()) {
    for (const auto& e : doc) entries.push_back(e);
  }
  if (entries.size() != 16) throw InputError(path + ": expected 16 [re, im] entries");
  CMatrix m(4, 4);
  for (size_t k = 0; k < 16; ++k) {
    const Json& e = entries[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw InputError(path + ": entry " + std::to_string(k) + " is not [re, im]");
    }
    m(static_cast<Eigen::Index>(k / 4), static_cast<Eigen::Index>(k % 4)) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  if (!is_unitary(m)) throw InputError(path + ": matrix is not unitary");
  return m;
}

struct GateArgs {
  std::string name;
  std::vector<std::string> params;
  std::string matrixFile;

  void attach(CLI::App* app) {
    app->add_option("gate", name, "Gate name (CNOT, CZ, SWAP, iSWAP, RXX, RYY, RZZ, CRX, CRY, CRZ, ID)");
    app->add_option("params", params, "Gate angles; accepts pi expressions");
    app->add_option("--matrix", matrixFile, "JSON file with a 4x4 unitary");
  }

  std::string label() const { return matrixFile.empty() ? name : "matrix"; }

  CMatrix matrix() const {
    if (!matrixFile.empty()) {
      if (!name.empty()) throw InputError("give either a gate name or --matrix, not both");
      return read_matrix_file(matrixFile);
    }
    if (name.empty()) throw InputError("missing gate");
    if (name == "ID" || name == "I") {
      if (!params.empty()) throw InputError("ID takes no parameters");
      return CMatrix::Identity(4, 4);
    }
    const GateName g = parse_gate_name(name);
    if (gate_arity(g) != 2) throw InputError(name + " is not a two-qubit gate");
    if (g == GateName::U4x4) throw InputError("use --matrix for a general unitary");
    std::vector<double> values;
    for (const auto& p : params) values.push_back(parse_angle(p));
    if (static_cast<int>(values.size()) != gate_param_count(g)) {
      throw InputError(name + " expects " + std::to_string(gate_param_count(g)) + " parameter(s)");
    }
    return gate_matrix(g, values);
  }
};

Json kak_json(const KakParams& k) {
  Json j;
  j["thetaX"] = k.thetaX;
  j["thetaY"] = k.thetaY;
  j["thetaZ"] = k.thetaZ;
  j["class"] = to_string(classify(k));
  j["globalPhase"] = {k.globalPhase.real(), k.globalPhase.imag()};
  return j;
}

std::string format_row(const std::vector<double>& values) {
  std::string line;
  char buf[64];
  for (size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", values[i]);
    if (i) line += ',';
    line += buf;
  }
  return line + "\n";
}

std::vector<double> make_grid(double from, double to, double step) {
  if (!(step > 0) || !std::isfinite(step)) throw InputError("sweep step must be positive");
  if (!(to >= from)) throw InputError("sweep range is empty");
  const long n = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
  if (n > 1000000) throw InputError("sweep grid has too many points");
  std::vector<double> grid;
  for (long i = 0; i < n; ++i) grid.push_back(from + static_cast<double>(i) * step);
  return grid;
}

}  // namespace

double parse_angle(const std::string& raw) {
  std::string text;
  for (char ch : raw) {
    if (!std::isspace(static_cast<unsigned char>(ch))) text += ch;
  }
  if (text.empty()) throw InputError("empty angle");
  double sign = 1.0;
  if (text[0] == '-' && text.find("pi") != std::string::npos) {
    sign = -1.0;
    text = text.substr(1);
  }
  const size_t piPos = text.find("pi");
  auto number = [&](const std::string& s) {
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InputError("cannot parse angle '" + raw + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw InputError("cannot parse angle '" + raw + "'");
    return v;
  };
  if (piPos == std::string::npos) return number(text);
  std::string pre = text.substr(0, piPos);
  std::string post = text.substr(piPos + 2);
  if (!pre.empty() && pre.back() == '*') pre.pop_back();
  double value = kPi * (pre.empty() ? 1.0 : number(pre));
  if (!post.empty()) {
    if (post[0] != '/') throw InputError("cannot parse angle '" + raw + "'");
    const double d = number(post.substr(1));
    if (d == 0) throw InputError("division by zero in angle '" + raw + "'");
    value /= d;
  }
  return sign * value;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasiprobability circuit-knitting toolkit", "knit"};
  app.require_subcommand(1);

  GateArgs gammaGate;
  bool gammaExact = false;
  CLI::App* gammaCmd = app.add_subcommand("gamma", "Gamma factors of a two-qubit gate");
  gammaGate.attach(gammaCmd);
  gammaCmd->add_flag("--exact", gammaExact, "Fail with exit code 3 if no closed form applies");

  GateArgs kakGate;
  CLI::App* kakCmd = app.add_subcommand("kak", "KAK decomposition of a two-qubit gate");
  kakGate.attach(kakCmd);

  GateArgs qpdGate;
  std::string qpdSetting = "lo";
  int qpdK = 1;
  std::string qpdAtoms = "default";
  bool qpdVerify = false;
  CLI::App* qpdCmd = app.add_subcommand("qpd", "Emit a quasiprobability decomposition as JSON");
  qpdGate.attach(qpdCmd);
  qpdCmd->add_option("--setting", qpdSetting, "lo, lo-oneway-cc or locc");
  qpdCmd->add_option("--k", qpdK, "Factory size for teleportation settings");
  qpdCmd->add_option("--atoms", qpdAtoms, "Atom-set preset: default or pauli");
  qpdCmd->add_flag("--verify", qpdVerify, "Add the PTM identity error to the output");

  std::string circuitFile;
  std::string estSetting = "lo";
  int estK = 1;
  long estShots = 10000;
  std::uint64_t estSeed = 1;
  int estWorkers = 1;
  std::string estAtoms = "default";
  bool estExact = false;
  CLI::App* estCmd = app.add_subcommand("estimate", "Monte Carlo estimate of a cut circuit");
  estCmd->add_option("circuit", circuitFile, "Circuit JSON file")->required();
  estCmd->add_option("--setting", estSetting, "lo, lo-oneway-cc or locc");
  estCmd->add_option("--k", estK, "Factory size");
  estCmd->add_option("--shots", estShots, "Number of shots");
  estCmd->add_option("--seed", estSeed, "Master seed");
  estCmd->add_option("--workers", estWorkers, "Worker threads; results do not depend on it");
  estCmd->add_option("--atoms", estAtoms, "Atom-set preset: default or pauli");
  estCmd->add_flag("--exact", estExact, "Also report the uncut statevector value");

  std::string quantity;
  std::string sweepFrom, sweepTo, sweepStep;
  std::string sweepGate;
  std::string sweepAtoms = "default";
  std::string sweepOut = "-";
  CLI::App* sweepCmd = app.add_subcommand("sweep", "Parameter sweep written as CSV");
  sweepCmd->add_option("quantity", quantity, "effective-gamma-k, crx-bounds or lp-gamma-theta")->required();
  sweepCmd->add_option("--from", sweepFrom, "Grid start");
  sweepCmd->add_option("--to", sweepTo, "Grid end (inclusive)");
  sweepCmd->add_option("--step", sweepStep, "Grid step");
  sweepCmd->add_option("--gate", sweepGate, "Gate for effective-gamma-k (CNOT) or lp-gamma-theta (CRZ)");
  sweepCmd->add_option("--atoms", sweepAtoms, "Atom-set preset for lp-gamma-theta");
  sweepCmd->add_option("-o,--output", sweepOut, "Output path, - for stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*gammaCmd) {
      const CMatrix u = gammaGate.matrix();
      const GammaReport r = gamma_report(u);
      if (gammaExact && !r.gammaExact) {
        err << "error: no closed-form gamma for a gate of class GENERAL\n";
        return kExitUnsupported;
      }
      Json j;
      j["gate"] = gammaGate.label();
      j["params"] = Json::array();
      for (const std::string& p : gammaGate.params) j["params"].push_back(parse_angle(p));
      j["kak"] = kak_json(r.kak);
      j["gammaExact"] = r.gammaExact ? Json(*r.gammaExact) : Json(nullptr);
      j["gammaLO_upper"] = r.gammaLO_upper;
      j["gammaLOCC_lower"] = r.gammaLOCC_lower;
      j["bounds"] = {r.gammaLOCC_lower, r.gammaLO_upper};
      j["overheadSquared"] = r.overheadSquared;
      out << j.dump(2) << "\n";
    } else if (*kakCmd) {
      const CMatrix u = kakGate.matrix();
      const KakParams k = kak(u);
      Json j = kak_json(k);
      j["a1"] = matrix_json(k.a1);
      j["a2"] = matrix_json(k.a2);
      j["b1"] = matrix_json(k.b1);
      j["b2"] = matrix_json(k.b2);
      Json coeffs = Json::array();
      for (const Complex& c : u_coefficients(k)) coeffs.push_back({c.real(), c.imag()});
      j["uCoefficients"] = coeffs;
      j["reconstructionError"] = (reconstruct(k) - u).cwiseAbs().maxCoeff();
      out << j.dump(2) << "\n";
    } else if (*qpdCmd) {
      const CMatrix u = qpdGate.matrix();
      const Setting setting = parse_setting(qpdSetting);
      Qpd q;
      if (setting == Setting::LO) {
        q = lo_gate_qpd(u, atom_set_by_name(qpdAtoms), qpdGate.label());
      } else {
        q = factory_qpd(u, qpdK);
        q.target = qpdGate.label() + "^" + std::to_string(qpdK);
        if (setting == Setting::LO_ONEWAY_CC) q = oneway_variant(q);
      }
      std::string text = qpd_to_json(q);
      if (qpdVerify) {
        Json j = Json::parse(text);
        j["identityError"] = qpd_identity_error(q);
        text = j.dump(2) + "\n";
      }
      out << text;
    } else if (*estCmd) {
      const CircuitIR circuit = parse_circuit(read_file(circuitFile));
      const CutPlan plan = default_plan(circuit, parse_setting(estSetting), estK);
      const EstimateResult r = estimate(circuit, plan, estShots, estSeed, estWorkers, atom_set_by_name(estAtoms));
      std::string text = estimate_to_json(r);
      if (estExact) {
        Json j = Json::parse(text);
        j["exact"] = exact_expectation(circuit);
        text = j.dump(2) + "\n";
      }
      out << text;
    } else if (*sweepCmd) {
      std::string csv;
      auto grid_or = [&](const std::string& from, const std::string& to, const std::string& step, double f,
                         double t, double s) {
        return make_grid(from.empty() ? f : parse_angle(from), to.empty() ? t : parse_angle(to),
                         step.empty() ? s : parse_angle(step));
      };
      if (quantity == "effective-gamma-k") {
        const std::string gate = sweepGate.empty() ? "CNOT" : sweepGate;
        GateArgs g{gate, {}, ""};
        const CMatrix u = g.matrix();
        csv = "k,gamma_k\n";
        for (double kv : grid_or(sweepFrom, sweepTo, sweepStep, 1, 20, 1)) {
          const int k = static_cast<int>(std::lround(kv));
          if (std::abs(kv - k) > 1e-9) throw InputError("effective-gamma-k needs integer k");
          csv += format_row({static_cast<double>(k), effective_gamma_k(u, k)});
        }
      } else if (quantity == "crx-bounds") {
        csv = "theta,lower,upper,upper_lo,upper_teleport\n";
        for (double theta : grid_or(sweepFrom, sweepTo, sweepStep, 0, 2 * kPi, kPi / 100)) {
          const CrxBounds b = crx_bounds(theta);
          csv += format_row({theta, b.lower, b.upper, b.upperLo, b.upperTeleport});
        }
      } else if (quantity == "lp-gamma-theta") {
        const GateName g = parse_gate_name(sweepGate.empty() ? "CRZ" : sweepGate);
        if (gate_arity(g) != 2 || gate_param_count(g) != 1) {
          throw InputError("lp-gamma-theta needs a one-parameter two-qubit gate");
        }
        const AtomSet& atoms = atom_set_by_name(sweepAtoms);
        csv = "theta,lp_kappa,gamma_exact,choi_lower\n";
        for (double theta : grid_or(sweepFrom, sweepTo, sweepStep, 0, 2 * kPi, kPi / 16)) {
          const CMatrix u = gate_matrix(g, {theta});
          const Qpd q = lo_gate_qpd(u, atoms);
          csv += format_row({theta, q.kappa, gamma_exact(u), choi_schmidt_lower(u)});
        }
      } else {
        throw InputError("unknown sweep quantity '" + quantity + "'");
      }
      if (sweepOut == "-") {
        out << csv;
      } else {
        std::ofstream file(sweepOut, std::ios::binary);
        if (!file) throw InputError("cannot write " + sweepOut);
        file << csv;
        if (!file) throw InputError("failed writing " + sweepOut);
      }
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

}  // namespace knit::cli
