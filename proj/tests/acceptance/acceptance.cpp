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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "knit/gamma.hpp"
#include "knit/kak.hpp"
#include "knit/qpd.hpp"
#include "knit/sampler.hpp"
#include "knit/statevector.hpp"
#include "oracles.hpp"

namespace {

using knit::CMatrix;
using oracle::kPi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

CMatrix dress(const CMatrix& core, std::mt19937_64& gen) {
  const CMatrix l = Eigen::kroneckerProduct(oracle::haar_unitary(2, gen), oracle::haar_unitary(2, gen)).eval();
  const CMatrix r = Eigen::kroneckerProduct(oracle::haar_unitary(2, gen), oracle::haar_unitary(2, gen)).eval();
  return l * core * r;
}

knit::CircuitIR load_circuit(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return knit::parse_circuit(ss.str());
}

double dense_expectation(const knit::CircuitIR& c) {
  oracle::Vec psi = oracle::Vec::Zero(1L << c.numQubits);
  psi(0) = 1;
  for (const auto& g : c.gates) {
    oracle::Mat m;
    const double t = g.params.empty() ? 0.0 : g.params[0];
    switch (g.name) {
      case knit::GateName::RX: m = oracle::pauli_rotation("X", t); break;
      case knit::GateName::RY: m = oracle::pauli_rotation("Y", t); break;
      case knit::GateName::RZ: m = oracle::pauli_rotation("Z", t); break;
      case knit::GateName::CNOT: m = oracle::cnot(); break;
      default: throw std::invalid_argument("unexpected gate in acceptance circuit");
    }
    psi = oracle::embed(m, g.qubits, c.numQubits) * psi;
  }
  return oracle::expectation(psi, c.observable);
}

Outcome closed_form_table() {
  Outcome o;
  o.check(std::abs(knit::gamma_exact(oracle::cnot()) - 3) <= 1e-9, "CNOT");
  o.check(std::abs(knit::gamma_exact(oracle::iswap()) - 7) <= 1e-9, "iSWAP");
  o.check(std::abs(knit::gamma_exact(oracle::swap_gate()) - 7) <= 1e-9, "SWAP");
  double worst = 0;
  for (int i = 0; i < 32; ++i) {
    const double t = 2 * kPi * i / 31.0;
    for (char s : std::string("XYZ")) {
      worst = std::max(worst, std::abs(knit::gamma_exact(oracle::controlled_rotation(s, t)) -
                                       (1 + 2 * std::abs(std::sin(t / 2)))));
      worst = std::max(worst, std::abs(knit::gamma_exact(oracle::pauli_rotation(std::string(2, s), t)) -
                                       (1 + 2 * std::abs(std::sin(t)))));
    }
  }
  o.check(worst <= 1e-9, fmt("rotation grid error %.3g", worst));
  if (o.pass) o.detail = fmt("max grid error %.2g", worst);
  return o;
}

Outcome bound_agreement() {
  Outcome o;
  std::mt19937_64 gen(4301);
  std::uniform_real_distribution<double> d(0, kPi / 4);
  double worst = 0;
  for (int trial = 0; trial < 64; ++trial) {
    double x = d(gen), y = d(gen);
    if (y > x) std::swap(x, y);
    const CMatrix u = dress(oracle::canonical(x, y, 0), gen);
    worst = std::max(worst, std::abs(knit::gamma_lo_upper(u) - knit::choi_schmidt_lower(u)));
  }
  for (int trial = 0; trial < 8; ++trial) {
    const CMatrix u = dress(oracle::swap_gate(), gen);
    worst = std::max(worst, std::abs(knit::gamma_lo_upper(u) - knit::choi_schmidt_lower(u)));
  }
  o.check(worst <= 1e-8, fmt("gap %.3g", worst));
  o.detail = fmt("max |upper - lower| %.2g over 72 gates", worst);
  return o;
}

Outcome lp_optimality() {
  Outcome o;
  const auto& atoms = knit::default_atom_set();
  std::vector<std::pair<std::string, CMatrix>> gates{
      {"CNOT", oracle::cnot()}, {"CZ", oracle::cz()}, {"iSWAP", oracle::iswap()}};
  for (int i = 1; i <= 8; ++i) {
    const double t = 2 * kPi * i / 9.0;
    gates.emplace_back("CRZ(" + fmt("%.3f", t) + ")", oracle::controlled_rotation('Z', t));
    gates.emplace_back("RZZ(" + fmt("%.3f", t) + ")", oracle::pauli_rotation("ZZ", t));
  }
  double worst = 0;
  for (const auto& [name, u] : gates) {
    const knit::Qpd q = knit::lo_gate_qpd(u, atoms, name);
    const double exact = knit::gamma_exact(u);
    const double lower = knit::choi_schmidt_lower(u);
    worst = std::max(worst, std::abs(q.kappa - exact));
    o.check(std::abs(q.kappa - exact) <= 1e-4, name + fmt(" kappa %.8f vs %.8f", q.kappa, exact));
    o.check(q.kappa - lower <= 1e-4, name + " not certified by the Choi bound");
    o.check(knit::qpd_identity_error(q) <= 1e-7, name + " identity");
  }
  if (o.pass) o.detail = fmt("%.0f gates, max |kappa - closed form| %.2g", static_cast<double>(gates.size()), worst);
  return o;
}

Outcome bell_batch() {
  Outcome o;
  for (int n = 1; n <= 4; ++n) {
    const int dim = 1 << n;
    knit::CVector psi = knit::CVector::Zero(dim * dim);
    for (int x = 0; x < dim; ++x) psi(x * dim + x) = 1.0 / std::sqrt(static_cast<double>(dim));
    const double g = knit::gamma_pure_state(psi, dim, dim);
    o.check(std::abs(g - (std::pow(2.0, n + 1) - 1)) <= 1e-9, fmt("n=%.0f gives %.12g", n, g));
  }
  if (o.pass) o.detail = "3, 7, 15, 31";
  return o;
}

Outcome teleport_exact() {
  Outcome o;
  double worst = 0;
  for (const CMatrix& u : {oracle::cnot(), oracle::cz(), oracle::iswap(), oracle::swap_gate()}) {
    const auto g = knit::teleport_protocol(u);
    const auto r = knit::protocol_ptm(g.protocol, 2, g.resource_state());
    worst = std::max(worst, (r - oracle::ptm(u)).cwiseAbs().maxCoeff());
  }
  o.check(worst <= 1e-10, fmt("error %.3g", worst));
  o.detail = fmt("max PTM error %.2g", worst);
  return o;
}

Outcome unbiasedness(const knit::CircuitIR& c, double exact) {
  Outcome o;
  struct Case {
    const char* name;
    knit::Setting setting;
    int k;
  };
  std::string detail;
  for (const Case& cs : {Case{"LO", knit::Setting::LO, 1}, Case{"LOCC k=2", knit::Setting::LOCC, 2},
                         Case{"one-way", knit::Setting::LO_ONEWAY_CC, 1}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = knit::estimate(c, knit::default_plan(c, cs.setting, cs.k), 100000, 20260101);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double z = (r.mean - exact) / r.standardError;
    o.check(std::abs(z) <= 5, std::string(cs.name) + fmt(" z=%.2f", z));
    o.check(secs < 60, std::string(cs.name) + fmt(" took %.1f s", secs));
    if (cs.setting == knit::Setting::LO) o.check(std::abs(r.kappaTotal - 9) < 1e-6, "LO kappa");
    if (cs.setting == knit::Setting::LOCC) o.check(std::abs(r.kappaTotal - 7) < 1e-9, "LOCC kappa");
    if (cs.setting == knit::Setting::LO_ONEWAY_CC) {
      for (double cost : r.costPerGate) o.check(std::abs(cost - 8) < 1e-9, "one-way cost per gate");
    }
    detail += std::string(detail.empty() ? "" : ", ") + cs.name + fmt(" z=%.2f (%.1fs)", z, secs);
  }
  if (o.pass) o.detail = detail + fmt(", exact %.6f", exact);
  return o;
}

Outcome variance_ratio(const knit::CircuitIR& c) {
  Outcome o;
  const auto lo = knit::estimate(c, knit::default_plan(c, knit::Setting::LO), 200000, 777);
  const auto locc = knit::estimate(c, knit::default_plan(c, knit::Setting::LOCC, 2), 200000, 778);
  const double ratio = locc.variance / lo.variance;
  const double target = 49.0 / 81.0;
  o.check(std::abs(ratio / target - 1) <= 0.25, fmt("ratio %.4f vs %.4f", ratio, target));
  o.detail = fmt("variance %.2f vs %.2f, ratio %.4f", locc.variance, lo.variance, ratio) + fmt(" (target %.4f)", target);
  return o;
}

Outcome effective_gamma_curve() {
  Outcome o;
  const std::vector<std::pair<int, double>> points{{1, 3.0}, {2, 2.64575}, {5, 2.29017}, {10, 2.14344}, {20, 2.07053}};
  double worst = 0;
  for (auto [k, v] : points) worst = std::max(worst, std::abs(knit::effective_gamma_k(oracle::cnot(), k) - v));
  o.check(worst <= 5e-5, fmt("deviation %.3g", worst));
  o.detail = fmt("max deviation %.2g", worst);
  return o;
}

Outcome crx_csv(const std::string& path) {
  Outcome o;
  std::ostringstream out, err;
  const int code = knit::cli::run({"sweep", "crx-bounds", "--from", "0", "--to", "2pi", "--step", "pi/100", "-o", path},
                                  out, err);
  o.check(code == 0, "sweep failed: " + err.str());
  if (code != 0) return o;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  o.check(line == "theta,lower,upper,upper_lo,upper_teleport", "header " + line);
  int rows = 0;
  double worst = 0;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
    const double t = v.at(0);
    const double s = std::abs(std::sin(t / 2));
    worst = std::max({worst, std::abs(v[1] - (1 + s)), std::abs(v[2] - std::min(1 + 2 * s, 2.0)),
                      std::abs(v[3] - (1 + 2 * s)), std::abs(v[4] - 2.0)});
    if (t >= kPi / 3 - 1e-12 && t <= 5 * kPi / 3 + 1e-12) o.check(v[2] == 2.0, fmt("upper at %.6f is not 2", t));
    ++rows;
  }
  o.check(rows == 201, fmt("%.0f rows", rows));
  o.check(worst <= 1e-9, fmt("formula deviation %.3g", worst));
  const auto end = knit::crx_bounds(kPi / 3);
  o.check(end.upper == 2.0 && knit::crx_bounds(5 * kPi / 3).upper == 2.0, "endpoint upper not exactly 2");
  if (o.pass) o.detail = fmt("%.0f rows, max deviation %.2g, written to ", rows, worst) + path;
  return o;
}

Outcome property_suites(const knit::CircuitIR& c) {
  Outcome o;
  std::mt19937_64 gen(1010);
  // Schmidt normalization.
  for (int trial = 0; trial < 50; ++trial) {
    const auto psi = oracle::random_state(16, gen);
    const auto s = knit::schmidt_decompose(psi, 4, 4);
    o.check(std::abs(s.coefficients.squaredNorm() - 1) <= 1e-12, "Schmidt normalization");
  }
  // KAK chamber and round trip.
  double worstKak = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const CMatrix u = oracle::haar_unitary(4, gen);
    const auto k = knit::kak(u);
    const bool chamber = k.thetaX <= kPi / 4 + 1e-9 && k.thetaX + 1e-9 >= k.thetaY &&
                         k.thetaY + 1e-9 >= std::abs(k.thetaZ);
    o.check(chamber, "Weyl chamber");
    worstKak = std::max(worstKak, (knit::reconstruct(k) - u).cwiseAbs().maxCoeff());
  }
  o.check(worstKak <= 1e-8, fmt("KAK round trip %.3g", worstKak));
  // Local-unitary invariance of the class and angles.
  for (int trial = 0; trial < 30; ++trial) {
    const CMatrix u = trial % 3 == 0 ? oracle::cnot() : trial % 3 == 1 ? oracle::swap_gate() : oracle::haar_unitary(4, gen);
    const auto a = knit::kak(u), b = knit::kak(dress(u, gen));
    o.check(knit::classify(a) == knit::classify(b), "KAK class changed under local unitaries");
    o.check(std::abs(a.thetaX - b.thetaX) + std::abs(a.thetaY - b.thetaY) + std::abs(a.thetaZ - b.thetaZ) <= 1e-8,
            "KAK angles changed under local unitaries");
  }
  // QPD identity.
  double worstQpd = 0;
  worstQpd = std::max(worstQpd, knit::qpd_identity_error(knit::lo_gate_qpd(oracle::cnot(), knit::default_atom_set())));
  worstQpd = std::max(worstQpd, knit::qpd_identity_error(knit::factory_qpd(oracle::cnot(), 2)));
  worstQpd = std::max(worstQpd, knit::qpd_identity_error(knit::oneway_variant(knit::factory_qpd(oracle::cnot(), 1))));
  worstQpd = std::max(worstQpd, knit::qpd_identity_error(knit::factory_qpd(oracle::iswap(), 1)));
  worstQpd = std::max(worstQpd, knit::qpd_identity_error(knit::vidal_state_qpd(oracle::random_state(8, gen), 1, 2)));
  o.check(worstQpd <= 1e-7, fmt("QPD identity %.3g", worstQpd));
  // Seed determinism.
  const auto plan = knit::default_plan(c, knit::Setting::LOCC, 2);
  const auto cuts = knit::build_cuts(c, plan);
  const auto r1 = knit::estimate(c, plan, cuts, 2000, 5, 1);
  const auto r2 = knit::estimate(c, plan, cuts, 2000, 5, 4);
  o.check(knit::estimate_to_json(r1) == knit::estimate_to_json(r2) && r1.mean == r2.mean, "seed determinism");
  if (o.pass) o.detail = fmt("KAK %.2g, QPD identity %.2g, determinism ok", worstKak, worstQpd);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string csvPath =
      argc > 1 ? argv[1] : (std::filesystem::temp_directory_path() / "crx_bounds.csv").string();
  const knit::CircuitIR circuit = load_circuit(std::string(KNIT_TEST_DATA_DIR) + "/two_cnot.json");
  const double exact = dense_expectation(circuit);

  struct Criterion {
    const char* name;
    double limitSeconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"closed-form gamma table", 1, closed_form_table},
      {"upper/lower bound agreement", 10, bound_agreement},
      {"LP optimality", 120, lp_optimality},
      {"Bell-batch gamma", 1, bell_batch},
      {"teleportation exactness", 5, teleport_exact},
      {"estimator unbiasedness", 180, [&] { return unbiasedness(circuit, exact); }},
      {"variance ratio LOCC k=2 : LO", 180, [&] { return variance_ratio(circuit); }},
      {"effective gamma curve", 1, effective_gamma_curve},
      {"controlled-rotation bounds CSV", 5, [&] { return crx_csv(csvPath); }},
      {"property suites", 120, [&] { return property_suites(circuit); }},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > criteria[i].limitSeconds) {
      o.pass = false;
      o.detail += fmt(" [over time budget %.0f s]", criteria[i].limitSeconds);
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %s  %s: %s (%.2f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
