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

#include "knit/gamma.hpp"

#include <cmath>

#include "knit/clifford.hpp"
#include "knit/error.hpp"

namespace knit {

double gamma_exact(const KakParams& k) {
  switch (classify(k)) {
    case KakClass::SWAP_CLASS:
      return 7.0;
    case KakClass::THETA_Z_ZERO: {
      const double x = std::abs(std::sin(k.thetaX) * std::cos(k.thetaX));
      const double y = std::abs(std::sin(k.thetaY) * std::cos(k.thetaY));
      return 1.0 + 4.0 * x + 4.0 * y + 8.0 * x * y;
    }
    case KakClass::GENERAL:
      break;
  }
  throw UnsupportedError("exact LO gamma is only known for thetaZ = 0 or the SWAP class");
}

double gamma_exact(const CMatrix& u) { return gamma_exact(kak(u)); }

double gamma_lo_upper(const KakParams& k) {
  const auto u = u_coefficients(k);
  double total = 1.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const Complex a = u[i] * std::conj(u[j]);
      const Complex b = u[j] * std::conj(u[i]);
      total += std::abs(a + b) + std::abs(a - b);
    }
  return total;
}

double gamma_lo_upper(const CMatrix& u) { return gamma_lo_upper(kak(u)); }

double gamma_pure_state(const CVector& psi, int dimA, int dimB) {
  const double sum = schmidt_decompose(psi, dimA, dimB).coefficients.sum();
  return 2.0 * sum * sum - 1.0;
}

CMatrix choi_coefficients(const CMatrix& u, int dimA, int dimB) {
  const int d = dimA * dimB;
  if (u.rows() != d || u.cols() != d || !is_unitary(u, 1e-9)) {
    throw InputError("choi: expected a " + std::to_string(d) + "x" + std::to_string(d) + " unitary");
  }
  CMatrix m(dimA * dimA, dimB * dimB);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int a = 0; a < dimA; ++a)
    for (int x = 0; x < dimA; ++x)
      for (int b = 0; b < dimB; ++b)
        for (int y = 0; y < dimB; ++y) m(a * dimA + x, b * dimB + y) = norm * u(a * dimB + b, x * dimB + y);
  return m;
}

RVector choi_schmidt(const CMatrix& u, int dimA, int dimB) {
  const CMatrix m = choi_coefficients(u, dimA, dimB);
  CVector psi(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) psi(r * m.cols() + c) = m(r, c);
  return schmidt_decompose(psi, static_cast<int>(m.rows()), static_cast<int>(m.cols())).coefficients;
}

double choi_schmidt_lower(const CMatrix& u, int dimA, int dimB) {
  const double sum = choi_schmidt(u, dimA, dimB).sum();
  return 2.0 * sum * sum - 1.0;
}

double effective_gamma_k(const CMatrix& u, int k) {
  if (k < 1) throw InputError("effective_gamma_k: k must be at least 1");
  if (!is_clifford(u)) throw InputError("effective_gamma_k: gate is not Clifford");
  int n = 0;
  while ((1L << n) < u.rows()) ++n;
  if (n != 2) throw InputError("effective_gamma_k: expected a two-qubit gate");
  const double sum = choi_schmidt(u, 2, 2).sum();
  return std::pow(2.0 * std::pow(sum, 2.0 * k) - 1.0, 1.0 / k);
}

CrxBounds crx_bounds(double theta) {
  const double s = std::abs(std::sin(theta / 2.0));
  CrxBounds b;
  b.lower = 1.0 + s;
  b.upperLo = 1.0 + 2.0 * s;
  b.upperTeleport = 2.0;
  // Snap rounding noise so the envelope is exactly 2 from pi/3 to 5pi/3 inclusive.
  b.upper = b.upperLo >= b.upperTeleport - 1e-12 ? b.upperTeleport : b.upperLo;
  return b;
}

GammaReport gamma_report(const CMatrix& u) {
  GammaReport r;
  r.kak = kak(u);
  r.kakClass = classify(r.kak);
  r.gammaLO_upper = gamma_lo_upper(r.kak);
  r.gammaLOCC_lower = choi_schmidt_lower(u);
  if (r.kakClass != KakClass::GENERAL) r.gammaExact = gamma_exact(r.kak);
  const double best = r.gammaExact.value_or(r.gammaLO_upper);
  r.overheadSquared = best * best;
  return r;
}

}  // namespace knit
