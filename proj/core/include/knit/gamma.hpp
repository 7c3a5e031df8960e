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

#include <optional>

#include "knit/kak.hpp"
#include "knit/tensor.hpp"

namespace knit {

/// 1 + 4|sx cx| + 4|sy cy| + 8|sx cx sy cy| for THETA_Z_ZERO, 7 for SWAP_CLASS.
/// Throws UnsupportedError for GENERAL gates.
double gamma_exact(const KakParams& k);
double gamma_exact(const CMatrix& u);

/// 1 + sum over ordered pairs i != j of |ui uj* + uj ui*| + |ui uj* - uj ui*|.
double gamma_lo_upper(const KakParams& k);
double gamma_lo_upper(const CMatrix& u);

/// 2 (sum of Schmidt coefficients)^2 - 1 for a normalized bipartite pure state.
double gamma_pure_state(const CVector& psi, int dimA, int dimB);

/// Schmidt coefficients of the normalized Choi state of `u` split AA' : BB'.
RVector choi_schmidt(const CMatrix& u, int dimA, int dimB);
/// Coefficient matrix of the Choi state, rows (a, a'), columns (b, b').
CMatrix choi_coefficients(const CMatrix& u, int dimA, int dimB);
double choi_schmidt_lower(const CMatrix& u, int dimA = 2, int dimB = 2);

/// (2 (sum alpha)^(2k) - 1)^(1/k). Throws InputError for non-Clifford `u` or k < 1.
double effective_gamma_k(const CMatrix& u, int k);

struct CrxBounds {
  double lower = 0;
  double upper = 0;
  double upperLo = 0;
  double upperTeleport = 2.0;
};

CrxBounds crx_bounds(double theta);

struct GammaReport {
  double gammaLO_upper = 0;
  double gammaLOCC_lower = 0;
  std::optional<double> gammaExact;
  double overheadSquared = 0;
  KakParams kak;
  KakClass kakClass = KakClass::GENERAL;
};

GammaReport gamma_report(const CMatrix& u);

}  // namespace knit
