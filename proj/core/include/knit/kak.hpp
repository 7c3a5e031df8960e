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

#include <array>

#include "knit/tensor.hpp"

namespace knit {

/// u = globalPhase * (a1 (x) a2) * exp(i(tx XX + ty YY + tz ZZ)) * (b1 (x) b2),
/// with pi/4 >= tx >= ty >= |tz| and tz >= 0 whenever tx == pi/4.
struct KakParams {
  double thetaX = 0;
  double thetaY = 0;
  double thetaZ = 0;
  CMatrix a1, a2, b1, b2;
  Complex globalPhase{1, 0};
};

enum class KakClass { THETA_Z_ZERO, SWAP_CLASS, GENERAL };

inline constexpr double kKakTolerance = 1e-9;

KakParams kak(const CMatrix& u);
CMatrix canonical_gate(double thetaX, double thetaY, double thetaZ);
CMatrix reconstruct(const KakParams& k);

/// Coefficients of exp(i(tx XX + ty YY + tz ZZ)) in the basis {II, XX, YY, ZZ}.
std::array<Complex, 4> u_coefficients(const KakParams& k);
std::array<Complex, 4> u_coefficients(double thetaX, double thetaY, double thetaZ);

KakClass classify(const KakParams& k);
std::string to_string(KakClass c);

}  // namespace knit
