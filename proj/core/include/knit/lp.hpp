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

#include <string>

#include "knit/tensor.hpp"

namespace knit {

struct LpOptions {
  double optimalityTol = 1e-9;
  double feasibilityTol = 1e-8;
  double pivotTol = 1e-10;
  int maxIterations = 200000;
  double perturbation = 1e-7;  // scale of the anti-degeneracy shift of b
};

enum class LpStatus { OPTIMAL, INFEASIBLE, UNBOUNDED, ITERATION_LIMIT };

struct LpResult {
  LpStatus status = LpStatus::INFEASIBLE;
  RVector x;
  double objective = 0;
  int iterations = 0;
  double residual = 0;  // max |A x - b|
};

/// min c^T x subject to A x = b, x >= 0; dense two-phase simplex with Dantzig pricing
/// and a Bland fallback on degenerate stalls.
LpResult solve_lp(const RMatrix& a, const RVector& b, const RVector& c, const LpOptions& options = {});

std::string to_string(LpStatus status);

}  // namespace knit
