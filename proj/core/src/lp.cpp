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

#include "knit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "knit/error.hpp"

namespace knit {

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Simplex {
  Tableau t;  // rows 0..m-1 constraints, row m objective; last column rhs
  std::vector<int> basis;
  int numCols = 0;  // structural + artificial
  const LpOptions& opt;
  int iterations = 0;

  Simplex(const LpOptions& o) : opt(o) {}

  int rows() const { return static_cast<int>(basis.size()); }
  int rhs() const { return numCols; }

  void pivot(int r, int j) {
    t.row(r) /= t(r, j);
    const Eigen::RowVectorXd prow = t.row(r);
    const Eigen::VectorXd pcol = t.col(j);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i == r || pcol(i) == 0.0) continue;
      t.row(i) -= pcol(i) * prow;
    }
    basis[r] = j;
    ++iterations;
  }

  LpStatus optimize(int allowedCols) {
    const int m = rows();
    int stall = 0;
    double lastObjective = t(m, rhs());
    while (true) {
      if (iterations >= opt.maxIterations) return LpStatus::ITERATION_LIMIT;
      const bool bland = stall > 50;
      int enter = -1;
      double best = -opt.optimalityTol;
      for (int j = 0; j < allowedCols; ++j) {
        const double rc = t(m, j);
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter < 0) return LpStatus::OPTIMAL;
      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = t(i, enter);
        if (a <= opt.pivotTol) continue;
        const double q = t(i, rhs()) / a;
        if (q < ratio - 1e-12 || (q <= ratio + 1e-12 && leave >= 0 && basis[i] < basis[leave])) {
          ratio = q;
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::UNBOUNDED;
      pivot(leave, enter);
      // The objective row stores -z, so progress means it increases.
      const double objective = t(m, rhs());
      if (objective > lastObjective + 1e-12) {
        stall = 0;
        lastObjective = objective;
      } else {
        ++stall;
      }
    }
  }
};

}  // namespace

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::OPTIMAL: return "optimal";
    case LpStatus::INFEASIBLE: return "infeasible";
    case LpStatus::UNBOUNDED: return "unbounded";
    case LpStatus::ITERATION_LIMIT: return "iteration limit";
  }
  return "?";
}

LpResult solve_lp(const RMatrix& a, const RVector& b, const RVector& c, const LpOptions& opt) {
  const int n = static_cast<int>(a.cols());
  if (b.size() != a.rows() || c.size() != n) throw InputError("solve_lp: dimension mismatch");

  std::vector<int> keep;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (a.row(i).cwiseAbs().maxCoeff() > opt.pivotTol) {
      keep.push_back(static_cast<int>(i));
    } else if (std::abs(b(i)) > opt.feasibilityTol) {
      LpResult r;
      r.status = LpStatus::INFEASIBLE;
      return r;
    }
  }
  const int m = static_cast<int>(keep.size());

  // Degenerate vertices stall the simplex; solve with b + A w for a small random w >= 0, which stays
  // feasible whenever b is, then recover the solution for b from the final basis.
  std::mt19937_64 gen(0x5eedULL);
  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  RVector w(n);
  for (int j = 0; j < n; ++j) w(j) = opt.perturbation * jitter(gen);
  const RVector bp = b + a * w;

  Simplex s(opt);
  s.numCols = n + m;
  s.t = Tableau::Zero(m + 1, n + m + 1);
  s.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    const double sign = bp(keep[i]) < 0 ? -1.0 : 1.0;
    s.t.row(i).head(n) = sign * a.row(keep[i]);
    s.t(i, n + i) = 1.0;
    s.t(i, s.rhs()) = sign * bp(keep[i]);
    s.basis[i] = n + i;
  }
  // Phase 1 objective: minimize the sum of artificials, reduced costs = -(column sums).
  for (int i = 0; i < m; ++i) s.t.row(m) -= s.t.row(i);
  for (int i = 0; i < m; ++i) s.t(m, n + i) = 0.0;

  LpResult result;
  LpStatus st = s.optimize(n);
  if (st == LpStatus::ITERATION_LIMIT) {
    result.status = st;
    result.iterations = s.iterations;
    return result;
  }
  if (-s.t(m, s.rhs()) > opt.feasibilityTol) {
    result.status = LpStatus::INFEASIBLE;
    result.iterations = s.iterations;
    return result;
  }

  // Drive artificials out of the basis; drop redundant rows.
  std::vector<int> dropRows;
  for (int i = 0; i < m; ++i) {
    if (s.basis[i] < n) continue;
    int col = -1;
    double big = opt.pivotTol * 100;
    for (int j = 0; j < n; ++j) {
      if (std::abs(s.t(i, j)) > big) {
        big = std::abs(s.t(i, j));
        col = j;
      }
    }
    if (col >= 0) {
      s.pivot(i, col);
    } else {
      dropRows.push_back(i);
    }
  }
  if (!dropRows.empty()) {
    Tableau reduced(m + 1 - static_cast<int>(dropRows.size()), s.t.cols());
    std::vector<int> newBasis;
    int r = 0;
    for (int i = 0; i <= m; ++i) {
      if (std::find(dropRows.begin(), dropRows.end(), i) != dropRows.end()) continue;
      reduced.row(r++) = s.t.row(i);
      if (i < m) newBasis.push_back(s.basis[i]);
    }
    s.t = std::move(reduced);
    s.basis = std::move(newBasis);
  }
  const int mr = s.rows();

  // Phase 2 objective row: reduced costs c_j - c_B B^-1 A_j, rhs = -c_B x_B.
  s.t.row(mr).setZero();
  s.t.row(mr).head(n) = c.transpose();
  for (int i = 0; i < mr; ++i) {
    const double cb = c(s.basis[i]);
    if (cb != 0.0) s.t.row(mr) -= cb * s.t.row(i);
  }
  st = s.optimize(n);
  result.status = st;
  result.iterations = s.iterations;
  if (st != LpStatus::OPTIMAL) return result;

  // Refine the basic solution against the original data.
  RMatrix basic(a.rows(), mr);
  for (int i = 0; i < mr; ++i) basic.col(i) = a.col(s.basis[i]);
  const RVector xb = basic.colPivHouseholderQr().solve(b);
  result.x = RVector::Zero(n);
  for (int i = 0; i < mr; ++i) result.x(s.basis[i]) = std::max(0.0, xb(i));
  result.objective = c.dot(result.x);
  result.residual = (a * result.x - b).cwiseAbs().maxCoeff();
  if (result.residual > opt.feasibilityTol) {
    // Fall back to the tableau values if the refinement is worse.
    RVector x = RVector::Zero(n);
    for (int i = 0; i < mr; ++i) x(s.basis[i]) = std::max(0.0, s.t(i, s.rhs()));
    const double res = (a * x - b).cwiseAbs().maxCoeff();
    if (res < result.residual) {
      result.x = x;
      result.residual = res;
      result.objective = c.dot(x);
    }
  }
  return result;
}

}  // namespace knit
