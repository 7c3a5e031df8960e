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

#include "knit/kak.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "knit/error.hpp"

namespace knit {

namespace {

const Complex kI(0, 1);

CMatrix magic_basis() {
  CMatrix b(4, 4);
  b << 1, kI, 0, 0,
       0, 0, kI, 1,
       0, 0, kI, -1,
       1, -kI, 0, 0;
  return b / std::sqrt(2.0);
}

/// Diagonal of B^dagger (s (x) s) B for s = X, Y, Z.
const std::array<RVector, 3>& magic_signs() {
  static const std::array<RVector, 3> signs = [] {
    const CMatrix b = magic_basis();
    std::array<RVector, 3> out;
    for (int s = 0; s < 3; ++s) {
      const CMatrix d = b.adjoint() * kron(pauli(s + 1), pauli(s + 1)) * b;
      out[s] = d.diagonal().real();
    }
    return out;
  }();
  return signs;
}

/// Real orthogonal P (det +1) with P^T m P diagonal, for a complex symmetric unitary m.
RMatrix simultaneous_diagonalizer(const CMatrix& m) {
  const RMatrix re = m.real();
  const RMatrix im = m.imag();
  const double mixes[] = {0.7548776662466927, 1.3247179572447460, 0.3819660112501051,
                          2.2360679774997896, 0.1234567890123457};
  for (double r : mixes) {
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(re + r * im);
    RMatrix p = solver.eigenvectors();
    const CMatrix d = p.transpose().cast<Complex>() * m * p.cast<Complex>();
    const CMatrix off = d - CMatrix(d.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() > 1e-10) continue;

    // Deterministic ordering: eigenphase descending, then lexicographic on sign-fixed columns.
    std::vector<int> idx(4);
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = 0; k < 4; ++k) {
      Eigen::Index big = 0;
      p.col(k).cwiseAbs().maxCoeff(&big);
      if (p(big, k) < 0) p.col(k) = -p.col(k);
    }
    std::vector<double> phase(4);
    for (int k = 0; k < 4; ++k) phase[k] = std::arg(d(k, k));
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
      if (std::abs(phase[x] - phase[y]) > 1e-9) return phase[x] > phase[y];
      for (int j = 0; j < 4; ++j) {
        if (std::abs(p(j, x) - p(j, y)) > 1e-12) return p(j, x) < p(j, y);
      }
      return false;
    });
    RMatrix sorted(4, 4);
    for (int k = 0; k < 4; ++k) sorted.col(k) = p.col(idx[k]);
    if (sorted.determinant() < 0) sorted.col(3) = -sorted.col(3);
    return sorted;
  }
  throw NumericalError("kak: failed to diagonalize the magic-basis symmetric matrix");
}

/// Splits k ~ l1 (x) l2; returns {l1, l2} with k = l1 (x) l2 exactly up to numerical error.
std::pair<CMatrix, CMatrix> split_local(const CMatrix& k) {
  int bi = 0;
  int bj = 0;
  double best = -1;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double n = k.block(2 * i, 2 * j, 2, 2).norm();
      if (n > best) {
        best = n;
        bi = i;
        bj = j;
      }
    }
  const CMatrix block = k.block(2 * bi, 2 * bj, 2, 2);
  CMatrix l2 = block * (std::sqrt(2.0) / block.norm());
  CMatrix l1(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) l1(i, j) = (l2.adjoint() * k.block(2 * i, 2 * j, 2, 2)).trace() / 2.0;
  return {l1, l2};
}

struct Canonicalizer {
  KakParams& k;
  std::array<double*, 3> angle{&k.thetaX, &k.thetaY, &k.thetaZ};

  void shift(int axis, double direction) {
    // exp(i t SS) = exp(i (t - d pi/2) SS) * (i d SS)
    *angle[axis] -= direction * kPi / 2;
    k.b1 = pauli(axis + 1) * k.b1;
    k.b2 = pauli(axis + 1) * k.b2;
    k.globalPhase *= Complex(0, direction);
  }

  void transpose(int x, int y) {
    CMatrix w(2, 2);
    const int pair = x + y;
    if (pair == 1) {
      w << 1, 0, 0, kI;
    } else if (pair == 3) {
      w << 1, -kI, -kI, 1;
      w /= std::sqrt(2.0);
    } else {
      w << 1, 1, 1, -1;
      w /= std::sqrt(2.0);
    }
    k.a1 = k.a1 * w.adjoint();
    k.a2 = k.a2 * w.adjoint();
    k.b1 = w * k.b1;
    k.b2 = w * k.b2;
    std::swap(*angle[x], *angle[y]);
  }

  void flip(int x, int y) {
    const CMatrix p = pauli(3 - x - y + 1);
    k.a1 = k.a1 * p;
    k.b1 = p * k.b1;
    *angle[x] = -*angle[x];
    *angle[y] = -*angle[y];
  }

  void run() {
    for (int a = 0; a < 3; ++a) {
      while (*angle[a] > kPi / 4 + kKakTolerance) shift(a, 1.0);
      while (*angle[a] <= -kPi / 4 + kKakTolerance) shift(a, -1.0);
    }
    for (int pass = 0; pass < 3; ++pass) {
      for (int a = 0; a < 2; ++a) {
        if (std::abs(*angle[a]) < std::abs(*angle[a + 1])) transpose(a, a + 1);
      }
    }
    if (*angle[0] < 0 && *angle[1] < 0) {
      flip(0, 1);
    } else if (*angle[0] < 0) {
      flip(0, 2);
    } else if (*angle[1] < 0) {
      flip(1, 2);
    }
    if (std::abs(*angle[0] - kPi / 4) <= kKakTolerance && *angle[2] < 0) {
      shift(0, 1.0);
      flip(0, 2);
    }
  }
};

}  // namespace

CMatrix canonical_gate(double tx, double ty, double tz) {
  const auto u = u_coefficients(tx, ty, tz);
  CMatrix out = CMatrix::Zero(4, 4);
  for (int s = 0; s < 4; ++s) out += u[s] * kron(pauli(s), pauli(s));
  return out;
}

CMatrix reconstruct(const KakParams& k) {
  return k.globalPhase * kron(k.a1, k.a2) * canonical_gate(k.thetaX, k.thetaY, k.thetaZ) * kron(k.b1, k.b2);
}

KakParams kak(const CMatrix& u) {
  if (u.rows() != 4 || u.cols() != 4 || !is_unitary(u, 1e-10)) {
    throw InputError("kak: input is not a 4x4 unitary");
  }
  const Complex det = u.determinant();
  const Complex root = std::polar(1.0, std::arg(det) / 4.0);
  const CMatrix su = u / root;
  const CMatrix b = magic_basis();
  const CMatrix up = b.adjoint() * su * b;
  const CMatrix m = up.transpose() * up;
  const RMatrix p = simultaneous_diagonalizer(m);
  const CMatrix pc = p.cast<Complex>();
  const CMatrix d = pc.transpose() * m * pc;

  std::array<Complex, 4> f;
  Complex prod = 1;
  for (int j = 0; j < 4; ++j) {
    f[j] = std::sqrt(d(j, j));
    prod *= f[j];
  }
  if (prod.real() < 0) f[0] = -f[0];
  CMatrix finv = CMatrix::Zero(4, 4);
  for (int j = 0; j < 4; ++j) finv(j, j) = 1.0 / f[j];
  const CMatrix o1 = up * pc * finv;
  if (o1.imag().cwiseAbs().maxCoeff() > 1e-7) throw NumericalError("kak: left factor is not real");
  const CMatrix o1r = o1.real().cast<Complex>();

  const auto [a1, a2] = split_local(b * o1r * b.adjoint());
  const auto [b1, b2] = split_local(b * pc.transpose() * b.adjoint());

  const auto& signs = magic_signs();
  Eigen::Matrix4d sys;
  Eigen::Vector4d phi;
  for (int j = 0; j < 4; ++j) {
    sys(j, 0) = 1.0;
    for (int s = 0; s < 3; ++s) sys(j, s + 1) = signs[s](j);
    phi(j) = std::arg(f[j]);
  }
  const Eigen::Vector4d sol = sys.partialPivLu().solve(phi);

  KakParams k;
  k.a1 = a1;
  k.a2 = a2;
  k.b1 = b1;
  k.b2 = b2;
  k.thetaX = sol(1);
  k.thetaY = sol(2);
  k.thetaZ = sol(3);
  k.globalPhase = root * std::polar(1.0, sol(0));
  Canonicalizer{k}.run();
  for (double* a : {&k.thetaX, &k.thetaY, &k.thetaZ}) *a += 0.0;

  const double err = (reconstruct(k) - u).cwiseAbs().maxCoeff();
  if (err > 1e-8) throw NumericalError("kak: reconstruction error " + std::to_string(err));
  return k;
}

std::array<Complex, 4> u_coefficients(double tx, double ty, double tz) {
  const double cx = std::cos(tx), sx = std::sin(tx);
  const double cy = std::cos(ty), sy = std::sin(ty);
  const double cz = std::cos(tz), sz = std::sin(tz);
  // Products of (c + i s SS) using XX.YY = -ZZ and cyclic.
  return {Complex(cx * cy * cz, sx * sy * sz), Complex(cx * sy * sz, sx * cy * cz),
          Complex(sx * cy * sz, cx * sy * cz), Complex(sx * sy * cz, cx * cy * sz)};
}

std::array<Complex, 4> u_coefficients(const KakParams& k) {
  return u_coefficients(k.thetaX, k.thetaY, k.thetaZ);
}

KakClass classify(const KakParams& k) {
  if (std::abs(k.thetaZ) <= kKakTolerance) return KakClass::THETA_Z_ZERO;
  const double q = kPi / 4;
  if (std::abs(k.thetaX - q) <= kKakTolerance && std::abs(k.thetaY - q) <= kKakTolerance &&
      std::abs(k.thetaZ - q) <= kKakTolerance) {
    return KakClass::SWAP_CLASS;
  }
  return KakClass::GENERAL;
}

std::string to_string(KakClass c) {
  switch (c) {
    case KakClass::THETA_Z_ZERO: return "THETA_Z_ZERO";
    case KakClass::SWAP_CLASS: return "SWAP_CLASS";
    case KakClass::GENERAL: return "GENERAL";
  }
  return "?";
}

}  // namespace knit
