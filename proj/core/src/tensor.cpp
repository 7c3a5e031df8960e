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

#include "knit/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "knit/error.hpp"

namespace knit {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

RMatrix kron(const RMatrix& a, const RMatrix& b) {
  RMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix identity(int dim) { return CMatrix::Identity(dim, dim); }

CMatrix pauli(int index) {
  const Complex i(0.0, 1.0);
  CMatrix p(2, 2);
  switch (index) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -i, i, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw InputError("pauli index out of range: " + std::to_string(index));
  }
  return p;
}

CMatrix pauli_string(int index, int numQubits) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = numQubits - 1; q >= 0; --q) {
    out = kron(out, pauli((index >> (2 * q)) & 3));
  }
  return out;
}

CMatrix pauli_string(const std::string& letters) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (char c : letters) {
    switch (c) {
      case 'I': out = kron(out, pauli(0)); break;
      case 'X': out = kron(out, pauli(1)); break;
      case 'Y': out = kron(out, pauli(2)); break;
      case 'Z': out = kron(out, pauli(3)); break;
      default: throw InputError(std::string("invalid Pauli letter '") + c + "'");
    }
  }
  return out;
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

Svd jacobi_svd(const CMatrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  CMatrix a = m;
  CMatrix v = CMatrix::Identity(cols, cols);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < cols; ++p) {
      for (Eigen::Index q = p + 1; q < cols; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const Complex gamma = a.col(p).dot(a.col(q));
        const double g = std::abs(gamma);
        if (g <= kSvdTolerance * std::sqrt(alpha * beta) || g == 0.0) continue;
        rotated = true;
        const Complex phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        CVector ap = a.col(p);
        CVector aq = a.col(q) * phase;
        a.col(p) = c * ap - s * aq;
        a.col(q) = s * ap + c * aq;
        CVector vp = v.col(p);
        CVector vq = v.col(q) * phase;
        v.col(p) = c * vp - s * vq;
        v.col(q) = s * vp + c * vq;
      }
    }
    if (!rotated) break;
  }
  std::vector<Eigen::Index> order(cols);
  std::iota(order.begin(), order.end(), 0);
  RVector norms(cols);
  for (Eigen::Index k = 0; k < cols; ++k) norms(k) = a.col(k).norm();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return norms(x) > norms(y); });
  Svd out;
  out.u = CMatrix::Zero(rows, cols);
  out.s = RVector(cols);
  out.v = CMatrix(cols, cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    const Eigen::Index src = order[k];
    out.s(k) = norms(src);
    if (norms(src) > 0) out.u.col(k) = a.col(src) / norms(src);
    out.v.col(k) = v.col(src);
  }
  return out;
}

SchmidtData schmidt_decompose(const CVector& psi, int dimA, int dimB) {
  if (dimA <= 0 || dimB <= 0 || psi.size() != static_cast<Eigen::Index>(dimA) * dimB) {
    throw InputError("schmidt_decompose: state length " + std::to_string(psi.size()) +
                     " does not match " + std::to_string(dimA) + "x" + std::to_string(dimB));
  }
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    throw InputError("schmidt_decompose: state is not normalized (norm " + std::to_string(norm) + ")");
  }
  CMatrix m(dimA, dimB);
  for (int i = 0; i < dimA; ++i)
    for (int j = 0; j < dimB; ++j) m(i, j) = psi(i * dimB + j);
  const bool transpose = dimB > dimA;
  Svd svd = jacobi_svd(transpose ? CMatrix(m.transpose()) : m);
  // For the transposed problem m^T = u s v^dagger, so m = conj(v) s u^T.
  const CMatrix left = transpose ? CMatrix(svd.v.conjugate()) : svd.u;
  const CMatrix right = transpose ? svd.u : CMatrix(svd.v.conjugate());
  int rank = 0;
  while (rank < svd.s.size() && svd.s(rank) > kSchmidtCutoff) ++rank;
  SchmidtData out;
  out.coefficients = svd.s.head(rank);
  out.basisA = left.leftCols(rank);
  out.basisB = right.leftCols(rank);
  return out;
}

CMatrix partial_trace(const CMatrix& rho, const std::vector<int>& dims,
                      const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  long total = 1;
  for (int d : dims) total *= d;
  if (rho.rows() != total || rho.cols() != total) {
    throw InputError("partial_trace: matrix size does not match subsystem dims");
  }
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n || kept[k]) throw InputError("partial_trace: invalid keep list");
    kept[k] = true;
  }
  std::vector<int> keptList;
  std::vector<int> tracedList;
  for (int k = 0; k < n; ++k) (kept[k] ? keptList : tracedList).push_back(k);
  long dimKeep = 1;
  long dimTrace = 1;
  for (int k : keptList) dimKeep *= dims[k];
  for (int k : tracedList) dimTrace *= dims[k];

  std::vector<long> stride(n, 1);
  for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];
  auto compose = [&](long keepIdx, long traceIdx) {
    long idx = 0;
    for (int j = static_cast<int>(tracedList.size()) - 1; j >= 0; --j) {
      const int k = tracedList[j];
      idx += (traceIdx % dims[k]) * stride[k];
      traceIdx /= dims[k];
    }
    for (int j = static_cast<int>(keptList.size()) - 1; j >= 0; --j) {
      const int k = keptList[j];
      idx += (keepIdx % dims[k]) * stride[k];
      keepIdx /= dims[k];
    }
    return idx;
  };
  CMatrix out = CMatrix::Zero(dimKeep, dimKeep);
  for (long r = 0; r < dimKeep; ++r)
    for (long c = 0; c < dimKeep; ++c)
      for (long t = 0; t < dimTrace; ++t) out(r, c) += rho(compose(r, t), compose(c, t));
  return out;
}

CMatrix unitary_superop(const CMatrix& u) { return kron(u, CMatrix(u.conjugate())); }

namespace {

CMatrix pauli_vec_basis(int numQubits) {
  const long d = 1L << numQubits;
  const long count = d * d;
  CMatrix w(count, count);
  for (long j = 0; j < count; ++j) {
    const CMatrix p = pauli_string(static_cast<int>(j), numQubits);
    for (long x = 0; x < d; ++x)
      for (long y = 0; y < d; ++y) w(x * d + y, j) = p(x, y);
  }
  return w;
}

RMatrix real_or_throw(const CMatrix& m) {
  const double imag = m.imag().cwiseAbs().maxCoeff();
  if (imag > 1e-10 * std::max(1.0, m.real().cwiseAbs().maxCoeff())) {
    throw NumericalError("PTM has imaginary entries up to " + std::to_string(imag));
  }
  return m.real();
}

}  // namespace

RMatrix ptm_from_superop(const CMatrix& superop, int numQubits) {
  const long d = 1L << numQubits;
  if (superop.rows() != d * d || superop.cols() != d * d) {
    throw InputError("ptm_from_superop: superoperator size mismatch");
  }
  const CMatrix w = pauli_vec_basis(numQubits);
  return real_or_throw(w.adjoint() * superop * w / static_cast<double>(d));
}

RMatrix ptm_from_images(const std::vector<CMatrix>& images, int numQubits) {
  const long d = 1L << numQubits;
  const long count = d * d;
  if (static_cast<long>(images.size()) != count) {
    throw InputError("ptm_from_images: expected 4^n basis images");
  }
  CMatrix r(count, count);
  for (long i = 0; i < count; ++i) {
    const CMatrix p = pauli_string(static_cast<int>(i), numQubits);
    for (long j = 0; j < count; ++j) r(i, j) = (p * images[j]).trace() / static_cast<double>(d);
  }
  return real_or_throw(r);
}

RMatrix unitary_ptm(const CMatrix& u) {
  int n = 0;
  while ((1L << n) < u.rows()) ++n;
  if ((1L << n) != u.rows()) throw InputError("unitary_ptm: dimension is not a power of two");
  return ptm_from_superop(unitary_superop(u), n);
}

}  // namespace knit
