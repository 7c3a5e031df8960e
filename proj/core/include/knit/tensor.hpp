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

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace knit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSvdTolerance = 1e-12;
inline constexpr double kSchmidtCutoff = 1e-12;

// Multi-qubit matrices list their qubits most significant first: for
// kron(a, b), factor `a` owns the high bits of the row index.
CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);
RMatrix kron(const RMatrix& a, const RMatrix& b);

CMatrix identity(int dim);
CMatrix pauli(int index);  // 0 = I, 1 = X, 2 = Y, 3 = Z
CMatrix pauli_string(int index, int numQubits);
CMatrix pauli_string(const std::string& letters);

bool is_unitary(const CMatrix& u, double tol = 1e-9);

struct Svd {
  CMatrix u;
  RVector s;  // descending
  CMatrix v;  // m = u * diag(s) * v^dagger
};

/// One-sided Jacobi SVD; converges to kSvdTolerance.
Svd jacobi_svd(const CMatrix& m);

struct SchmidtData {
  RVector coefficients;  // descending, strictly above kSchmidtCutoff
  CMatrix basisA;        // columns
  CMatrix basisB;        // columns
};

/// psi = sum_k c_k basisA_k (x) basisB_k with amplitude index iA * dimB + iB.
SchmidtData schmidt_decompose(const CVector& psi, int dimA, int dimB);

/// `dims` are listed most significant first; `keep` holds subsystem positions.
CMatrix partial_trace(const CMatrix& rho, const std::vector<int>& dims,
                      const std::vector<int>& keep);

/// Row-major superoperator S with vec(L(rho)) = S vec(rho).
CMatrix unitary_superop(const CMatrix& u);

/// R_ij = tr(P_i L(P_j)) / d. Throws NumericalError on a non-real result.
RMatrix ptm_from_superop(const CMatrix& superop, int numQubits);
RMatrix ptm_from_images(const std::vector<CMatrix>& images, int numQubits);
RMatrix unitary_ptm(const CMatrix& u);

}  // namespace knit
