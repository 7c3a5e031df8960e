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
#include <string>
#include <vector>

#include "knit/tensor.hpp"

namespace knit {

/// i^phase * (letters[0] (x) letters[1] (x) ...), letters in {I, X, Y, Z}.
struct PauliString {
  int phase = 0;
  std::string letters;

  int size() const { return static_cast<int>(letters.size()); }
  CMatrix matrix() const;
  std::string str() const;
  bool operator==(const PauliString& other) const = default;
};

PauliString parse_pauli(const std::string& text);  // optional leading sign "+", "-", "i", "-i"
PauliString operator*(const PauliString& a, const PauliString& b);

/// Images of X_j and Z_j under conjugation by a Clifford unitary.
class Tableau {
 public:
  /// Throws InputError if `u` is not Clifford within `tol`.
  static Tableau from_unitary(const CMatrix& u, double tol = 1e-9);
  static std::optional<Tableau> try_from_unitary(const CMatrix& u, double tol = 1e-9);

  int num_qubits() const { return static_cast<int>(xImages_.size()); }
  const PauliString& x_image(int q) const { return xImages_.at(q); }
  const PauliString& z_image(int q) const { return zImages_.at(q); }

  /// U P U^dagger.
  PauliString conjugate(const PauliString& p) const;

 private:
  std::vector<PauliString> xImages_;
  std::vector<PauliString> zImages_;
};

bool is_clifford(const CMatrix& u, double tol = 1e-9);
PauliString pauli_conjugate(const CMatrix& u, const PauliString& p);

/// The 24 single-qubit Clifford unitaries, identity first.
const std::vector<CMatrix>& single_qubit_cliffords();

}  // namespace knit
