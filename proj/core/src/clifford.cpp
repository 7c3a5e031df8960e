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

#include "knit/clifford.hpp"

#include <cmath>

#include "knit/error.hpp"

namespace knit {

namespace {

int letter_index(char c) {
  switch (c) {
    case 'I': return 0;
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
  }
  throw InputError(std::string("invalid Pauli letter '") + c + "'");
}

const char kLetters[] = "IXYZ";

/// sigma_a sigma_b = i^phase sigma_c
std::pair<int, int> multiply_letters(int a, int b) {
  if (a == 0) return {0, b};
  if (b == 0) return {0, a};
  if (a == b) return {0, 0};
  const int c = 6 - a - b;
  const bool cyclic = (b - a + 3) % 3 == 1;
  return {cyclic ? 1 : 3, c};
}

std::optional<PauliString> as_pauli(const CMatrix& v, int n, double tol) {
  const long count = 1L << (2 * n);
  const double d = static_cast<double>(1L << n);
  std::optional<PauliString> found;
  for (long j = 0; j < count; ++j) {
    std::string letters(n, 'I');
    for (int q = 0; q < n; ++q) letters[q] = kLetters[(j >> (2 * (n - 1 - q))) & 3];
    const Complex c = (pauli_string(letters) * v).trace() / d;
    if (std::abs(c) < tol) continue;
    if (found) return std::nullopt;
    if (std::abs(c.imag()) > tol || std::abs(std::abs(c.real()) - 1.0) > tol) return std::nullopt;
    found = PauliString{c.real() > 0 ? 0 : 2, letters};
  }
  return found;
}

}  // namespace

CMatrix PauliString::matrix() const {
  Complex ph(1, 0);
  for (int k = 0; k < phase; ++k) ph *= Complex(0, 1);
  return ph * pauli_string(letters);
}

std::string PauliString::str() const {
  static const char* prefix[] = {"+", "+i", "-", "-i"};
  return std::string(prefix[phase & 3]) + letters;
}

PauliString parse_pauli(const std::string& text) {
  PauliString p;
  size_t pos = 0;
  if (text.compare(0, 2, "-i") == 0) {
    p.phase = 3;
    pos = 2;
  } else if (text.compare(0, 2, "+i") == 0) {
    p.phase = 1;
    pos = 2;
  } else if (!text.empty() && text[0] == '-') {
    p.phase = 2;
    pos = 1;
  } else if (!text.empty() && text[0] == '+') {
    pos = 1;
  } else if (!text.empty() && text[0] == 'i') {
    p.phase = 1;
    pos = 1;
  }
  p.letters = text.substr(pos);
  if (p.letters.empty()) throw InputError("empty Pauli string");
  for (char c : p.letters) letter_index(c);
  return p;
}

PauliString operator*(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) throw InputError("Pauli strings of different lengths");
  PauliString out{a.phase + b.phase, std::string(a.size(), 'I')};
  for (int q = 0; q < a.size(); ++q) {
    const auto [ph, c] = multiply_letters(letter_index(a.letters[q]), letter_index(b.letters[q]));
    out.phase += ph;
    out.letters[q] = kLetters[c];
  }
  out.phase &= 3;
  return out;
}

std::optional<Tableau> Tableau::try_from_unitary(const CMatrix& u, double tol) {
  int n = 0;
  while ((1L << n) < u.rows()) ++n;
  if ((1L << n) != u.rows() || u.rows() != u.cols() || !is_unitary(u, tol)) return std::nullopt;
  Tableau t;
  for (int q = 0; q < n; ++q) {
    std::string x(n, 'I');
    std::string z(n, 'I');
    x[q] = 'X';
    z[q] = 'Z';
    auto xi = as_pauli(u * pauli_string(x) * u.adjoint(), n, tol);
    auto zi = as_pauli(u * pauli_string(z) * u.adjoint(), n, tol);
    if (!xi || !zi) return std::nullopt;
    t.xImages_.push_back(*xi);
    t.zImages_.push_back(*zi);
  }
  return t;
}

Tableau Tableau::from_unitary(const CMatrix& u, double tol) {
  auto t = try_from_unitary(u, tol);
  if (!t) throw InputError("unitary is not a Clifford operation");
  return *t;
}

PauliString Tableau::conjugate(const PauliString& p) const {
  const int n = num_qubits();
  if (p.size() != n) throw InputError("Pauli string length does not match the tableau");
  PauliString out{p.phase, std::string(n, 'I')};
  for (int q = 0; q < n; ++q) {
    switch (p.letters[q]) {
      case 'I': break;
      case 'X': out = out * xImages_[q]; break;
      case 'Z': out = out * zImages_[q]; break;
      case 'Y': {
        // Y = i X Z
        out = out * xImages_[q] * zImages_[q];
        out.phase = (out.phase + 1) & 3;
        break;
      }
    }
  }
  return out;
}

bool is_clifford(const CMatrix& u, double tol) { return Tableau::try_from_unitary(u, tol).has_value(); }

PauliString pauli_conjugate(const CMatrix& u, const PauliString& p) {
  return Tableau::from_unitary(u).conjugate(p);
}

const std::vector<CMatrix>& single_qubit_cliffords() {
  static const std::vector<CMatrix> group = [] {
    CMatrix h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    CMatrix s = CMatrix::Identity(2, 2);
    s(1, 1) = Complex(0, 1);
    std::vector<CMatrix> out{identity(2)};
    auto known = [&](const CMatrix& m) {
      for (const auto& g : out) {
        const Complex overlap = (g.adjoint() * m).trace() / 2.0;
        if (std::abs(std::abs(overlap) - 1.0) < 1e-9) return true;
      }
      return false;
    };
    for (size_t k = 0; k < out.size() && out.size() < 24; ++k) {
      for (const CMatrix* gen : {&h, &s}) {
        CMatrix next = *gen * out[k];
        if (!known(next)) out.push_back(next);
      }
    }
    return out;
  }();
  return group;
}

}  // namespace knit
