// Copyright 2026 The qetlab Authors
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

// Pauli-string operator algebra on N-qubit chains.
//
// Basis convention, shared by every module: site n is bit n of the
// computational-basis index, so site 0 is the least-significant qubit.
// Bit value 0 is the +1 eigenstate of Z.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace qet {

using cplx = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;

/// Hard upper bound imposed by the 64-bit site masks.
inline constexpr std::size_t kMaxQubits = 30;
/// Default limit for materializing 2^N x 2^N matrices.
inline constexpr std::size_t kDenseLimit = 14;
/// Merged coefficients with modulus below this are dropped.
inline constexpr double kPruneTolerance = 1e-12;

enum class Pauli : std::uint8_t { X, Y, Z };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Tensor product of single-site Paulis, stored as symplectic bit masks.
///
/// A site with bit set only in `x` carries X, only in `z` carries Z, in both
/// carries Y. The represented operator is i^{|x&z|} X^x Z^z, so every
/// PauliString is Hermitian with unit phase.
class PauliString {
 public:
  PauliString() = default;
  PauliString(std::uint64_t x_mask, std::uint64_t z_mask) : x_(x_mask), z_(z_mask) {}

  /// Builds from (site, axis) pairs; throws ContractError on repeated sites.
  static PauliString from_factors(const std::vector<std::pair<std::size_t, Pauli>>& factors);

  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  std::uint64_t support() const { return x_ | z_; }
  bool is_identity() const { return support() == 0; }
  int weight() const;
  std::optional<Pauli> at(std::size_t site) const;
  std::map<std::size_t, Pauli> factors() const;
  /// Highest occupied site plus one (0 for the identity).
  std::size_t extent() const;

  /// True iff the two strings commute.
  bool commutes_with(const PauliString& other) const;

  /// Compact label such as "X1 Y4"; "I" for the identity.
  std::string label() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString& a, const PauliString& b) {
    return std::pair(a.x_, a.z_) <=> std::pair(b.x_, b.z_);
  }

 private:
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliTerm {
  cplx coefficient{1.0, 0.0};
  PauliString string;

  PauliTerm() = default;
  PauliTerm(cplx c, PauliString s) : coefficient(c), string(s) {}
  PauliTerm(cplx c, const std::vector<std::pair<std::size_t, Pauli>>& factors)
      : coefficient(c), string(PauliString::from_factors(factors)) {}
};

/// Product of two terms: coefficients multiply, strings compose with the
/// Pauli-group phase (XY = iZ and cyclic).
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

/// Weighted sum of Pauli strings on a fixed number of qubits, kept in
/// canonical form (sorted by string, duplicates merged, tiny terms pruned).
class OperatorSum {
 public:
  explicit OperatorSum(std::size_t num_qubits);
  OperatorSum(std::size_t num_qubits, std::vector<PauliTerm> terms);

  static OperatorSum identity(std::size_t num_qubits, cplx scale = 1.0);
  static OperatorSum single(std::size_t num_qubits, PauliTerm term);
  static OperatorSum single_site(std::size_t num_qubits, Pauli axis, std::size_t site,
                                 cplx scale = 1.0);

  std::size_t num_qubits() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Union of the supports of all non-identity terms.
  std::uint64_t support() const;
  /// Coefficient of the given string (0 if absent).
  cplx coefficient_of(const PauliString& s) const;

  double max_imag_coefficient() const;
  bool is_hermitian(double tol = kPruneTolerance) const;

  OperatorSum adjoint() const;

  OperatorSum& operator+=(const OperatorSum& other);
  OperatorSum& operator-=(const OperatorSum& other);
  OperatorSum& operator*=(cplx scale);

  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
  friend OperatorSum operator*(OperatorSum a, cplx s) { return a *= s; }
  friend OperatorSum operator*(cplx s, OperatorSum a) { return a *= s; }
  /// Symbolic operator product.
  friend OperatorSum operator*(const OperatorSum& a, const OperatorSum& b);

 private:
  void canonicalize();

  std::size_t n_;
  std::vector<PauliTerm> terms_;
};

/// ab - ba, computed term-by-term with Pauli multiplication rules.
OperatorSum commutator(const OperatorSum& a, const OperatorSum& b);

/// Dense 2^N x 2^N matrix; throws SizeError beyond `dense_limit` qubits.
DenseMatrix to_matrix(const OperatorSum& op, std::size_t dense_limit = kDenseLimit);

/// out = op * in, without materializing the matrix.
void apply(const OperatorSum& op, const StateVector& in, StateVector& out);
StateVector apply(const OperatorSum& op, const StateVector& in);

/// <state|op|state>; throws NormalizationError if |state| deviates from 1 by
/// more than 1e-10.
cplx expectation(const StateVector& state, const OperatorSum& op);

/// <bra|op|ket> without normalization checks.
cplx matrix_element(const StateVector& bra, const OperatorSum& op, const StateVector& ket);

nlohmann::json to_json(const OperatorSum& op);
OperatorSum operator_sum_from_json(std::size_t num_qubits, const nlohmann::json& j);

}  // namespace qet
