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

#include "qetlab/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "qetlab/errors.hpp"

namespace qet {

namespace {

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

cplx i_pow(int e) { return kIPow[((e % 4) + 4) % 4]; }

int popcount(std::uint64_t v) { return std::popcount(v); }

void check_site(std::size_t site) {
  if (site >= kMaxQubits) {
    throw ContractError("site index " + std::to_string(site) + " exceeds the supported maximum");
  }
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::X:
      return 'X';
    case Pauli::Y:
      return 'Y';
    case Pauli::Z:
      return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'X':
    case 'x':
      return Pauli::X;
    case 'Y':
    case 'y':
      return Pauli::Y;
    case 'Z':
    case 'z':
      return Pauli::Z;
    default:
      throw ContractError(std::string("unknown Pauli axis '") + c + "'");
  }
}

PauliString PauliString::from_factors(const std::vector<std::pair<std::size_t, Pauli>>& factors) {
  std::uint64_t x = 0, z = 0;
  for (auto [site, axis] : factors) {
    check_site(site);
    const std::uint64_t bit = std::uint64_t{1} << site;
    if ((x | z) & bit) {
      throw ContractError("site " + std::to_string(site) + " appears twice in a Pauli string");
    }
    if (axis != Pauli::Z) x |= bit;
    if (axis != Pauli::X) z |= bit;
  }
  return {x, z};
}

int PauliString::weight() const { return popcount(support()); }

std::optional<Pauli> PauliString::at(std::size_t site) const {
  const std::uint64_t bit = std::uint64_t{1} << site;
  const bool xs = x_ & bit, zs = z_ & bit;
  if (xs && zs) return Pauli::Y;
  if (xs) return Pauli::X;
  if (zs) return Pauli::Z;
  return std::nullopt;
}

std::map<std::size_t, Pauli> PauliString::factors() const {
  std::map<std::size_t, Pauli> out;
  for (std::uint64_t s = support(); s; s &= s - 1) {
    const auto site = static_cast<std::size_t>(std::countr_zero(s));
    out.emplace(site, *at(site));
  }
  return out;
}

std::size_t PauliString::extent() const {
  return static_cast<std::size_t>(64 - std::countl_zero(support()));
}

bool PauliString::commutes_with(const PauliString& other) const {
  return (popcount(x_ & other.z_) + popcount(z_ & other.x_)) % 2 == 0;
}

std::string PauliString::label() const {
  if (is_identity()) return "I";
  std::ostringstream os;
  bool first = true;
  for (auto [site, axis] : factors()) {
    if (!first) os << ' ';
    os << to_char(axis) << site;
    first = false;
  }
  return os.str();
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  const auto& sa = a.string;
  const auto& sb = b.string;
  const PauliString out(sa.x_mask() ^ sb.x_mask(), sa.z_mask() ^ sb.z_mask());
  // P = i^{|x&z|} X^x Z^z; moving Z^{z_a} past X^{x_b} costs (-1)^{|z_a & x_b|}.
  const int e = popcount(sa.x_mask() & sa.z_mask()) + popcount(sb.x_mask() & sb.z_mask()) +
                2 * popcount(sa.z_mask() & sb.x_mask()) -
                popcount(out.x_mask() & out.z_mask());
  return {a.coefficient * b.coefficient * i_pow(e), out};
}

OperatorSum::OperatorSum(std::size_t num_qubits) : n_(num_qubits) {
  if (n_ == 0 || n_ > kMaxQubits) {
    throw ContractError("qubit count " + std::to_string(n_) + " out of range");
  }
}

OperatorSum::OperatorSum(std::size_t num_qubits, std::vector<PauliTerm> terms)
    : OperatorSum(num_qubits) {
  for (const auto& t : terms) {
    if (t.string.extent() > n_) {
      throw ContractError("Pauli string " + t.string.label() + " acts outside " +
                          std::to_string(n_) + " qubits");
    }
  }
  terms_ = std::move(terms);
  canonicalize();
}

OperatorSum OperatorSum::identity(std::size_t num_qubits, cplx scale) {
  return OperatorSum(num_qubits, {PauliTerm(scale, PauliString())});
}

OperatorSum OperatorSum::single(std::size_t num_qubits, PauliTerm term) {
  return OperatorSum(num_qubits, {term});
}

OperatorSum OperatorSum::single_site(std::size_t num_qubits, Pauli axis, std::size_t site,
                                     cplx scale) {
  return OperatorSum(num_qubits, {PauliTerm(scale, {{site, axis}})});
}

void OperatorSum::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
  std::vector<PauliTerm> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().string == t.string) {
      merged.back().coefficient += t.coefficient;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const PauliTerm& t) { return std::abs(t.coefficient) < kPruneTolerance; });
  terms_ = std::move(merged);
}

std::uint64_t OperatorSum::support() const {
  std::uint64_t s = 0;
  for (const auto& t : terms_) s |= t.string.support();
  return s;
}

cplx OperatorSum::coefficient_of(const PauliString& s) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                             [](const PauliTerm& t, const PauliString& v) { return t.string < v; });
  if (it != terms_.end() && it->string == s) return it->coefficient;
  return 0.0;
}

double OperatorSum::max_imag_coefficient() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coefficient.imag()));
  return m;
}

bool OperatorSum::is_hermitian(double tol) const { return max_imag_coefficient() < tol; }

OperatorSum OperatorSum::adjoint() const {
  OperatorSum out = *this;
  for (auto& t : out.terms_) t.coefficient = std::conj(t.coefficient);
  return out;
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
  if (other.n_ != n_) throw DimensionError("operator sums act on different qubit counts");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

OperatorSum& OperatorSum::operator-=(const OperatorSum& other) { return *this += other * cplx(-1.0); }

OperatorSum& OperatorSum::operator*=(cplx scale) {
  for (auto& t : terms_) t.coefficient *= scale;
  canonicalize();
  return *this;
}

OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
  if (a.n_ != b.n_) throw DimensionError("operator sums act on different qubit counts");
  OperatorSum out(a.n_);
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) out.terms_.push_back(multiply(ta, tb));
  }
  out.canonicalize();
  return out;
}

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw DimensionError("commutator of operators on different qubit counts");
  }
  // Commuting string pairs cancel exactly; anticommuting pairs contribute 2ab.
  std::vector<PauliTerm> terms;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      if (ta.string.commutes_with(tb.string)) continue;
      auto p = multiply(ta, tb);
      p.coefficient *= 2.0;
      terms.push_back(p);
    }
  }
  return OperatorSum(a.num_qubits(), std::move(terms));
}

DenseMatrix to_matrix(const OperatorSum& op, std::size_t dense_limit) {
  const std::size_t n = op.num_qubits();
  if (n > dense_limit) {
    throw SizeError("dense rendering of " + std::to_string(n) + " qubits exceeds limit " +
                    std::to_string(dense_limit));
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& t : op.terms()) {
    const auto x = t.string.x_mask(), z = t.string.z_mask();
    const cplx base = t.coefficient * i_pow(popcount(x & z));
    for (std::uint64_t b = 0; b < dim; ++b) {
      const double sign = (popcount(z & b) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += sign * base;
    }
  }
  return m;
}

void apply(const OperatorSum& op, const StateVector& in, StateVector& out) {
  const std::uint64_t dim = std::uint64_t{1} << op.num_qubits();
  if (static_cast<std::uint64_t>(in.size()) != dim) {
    throw DimensionError("state dimension does not match 2^N");
  }
  out.setZero(in.size());
  for (const auto& t : op.terms()) {
    const auto x = t.string.x_mask(), z = t.string.z_mask();
    const cplx base = t.coefficient * i_pow(popcount(x & z));
    for (std::uint64_t b = 0; b < dim; ++b) {
      const cplx v = in[static_cast<Eigen::Index>(b)];
      if (popcount(z & b) & 1) {
        out[static_cast<Eigen::Index>(b ^ x)] -= base * v;
      } else {
        out[static_cast<Eigen::Index>(b ^ x)] += base * v;
      }
    }
  }
}

StateVector apply(const OperatorSum& op, const StateVector& in) {
  StateVector out;
  qet::apply(op, in, out);
  return out;
}

cplx matrix_element(const StateVector& bra, const OperatorSum& op, const StateVector& ket) {
  return bra.dot(qet::apply(op, ket));
}

cplx expectation(const StateVector& state, const OperatorSum& op) {
  if (std::abs(state.norm() - 1.0) > 1e-10) {
    throw NormalizationError("state norm " + std::to_string(state.norm()) + " is not 1");
  }
  return matrix_element(state, op, state);
}

nlohmann::json to_json(const OperatorSum& op) {
  auto arr = nlohmann::json::array();
  for (const auto& t : op.terms()) {
    nlohmann::json factors = nlohmann::json::object();
    for (auto [site, axis] : t.string.factors()) {
      factors[std::to_string(site)] = std::string(1, to_char(axis));
    }
    arr.push_back({{"coefficient", {t.coefficient.real(), t.coefficient.imag()}},
                   {"factors", factors}});
  }
  return arr;
}

OperatorSum operator_sum_from_json(std::size_t num_qubits, const nlohmann::json& j) {
  std::vector<PauliTerm> terms;
  for (const auto& item : j) {
    const auto& c = item.at("coefficient");
    std::vector<std::pair<std::size_t, Pauli>> factors;
    for (const auto& [site, axis] : item.at("factors").items()) {
      factors.emplace_back(std::stoul(site), pauli_from_char(axis.get<std::string>().at(0)));
    }
    terms.emplace_back(cplx(c.at(0).get<double>(), c.at(1).get<double>()), factors);
  }
  return OperatorSum(num_qubits, std::move(terms));
}

}  // namespace qet
