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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "oracles.hpp"
#include "qetlab/eigensolve.hpp"
#include "qetlab/entanglement.hpp"
#include "qetlab/errors.hpp"

using namespace qet;

namespace {

// Partial trace written out index by index.
DenseMatrix trace_out(const StateVector& psi, std::size_t n, std::size_t k, Keep keep) {
  const std::size_t dl = std::size_t{1} << k, dr = std::size_t{1} << (n - k);
  const std::size_t d = keep == Keep::left ? dl : dr;
  DenseMatrix rho = DenseMatrix::Zero(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t e = 0; e < (keep == Keep::left ? dr : dl); ++e) {
        const auto ia = keep == Keep::left ? a + dl * e : e + dl * a;
        const auto ib = keep == Keep::left ? b + dl * e : e + dl * b;
        rho(a, b) += psi[ia] * std::conj(psi[ib]);
      }
  return rho;
}

double svd_entropy(const StateVector& psi, std::size_t k) {
  const Eigen::Index rows = Eigen::Index{1} << k;
  const DenseMatrix m = Eigen::Map<const DenseMatrix>(psi.data(), rows, psi.size() / rows);
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  const Eigen::VectorXd p = svd.singularValues().array().square();
  return oracle::log_entropy(p);
}

}  // namespace

TEST_CASE("reduced density matrices match the explicit partial trace") {
  std::mt19937_64 rng(31);
  for (std::size_t n = 2; n <= 7; ++n) {
    const auto psi = oracle::random_state(rng, n);
    for (std::size_t k = 1; k < n; ++k) {
      for (auto keep : {Keep::left, Keep::right}) {
        const auto rho = reduced_density_matrix(psi, Bipartition(n, k), keep);
        CHECK((rho - trace_out(psi, n, k, keep)).cwiseAbs().maxCoeff() < 1e-13);
      }
    }
  }
}

TEST_CASE("entropy matches the Schmidt decomposition and is symmetric across the cut") {
  std::mt19937_64 rng(32);
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto psi = oracle::random_state(rng, n);
    for (std::size_t k = 1; k < n; ++k) {
      const Bipartition cut(n, k);
      const double sl = von_neumann_entropy(reduced_density_matrix(psi, cut, Keep::left));
      const double sr = von_neumann_entropy(reduced_density_matrix(psi, cut, Keep::right));
      CHECK(std::abs(sl - sr) <= 1e-10);
      CHECK(std::abs(sl - svd_entropy(psi, k)) < 1e-10);
      CHECK(sl <= std::min(k, n - k) * std::numbers::ln2 + 1e-12);
    }
  }
}

TEST_CASE("pure and product states carry no entanglement") {
  std::mt19937_64 rng(33);
  const auto psi = oracle::random_state(rng, 4);
  CHECK(std::abs(von_neumann_entropy(psi * psi.adjoint())) <= 1e-10);
  // Product of two random blocks.
  const auto a = oracle::random_state(rng, 2), b = oracle::random_state(rng, 3);
  StateVector prod(32);
  for (int r = 0; r < 8; ++r)
    for (int l = 0; l < 4; ++l) prod[l + 4 * r] = a[l] * b[r];
  CHECK(std::abs(von_neumann_entropy(reduced_density_matrix(prod, Bipartition(5, 2), Keep::left))) <= 1e-10);
  StateVector basis = StateVector::Zero(16);
  basis[5] = 1.0;
  CHECK(half_chain_entropy(basis) == 0.0);
}

TEST_CASE("a Bell pair across the cut gives ln 2") {
  StateVector bell = StateVector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  const auto rho = reduced_density_matrix(bell, Bipartition(2, 1), Keep::left);
  CHECK(std::abs(von_neumann_entropy(rho) - std::numbers::ln2) <= 1e-10);
  CHECK(std::abs(von_neumann_entropy(rho, LogBase::two) - 1.0) <= 1e-10);
  // Pair between sites 0 and 3 of four, cut in the middle.
  StateVector far = StateVector::Zero(16);
  far[0] = far[0b1001] = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(half_chain_entropy(far) - std::numbers::ln2) <= 1e-10);
  // Same pair fully inside the left block of a 3|1 cut gives zero.
  StateVector inside = StateVector::Zero(16);
  inside[0] = inside[0b0101] = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(von_neumann_entropy(reduced_density_matrix(inside, Bipartition(4, 3), Keep::left))) <= 1e-10);
}

TEST_CASE("cluster ring entropy matches the stabilizer rank formula") {
  for (std::size_t n : {6, 8}) {
    std::vector<PauliTerm> terms;
    std::vector<PauliString> gens;
    for (std::size_t c = 0; c < n; ++c) {
      const auto s = PauliString::from_factors(
          {{(c + n - 1) % n, Pauli::X}, {c, Pauli::Z}, {(c + 1) % n, Pauli::X}});
      terms.emplace_back(-1.0, s);
      gens.push_back(s);
    }
    const auto g = ground_state(OperatorSum(n, terms));
    REQUIRE_FALSE(g.degenerate);
    for (std::size_t k = 1; k < n; ++k) {
      const std::uint64_t left = (std::uint64_t{1} << k) - 1;
      const double expect = oracle::stabilizer_entropy_bits(gens, left) * std::numbers::ln2;
      const double s = von_neumann_entropy(reduced_density_matrix(g.amplitudes, Bipartition(n, k), Keep::left));
      CHECK(std::abs(s - expect) < 1e-9);
    }
    CHECK(std::abs(half_chain_entropy(g.amplitudes, LogBase::two) - 2.0) < 1e-9);
  }
}

TEST_CASE("density spectrum sums to one") {
  std::mt19937_64 rng(34);
  const auto psi = oracle::random_state(rng, 6);
  const auto ev = density_spectrum(reduced_density_matrix(psi, Bipartition(6, 3), Keep::right));
  CHECK(ev.size() == 8);
  double sum = 0;
  for (double v : ev) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::is_sorted(ev.begin(), ev.end()));
}

TEST_CASE("entropy contract errors") {
  CHECK_THROWS_AS(Bipartition(4, 0), PartitionError);
  CHECK_THROWS_AS(Bipartition(4, 4), PartitionError);
  CHECK_THROWS_AS(Bipartition::half_chain(1), PartitionError);
  CHECK(Bipartition::half_chain(7).left_size() == 3);
  StateVector v = StateVector::Zero(8);
  v[0] = 1.0;
  CHECK_THROWS_AS(reduced_density_matrix(v, Bipartition(4, 2), Keep::left), DimensionError);
  v[1] = 1.0;
  CHECK_THROWS_AS(reduced_density_matrix(v, Bipartition(3, 1), Keep::left), NormalizationError);
  DenseMatrix nh(2, 2);
  nh << 0.5, 0.1, 0.0, 0.5;
  CHECK_THROWS_AS(von_neumann_entropy(nh), ContractError);
  DenseMatrix tr = DenseMatrix::Identity(2, 2);
  CHECK_THROWS_AS(von_neumann_entropy(tr), ContractError);
  DenseMatrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(von_neumann_entropy(neg), ContractError);
  CHECK_THROWS_AS(von_neumann_entropy(DenseMatrix::Zero(2, 3)), ContractError);
}
