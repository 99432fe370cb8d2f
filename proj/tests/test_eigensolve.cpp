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

#include <cstdio>
#include <filesystem>
#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "qetlab/eigensolve.hpp"
#include "qetlab/errors.hpp"
#include "qetlab/models.hpp"

using namespace qet;

namespace {

double residual(const OperatorSum& h, const GroundState& g) {
  return (qet::apply(h, g.amplitudes) - g.energy * g.amplitudes).norm();
}

}  // namespace

TEST_CASE("dense ground state is the lowest eigenpair of the rendered matrix") {
  const auto m = build_cluster(6, 0.6, 0.3, true);
  const auto g = ground_state(m, EigenMethod::dense);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(oracle::sum_matrix(m.bulk_terms));
  CHECK(g.energy == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-12));
  CHECK(g.gap == doctest::Approx(es.eigenvalues()[1] - es.eigenvalues()[0]).epsilon(1e-9));
  CHECK(g.amplitudes.norm() == doctest::Approx(1.0));
  CHECK(residual(m.bulk_terms, g) < 1e-10);
  CHECK_FALSE(g.degenerate);
  CHECK(g.num_qubits() == 6);
}

TEST_CASE("Lanczos agrees with dense diagonalization") {
  const std::vector<SpinChainModel> models = {
      build_ising(8, 1.0, 0.1, Pauli::X), build_cluster(10, 0.5, 1.0, true),
      build_y_cluster(9, 0.4, 0.7), build_ising(10, 0.8, 0.3, Pauli::Z, Boundary::periodic)};
  for (const auto& m : models) {
    const auto d = ground_state(m, EigenMethod::dense);
    const auto l = ground_state(m, EigenMethod::lanczos);
    CHECK(std::abs(d.energy - l.energy) < 1e-9);
    CHECK(std::abs(d.gap - l.gap) < 1e-6);
    CHECK(std::abs(std::abs(d.amplitudes.dot(l.amplitudes)) - 1.0) < 1e-8);
    CHECK(residual(m.bulk_terms, l) < 1e-6);
  }
}

TEST_CASE("automatic method switches to Lanczos above ten sites") {
  const auto g = ground_state(build_ising(14, 1.0, 0.2, Pauli::X));
  CHECK(g.num_qubits() == 14);
  CHECK(residual(build_ising(14, 1.0, 0.2, Pauli::X).bulk_terms, g) < 1e-6);
}

TEST_CASE("degenerate ground states are flagged") {
  // Classical ferromagnet: both polarized states share the ground energy.
  const auto m = build_ising(6, 0.0, 0.0, Pauli::Z);
  CHECK(ground_state(m, EigenMethod::dense).degenerate);
  CHECK(ground_state(m, EigenMethod::lanczos).degenerate);
  CHECK_FALSE(ground_state(build_ising(6, 0.0, 0.5, Pauli::Z), EigenMethod::dense).degenerate);
}

TEST_CASE("global phase is fixed so the first nonzero amplitude is real positive") {
  std::mt19937_64 rng(3);
  auto v = oracle::random_state(rng, 3);
  const auto before = v;
  fix_global_phase(v);
  CHECK(v[0].imag() == 0.0);
  CHECK(v[0].real() > 0.0);
  CHECK(std::abs(std::abs(before.dot(v)) - 1.0) < 1e-12);
}

TEST_CASE("full spectrum is sorted and limited in size") {
  const auto s = spectrum(build_cluster(5, 0.3, 0.9, false));
  CHECK(s.size() == 32);
  CHECK(std::is_sorted(s.begin(), s.end()));
  CHECK_THROWS_AS(spectrum(build_ising(11, 1, 0, Pauli::X)), SizeError);
}

TEST_CASE("eigensolver contract errors") {
  const OperatorSum nh(3, {PauliTerm(cplx(0, 1), {{0, Pauli::Z}})});
  CHECK_THROWS_AS(ground_state(nh), AlgebraError);
  CHECK_THROWS_AS(ground_state(build_ising(15, 1, 0, Pauli::X), EigenMethod::dense), SizeError);
  CHECK_THROWS_AS(ground_state(OperatorSum(25), EigenMethod::lanczos), SizeError);
  LanczosOptions tight;
  tight.max_iterations = 3;
  tight.krylov_dim = 2;
  CHECK_THROWS_AS(ground_state(build_ising(10, 1, 0.1, Pauli::X), EigenMethod::lanczos, tight),
                  ConvergenceError);
}

TEST_CASE("ground-state dump round trip") {
  const auto path = (std::filesystem::temp_directory_path() / "qetlab_gs_test.bin").string();
  const auto g = ground_state(build_y_cluster(5, 0.2, 0.4));
  write_ground_state(path, g);
  const auto v = read_ground_state(path);
  CHECK(v == g.amplitudes);
  CHECK(std::filesystem::file_size(path) == 16 + 16 * 32);
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fputs("garbage!", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_ground_state(path), ContractError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_ground_state(path), Error);
}
