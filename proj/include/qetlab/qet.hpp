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

// Quantum energy teleportation on a chain ground state: Alice measures a
// Pauli at n_A, sends the outcome mu to Bob, who rotates his site n_B by
// U(mu) = cos(theta) I - i mu sin(theta) sigma_B and lowers his local energy.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qetlab/eigensolve.hpp"
#include "qetlab/ground_state.hpp"
#include "qetlab/models.hpp"
#include "qetlab/pauli.hpp"

namespace qet {

struct QETConfig {
  std::size_t n_a = 1;
  std::size_t n_b = 4;
  Pauli axis_a = Pauli::X;
  Pauli axis_b = Pauli::Y;

  PauliString sigma_a() const { return PauliString::from_factors({{n_a, axis_a}}); }
  PauliString sigma_b() const { return PauliString::from_factors({{n_b, axis_b}}); }
};

/// Throws ContractError unless n_a != n_b and both lie in [0, num_sites).
void validate(const QETConfig& config, std::size_t num_sites);

struct QETResult {
  double xi = 0.0;
  double eta = 0.0;
  /// Imaginary part of <g|sigma_A sigma_dot_B|g>; nonzero only when the
  /// supports of sigma_A and sigma_dot_B overlap.
  double eta_imag = 0.0;
  double theta = 0.0;
  double p_plus = 0.0;
  double p_minus = 0.0;
  double e_analytic = 0.0;
  double e_density_matrix = 0.0;
  double e_injected = 0.0;
  bool supports_disjoint = true;
  bool commutator_condition = true;
};

/// Column names matching to_csv_row.
std::string qet_csv_header();
/// xi, eta, theta, p_plus, e_analytic, e_density_matrix, e_injected.
std::string to_csv_row(const QETResult& r);

/// Model with offsets calibrated against its own ground state.
struct PreparedModel {
  SpinChainModel model;
  GroundState ground;
};
PreparedModel prepare(const SpinChainModel& model, EigenMethod method = EigenMethod::automatic);

/// (I + mu sigma) / 2 with mu in {-1, +1}.
OperatorSum projector(Pauli axis, std::size_t site, int mu, std::size_t num_qubits);

struct HeisenbergDerivative {
  OperatorSum op{1};
  std::uint64_t support = 0;
};
/// sigma_dot_B = i [H, sigma_B]; constant shifts of H drop out.
HeisenbergDerivative heisenberg_derivative(const SpinChainModel& model, const QETConfig& config);

/// <g| sigma_B (H - E0) sigma_B |g>. Requires a calibrated model.
double xi(const GroundState& ground, const SpinChainModel& model, const QETConfig& config);

struct EtaValue {
  double value = 0.0;
  double imag = 0.0;
  bool supports_disjoint = true;
};
/// <g| sigma_A sigma_dot_B |g>.
EtaValue eta(const GroundState& ground, const SpinChainModel& model, const QETConfig& config);

/// Angle minimizing Bob's energy xi sin^2 t - eta sin t cos t, i.e.
/// cos 2t = xi / r, sin 2t = eta / r; t = 0 when xi = eta = 0.
double theta(double xi, double eta);

/// cos(theta) I - i mu sin(theta) sigma.
OperatorSum conditional_unitary(double theta, Pauli axis, std::size_t site, int mu,
                                std::size_t num_qubits);

/// sum_mu U(mu) P(mu) |g><g| P(mu) U(mu)^dagger.
DenseMatrix rho_qet(const GroundState& ground, const QETConfig& config, double theta);

/// (xi - sqrt(xi^2 + eta^2)) / 2.
double teleported_energy_analytic(double xi, double eta);

/// Re Tr[rho H_{n_B}] with the calibrated local Hamiltonian.
double teleported_energy_dm(const DenseMatrix& rho, const SpinChainModel& model, std::size_t n_b);

/// Mean energy sum_mu <g|P(mu)(H - E0)P(mu)|g> deposited by Alice's measurement.
double injected_energy(const GroundState& ground, const SpinChainModel& model,
                       const QETConfig& config);

/// Full protocol evaluation on a calibrated model and its ground state.
QETResult run_qet(const SpinChainModel& model, const GroundState& ground, const QETConfig& config);

}  // namespace qet
