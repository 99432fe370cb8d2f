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

#include "qetlab/qet.hpp"

#include <cmath>
#include <cstdio>

#include "qetlab/errors.hpp"

namespace qet {

namespace {

void require_calibrated(const SpinChainModel& model) {
  if (!model.calibrated()) throw ContractError("model must be calibrated against its ground state");
}

void require_mu(int mu) {
  if (mu != 1 && mu != -1) throw ContractError("measurement outcome must be +1 or -1");
}

OperatorSum single(std::size_t n, const PauliString& s) {
  return OperatorSum::single(n, PauliTerm(1.0, s));
}

}  // namespace

void validate(const QETConfig& config, std::size_t num_sites) {
  if (config.n_a >= num_sites || config.n_b >= num_sites) {
    throw ContractError("Alice and Bob sites must lie inside the chain");
  }
  if (config.n_a == config.n_b) throw ContractError("Alice and Bob must act on different sites");
}

std::string qet_csv_header() {
  return "xi,eta,theta,p_plus,e_analytic,e_density_matrix,e_injected";
}

std::string to_csv_row(const QETResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g", r.xi, r.eta, r.theta,
                r.p_plus, r.e_analytic, r.e_density_matrix, r.e_injected);
  return buf;
}

PreparedModel prepare(const SpinChainModel& model, EigenMethod method) {
  auto g = ground_state(model, method);
  return {calibrate(model, g), std::move(g)};
}

OperatorSum projector(Pauli axis, std::size_t site, int mu, std::size_t num_qubits) {
  require_mu(mu);
  return OperatorSum(num_qubits, {PauliTerm(0.5, PauliString()), PauliTerm(0.5 * mu, {{site, axis}})});
}

HeisenbergDerivative heisenberg_derivative(const SpinChainModel& model, const QETConfig& config) {
  validate(config, model.num_sites);
  HeisenbergDerivative d;
  d.op = cplx(0, 1) * commutator(model.bulk_terms, single(model.num_sites, config.sigma_b()));
  d.support = d.op.support();
  return d;
}

double xi(const GroundState& ground, const SpinChainModel& model, const QETConfig& config) {
  validate(config, model.num_sites);
  if (!model.e0_shift) throw ContractError("xi needs the globally shifted Hamiltonian");
  const auto sb = single(model.num_sites, config.sigma_b());
  const StateVector flipped = qet::apply(sb, ground.amplitudes);
  return matrix_element(flipped, model.shifted_hamiltonian(), flipped).real();
}

EtaValue eta(const GroundState& ground, const SpinChainModel& model, const QETConfig& config) {
  const auto d = heisenberg_derivative(model, config);
  const auto sa = single(model.num_sites, config.sigma_a());
  const cplx v = expectation(ground.amplitudes, sa * d.op);
  EtaValue out;
  out.value = v.real();
  out.imag = v.imag();
  out.supports_disjoint = (config.sigma_a().support() & d.support) == 0;
  return out;
}

double theta(double xi, double eta) {
  if (xi == 0.0 && eta == 0.0) return 0.0;
  return 0.5 * std::atan2(eta, xi);
}

OperatorSum conditional_unitary(double theta, Pauli axis, std::size_t site, int mu,
                                std::size_t num_qubits) {
  require_mu(mu);
  return OperatorSum(num_qubits, {PauliTerm(std::cos(theta), PauliString()),
                                  PauliTerm(cplx(0, -mu * std::sin(theta)), {{site, axis}})});
}

DenseMatrix rho_qet(const GroundState& ground, const QETConfig& config, double theta) {
  const std::size_t n = ground.num_qubits();
  validate(config, n);
  if (n > kDenseLimit) throw SizeError("density matrix beyond the dense limit");
  const auto dim = ground.amplitudes.size();
  DenseMatrix rho = DenseMatrix::Zero(dim, dim);
  for (int mu : {1, -1}) {
    const StateVector post = qet::apply(projector(config.axis_a, config.n_a, mu, n), ground.amplitudes);
    const StateVector rotated = qet::apply(conditional_unitary(theta, config.axis_b, config.n_b, mu, n), post);
    rho.noalias() += rotated * rotated.adjoint();
  }
  return rho;
}

double teleported_energy_analytic(double xi, double eta) {
  const double r = std::hypot(xi, eta);
  // Cancellation-free for |eta| << xi; stays strictly negative whenever eta != 0.
  if (xi > 0.0) return -0.5 * eta * eta / (xi + r);
  return 0.5 * (xi - r);
}

double teleported_energy_dm(const DenseMatrix& rho, const SpinChainModel& model, std::size_t n_b) {
  require_calibrated(model);
  const DenseMatrix hb = to_matrix(local_hamiltonian(model, n_b));
  if (hb.rows() != rho.rows()) throw DimensionError("density matrix does not match the model");
  return (rho.cwiseProduct(hb.transpose())).sum().real();
}

double injected_energy(const GroundState& ground, const SpinChainModel& model,
                       const QETConfig& config) {
  validate(config, model.num_sites);
  const auto h = model.shifted_hamiltonian();
  double e = 0.0;
  for (int mu : {1, -1}) {
    const StateVector post =
        qet::apply(projector(config.axis_a, config.n_a, mu, model.num_sites), ground.amplitudes);
    e += matrix_element(post, h, post).real();
  }
  return e;
}

QETResult run_qet(const SpinChainModel& model, const GroundState& ground, const QETConfig& config) {
  require_calibrated(model);
  validate(config, model.num_sites);
  QETResult r;
  r.xi = xi(ground, model, config);
  const auto e = eta(ground, model, config);
  r.eta = e.value;
  r.eta_imag = e.imag;
  r.supports_disjoint = e.supports_disjoint;
  r.theta = theta(r.xi, r.eta);
  r.p_plus =
      expectation(ground.amplitudes, projector(config.axis_a, config.n_a, 1, model.num_sites)).real();
  r.p_minus =
      expectation(ground.amplitudes, projector(config.axis_a, config.n_a, -1, model.num_sites)).real();
  r.e_analytic = teleported_energy_analytic(r.xi, r.eta);
  r.e_density_matrix = teleported_energy_dm(rho_qet(ground, config, r.theta), model, config.n_b);
  r.e_injected = injected_energy(ground, model, config);
  r.commutator_condition = check_commutator_condition(model, config.n_b, config.axis_b).holds;
  return r;
}

}  // namespace qet
