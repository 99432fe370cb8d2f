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

#include "qetlab/eigensolve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include <Eigen/Eigenvalues>

#include "qetlab/errors.hpp"
#include "qetlab/rng.hpp"

namespace qet {

std::size_t GroundState::num_qubits() const {
  return static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(amplitudes.size())));
}

void fix_global_phase(StateVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-10) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = std::abs(v[i]);
      return;
    }
  }
}

namespace {

void require_hermitian(const OperatorSum& h) {
  if (!h.is_hermitian()) {
    throw AlgebraError("Hamiltonian is not Hermitian (max imaginary coefficient " +
                       std::to_string(h.max_imag_coefficient()) + ")");
  }
}

GroundState dense_ground_state(const OperatorSum& h) {
  const auto m = to_matrix(h);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
  GroundState g;
  g.amplitudes = es.eigenvectors().col(0);
  g.amplitudes.normalize();
  fix_global_phase(g.amplitudes);
  g.energy = es.eigenvalues()[0];
  g.gap = m.rows() > 1 ? es.eigenvalues()[1] - es.eigenvalues()[0] : 0.0;
  g.degenerate = m.rows() > 1 && g.gap < kDegeneracyTolerance;
  return g;
}

StateVector random_unit_vector(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> gauss;
  StateVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = cplx(gauss(rng), gauss(rng));
  return v.normalized();
}

void project_out(StateVector& v, const std::vector<StateVector>& basis) {
  for (const auto& b : basis) v -= b * b.dot(v);
}

struct LanczosResult {
  double energy;
  StateVector vector;
};

// Lowest eigenpair of h restricted to the complement of `deflate`, by
// explicitly restarted Lanczos with full reorthogonalization.
LanczosResult lanczos_lowest(const OperatorSum& h, const std::vector<StateVector>& deflate,
                             std::uint64_t seed, const LanczosOptions& opt) {
  const Eigen::Index dim = Eigen::Index{1} << h.num_qubits();
  StateVector start = random_unit_vector(dim, seed);
  project_out(start, deflate);
  start.normalize();

  std::size_t used = 0;
  StateVector w;
  while (used < opt.max_iterations) {
    const std::size_t cap =
        std::min({opt.krylov_dim, opt.max_iterations - used,
                  static_cast<std::size_t>(dim) - deflate.size()});
    std::vector<StateVector> basis{start};
    std::vector<double> alpha, beta;
    for (std::size_t k = 0; k < cap; ++k) {
      qet::apply(h, basis[k], w);
      ++used;
      alpha.push_back(basis[k].dot(w).real());
      // Two passes of classical Gram-Schmidt against deflation and Krylov vectors.
      for (int pass = 0; pass < 2; ++pass) {
        project_out(w, deflate);
        project_out(w, basis);
      }
      const double b = w.norm();
      if (k + 1 == cap || b < 1e-13) break;
      beta.push_back(b);
      basis.push_back(w / b);
    }
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd off = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                : Eigen::VectorXd(0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd s = tri.eigenvectors().col(0);
    StateVector ritz = StateVector::Zero(dim);
    for (Eigen::Index i = 0; i < m; ++i) ritz += s[i] * basis[static_cast<std::size_t>(i)];
    project_out(ritz, deflate);
    ritz.normalize();

    qet::apply(h, ritz, w);
    const double theta = ritz.dot(w).real();
    const double residual = (w - theta * ritz).norm();
    if (residual < opt.tolerance) return {theta, ritz};
    start = ritz;
  }
  throw ConvergenceError("Lanczos did not converge within " + std::to_string(opt.max_iterations) +
                         " iterations");
}

GroundState lanczos_ground_state(const OperatorSum& h, const LanczosOptions& opt) {
  const auto first = lanczos_lowest(h, {}, opt.seed, opt);
  if (opt.confirm) {
    const auto second = lanczos_lowest(h, {}, opt.seed ^ 0x9e3779b97f4a7c15ULL, opt);
    if (std::abs(first.energy - second.energy) > 1e-9) {
      throw ConvergenceError("Lanczos runs from independent seeds disagree on E0");
    }
  }
  GroundState g;
  g.amplitudes = first.vector;
  fix_global_phase(g.amplitudes);
  g.energy = first.energy;
  if ((Eigen::Index{1} << h.num_qubits()) > 1) {
    const auto excited = lanczos_lowest(h, {first.vector}, opt.seed + 1, opt);
    g.gap = std::max(0.0, excited.energy - first.energy);
  }
  g.degenerate = g.gap < kDegeneracyTolerance;
  return g;
}

}  // namespace

GroundState ground_state(const OperatorSum& hamiltonian, EigenMethod method,
                         const LanczosOptions& options) {
  require_hermitian(hamiltonian);
  const std::size_t n = hamiltonian.num_qubits();
  if (method == EigenMethod::automatic) {
    method = n <= kAutoDenseLimit ? EigenMethod::dense : EigenMethod::lanczos;
  }
  if (method == EigenMethod::dense) {
    if (n > kDenseLimit) throw SizeError("dense diagonalization limited to 14 qubits");
    return dense_ground_state(hamiltonian);
  }
  if (n > kLanczosLimit) throw SizeError("Lanczos limited to 24 qubits");
  return lanczos_ground_state(hamiltonian, options);
}

GroundState ground_state(const SpinChainModel& model, EigenMethod method,
                         const LanczosOptions& options) {
  return ground_state(model.bulk_terms, method, options);
}

std::vector<double> spectrum(const OperatorSum& hamiltonian) {
  require_hermitian(hamiltonian);
  if (hamiltonian.num_qubits() > kAutoDenseLimit) {
    throw SizeError("full spectrum limited to 10 qubits");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(to_matrix(hamiltonian), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> spectrum(const SpinChainModel& model) { return spectrum(model.bulk_terms); }

namespace {

constexpr char kMagic[8] = {'Q', 'E', 'T', 'G', 'S', '\0', '\0', '\0'};

void put_le(std::ostream& os, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& is, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = is.get();
    if (c == EOF) throw ContractError("truncated ground-state file");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

}  // namespace

void write_ground_state(const std::string& path, const GroundState& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.write(kMagic, sizeof kMagic);
  put_le(os, g.num_qubits(), 4);
  put_le(os, 0, 4);
  for (Eigen::Index i = 0; i < g.amplitudes.size(); ++i) {
    put_le(os, std::bit_cast<std::uint64_t>(g.amplitudes[i].real()), 8);
    put_le(os, std::bit_cast<std::uint64_t>(g.amplitudes[i].imag()), 8);
  }
}

StateVector read_ground_state(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ContractError(path + " is not a ground-state dump");
  }
  const auto n = get_le(is, 4);
  get_le(is, 4);
  if (n == 0 || n > kLanczosLimit) throw ContractError("bad qubit count in ground-state dump");
  StateVector v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = std::bit_cast<double>(get_le(is, 8));
    const double im = std::bit_cast<double>(get_le(is, 8));
    v[i] = cplx(re, im);
  }
  return v;
}

}  // namespace qet
