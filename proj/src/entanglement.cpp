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

#include "qetlab/entanglement.hpp"

#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qetlab/errors.hpp"

namespace qet {

Bipartition::Bipartition(std::size_t num_sites, std::size_t left_size)
    : n_(num_sites), k_(left_size) {
  if (k_ == 0 || k_ >= n_) {
    throw PartitionError("bipartition needs both sides nonempty (left " + std::to_string(k_) +
                         " of " + std::to_string(n_) + ")");
  }
}

Bipartition Bipartition::half_chain(std::size_t num_sites) { return {num_sites, num_sites / 2}; }

DenseMatrix reduced_density_matrix(const StateVector& state, const Bipartition& cut, Keep keep) {
  const auto dim = static_cast<std::uint64_t>(state.size());
  if (dim != (std::uint64_t{1} << cut.num_sites())) {
    throw DimensionError("state dimension does not match the bipartition");
  }
  if (std::abs(state.norm() - 1.0) > 1e-10) throw NormalizationError("state is not normalized");
  // Site 0 is the least-significant bit, so the left block indexes rows of
  // the column-major reshape.
  const Eigen::Index rows = Eigen::Index{1} << cut.left_size();
  const Eigen::Index cols = Eigen::Index{1} << cut.right_size();
  Eigen::Map<const DenseMatrix> m(state.data(), rows, cols);
  if (keep == Keep::left) return m * m.adjoint();
  return m.transpose() * m.conjugate();
}

std::vector<double> density_spectrum(const DenseMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(rho, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double von_neumann_entropy(const DenseMatrix& rho, LogBase base) {
  if (rho.rows() != rho.cols()) throw ContractError("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ContractError("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-10) throw ContractError("density matrix trace is not 1");
  const auto ev = density_spectrum(rho);
  if (ev.front() < -1e-10) throw ContractError("density matrix is not positive semidefinite");
  double s = 0.0;
  for (double l : ev) {
    if (l > 1e-12) s -= l * std::log(l);
  }
  if (base == LogBase::two) s /= std::log(2.0);
  return std::max(s, 0.0);
}

double half_chain_entropy(const StateVector& state, LogBase base) {
  const auto n = static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(state.size())));
  return von_neumann_entropy(reduced_density_matrix(state, Bipartition::half_chain(n), Keep::left), base);
}

}  // namespace qet
