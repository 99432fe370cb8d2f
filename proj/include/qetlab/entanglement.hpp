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

#include <cstddef>
#include <vector>

#include "qetlab/pauli.hpp"

namespace qet {

/// Cut of an N-site chain into {0..k-1} (left) and {k..N-1} (right).
class Bipartition {
 public:
  /// Throws PartitionError unless 0 < left_size < num_sites.
  Bipartition(std::size_t num_sites, std::size_t left_size);
  /// Cut at N/2 (rounded down).
  static Bipartition half_chain(std::size_t num_sites);

  std::size_t num_sites() const { return n_; }
  std::size_t left_size() const { return k_; }
  std::size_t right_size() const { return n_ - k_; }

 private:
  std::size_t n_;
  std::size_t k_;
};

enum class Keep { left, right };
enum class LogBase { natural, two };

/// Reduced state of the kept side, from the 2^|L| x 2^|R| amplitude reshape.
DenseMatrix reduced_density_matrix(const StateVector& state, const Bipartition& cut, Keep keep);

/// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> density_spectrum(const DenseMatrix& rho);

/// -sum lambda log lambda over eigenvalues above 1e-12. Throws ContractError
/// for matrices that are not Hermitian, PSD and unit-trace within 1e-10.
double von_neumann_entropy(const DenseMatrix& rho, LogBase base = LogBase::natural);

/// Entropy of the left half of a pure state, cut at N/2.
double half_chain_entropy(const StateVector& state, LogBase base = LogBase::natural);

}  // namespace qet
