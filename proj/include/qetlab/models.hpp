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

// Hamiltonian families and the per-site local Hamiltonians used by the
// energy-teleportation protocol.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qetlab/ground_state.hpp"
#include "qetlab/pauli.hpp"

namespace qet {

enum class ModelKind { ising, cluster, cluster_zz, y_cluster, jw_mapped };
enum class Boundary { periodic, open };
enum class FermionKind { ssh, kitaev };

std::string to_string(ModelKind k);
std::string to_string(Boundary b);
std::string to_string(FermionKind k);
ModelKind model_kind_from_string(const std::string& s);
Boundary boundary_from_string(const std::string& s);
FermionKind fermion_kind_from_string(const std::string& s);

/// Boundary used by the spin-chain builders when none is given. Open
/// boundaries give the reference offset values of the N = 6 cluster chain.
inline constexpr Boundary kDefaultBoundary = Boundary::open;

/// Quadratic fermion chain prior to the Jordan-Wigner map. `size` counts
/// sites for the Kitaev chain and unit cells (two sites each) for SSH.
struct FermionChainSpec {
  FermionKind kind = FermionKind::kitaev;
  std::size_t size = 2;
  double lambda = 0.0;
  Boundary boundary = Boundary::open;

  std::size_t num_sites() const { return kind == FermionKind::ssh ? 2 * size : size; }
};

struct SpinChainModel {
  ModelKind kind = ModelKind::ising;
  std::size_t num_sites = 0;
  std::map<std::string, double> couplings;
  Boundary boundary = kDefaultBoundary;
  OperatorSum bulk_terms{1};
  std::optional<Pauli> coupling_axis;        // ising only
  std::optional<FermionChainSpec> fermion;   // jw_mapped only

  /// Per-site offsets enforcing <g|H_n|g> = 0.
  std::optional<std::vector<double>> epsilon;
  /// Ground energy of bulk_terms; H - e0_shift has zero ground expectation.
  std::optional<double> e0_shift;
  bool degenerate_ground = false;

  bool calibrated() const { return epsilon.has_value() && e0_shift.has_value(); }
  double coupling(const std::string& name) const;
  /// bulk_terms - e0_shift * I. Throws ContractError before calibration.
  OperatorSum shifted_hamiltonian() const;
};

SpinChainModel build_ising(std::size_t n, double h_x, double h_z, Pauli coupling_axis,
                           Boundary boundary = kDefaultBoundary);
SpinChainModel build_cluster(std::size_t n, double j1, double j2, bool with_zz,
                             Boundary boundary = kDefaultBoundary);
SpinChainModel build_y_cluster(std::size_t n, double h_y, double j_y,
                               Boundary boundary = kDefaultBoundary);

/// Fermionic chain mapped to spins with c_n = (prod_{m<n} Z_m)(X_n + iY_n)/2.
/// Periodic chains are rejected with UnsupportedError.
SpinChainModel jordan_wigner(const FermionChainSpec& spec);

/// Fermion annihilation operator on `site` in spin form.
OperatorSum jw_annihilation(std::size_t num_sites, std::size_t site);

/// Every non-identity bulk term touching site n at full coefficient, without
/// the offset.
OperatorSum local_bulk_hamiltonian(const SpinChainModel& model, std::size_t n);
/// local_bulk_hamiltonian plus epsilon_n * I when the model is calibrated.
OperatorSum local_hamiltonian(const SpinChainModel& model, std::size_t n);

/// Sets epsilon_n = -<g|H_n|g> for every n and e0_shift = E0.
SpinChainModel calibrate(const SpinChainModel& model, const GroundState& ground);

struct CommutatorCheck {
  bool holds = false;
  OperatorSum residual{1};
};

/// [H, sigma] - [H_local, sigma], exact symbolically.
CommutatorCheck check_commutator_condition(const OperatorSum& hamiltonian,
                                           const OperatorSum& local, const PauliString& sigma);
CommutatorCheck check_commutator_condition(const SpinChainModel& model, std::size_t n_b,
                                           Pauli axis_b);

nlohmann::json to_json(const SpinChainModel& model);
/// Rebuilds the model from its description, restoring stored calibration.
SpinChainModel model_from_json(const nlohmann::json& j);

}  // namespace qet
