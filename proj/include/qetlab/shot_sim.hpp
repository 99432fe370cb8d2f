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

// Shot-by-shot statevector realization of the protocol: Born-rule
// measurement at Alice's site, classical feedforward of mu, Bob's
// conditional rotation, then a projective readout of one Pauli observable.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qetlab/ground_state.hpp"
#include "qetlab/models.hpp"
#include "qetlab/pauli.hpp"
#include "qetlab/qet.hpp"
#include "qetlab/rng.hpp"

namespace qet {

struct ShotEstimate {
  double mean = 0.0;
  /// Sample standard deviation over sqrt(shots).
  double std_error = 0.0;
  std::uint64_t shots = 0;
  std::string observable;
};

/// Mean and standard error of +-1 readouts with `plus` outcomes +1.
ShotEstimate estimate_from_counts(std::uint64_t plus, std::uint64_t shots, std::string label);

struct ProtocolRun {
  SpinChainModel model;
  GroundState ground;
  QETConfig config;
  /// Precomputed once from the exact ground state.
  double theta = 0.0;
  std::uint64_t shots = 100000;
  std::uint64_t seed = 0;
  std::vector<PauliString> observables;
  /// Negative control: Bob applies U with an independent fair coin instead
  /// of Alice's recorded outcome.
  bool decorrelate_feedforward = false;
  /// Worker threads; 0 selects hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
};

struct MeasurementSample {
  int mu = 1;
  StateVector collapsed;
};

/// Projective measurement of a Pauli string; the collapsed state is renormalized.
MeasurementSample measure_pauli_sample(const StateVector& state, const PauliString& observable,
                                       Rng& rng);
MeasurementSample measure_pauli_sample(const StateVector& state, Pauli axis, std::size_t site,
                                       Rng& rng);

struct ShotRecord {
  int mu = 1;
  /// Outcome Bob actually conditioned on (differs from mu only in the control).
  int mu_applied = 1;
  int readout = 1;
};

/// One shot: measure sigma_A, apply U(mu), read out `observable` once.
ShotRecord run_protocol_once(const ProtocolRun& run, const PauliString& observable, Rng& rng);

/// Shots per RNG sub-stream; batches are the unit of parallel work.
inline constexpr std::uint64_t kShotBatch = 1 << 16;

/// Samples `run.shots` protocol executions for each observable in
/// run.observables. Observable k, batch b draws from
/// Rng::substream(run.seed, (k << 32) | b).
std::vector<ShotEstimate> sample_observables(const ProtocolRun& run);

/// Same draws as sample_observables but executed through run_protocol_once;
/// slow, kept as the reference path.
ShotEstimate sample_observable_reference(const ProtocolRun& run, std::size_t observable_index);

struct BobEnergyEstimate {
  ShotEstimate energy;
  /// One estimate per term of Bob's local Hamiltonian, in term order.
  std::vector<ShotEstimate> terms;
  std::vector<double> term_coefficients;
  /// Y_{n_B}: measured and reported, not part of the energy.
  std::optional<ShotEstimate> bob_y;
  std::vector<std::string> warnings;
};

/// Sum of sampled local-Hamiltonian terms plus epsilon_{n_B}, errors added in
/// quadrature. Observables in `run` are replaced by the local terms.
BobEnergyEstimate estimate_bob_energy(const ProtocolRun& run);

/// Builds a run for a calibrated model with theta from the exact protocol.
ProtocolRun make_protocol_run(const SpinChainModel& model, const GroundState& ground,
                              const QETConfig& config, std::uint64_t shots, std::uint64_t seed);

std::string shot_csv_header();
std::string to_csv_row(const ShotEstimate& e, const ProtocolRun& run);

/// One column of the cluster+ZZ reproduction (N=6, J2=0, n_A=1, n_B=4).
struct Table1Column {
  double j1 = 0.0;
  ShotEstimate xx_left, xx_right, zz_left, zz_right, z;
  ShotEstimate h_sampled;
  double h_exact = 0.0;
  double epsilon = 0.0;
  double theta = 0.0;
};

inline const std::vector<double> kTable1Couplings{0.2, 0.4, 0.6, 0.8, 1.0};

Table1Column table1_column(double j1, std::uint64_t shots, std::uint64_t seed, unsigned threads = 0);
std::vector<Table1Column> reproduce_table1(std::uint64_t shots, std::uint64_t seed,
                                           unsigned threads = 0);
/// Row order: correlators, <H>, <H>_exact, epsilon, theta.
std::string table1_csv(const std::vector<Table1Column>& cols, std::uint64_t seed);

}  // namespace qet
