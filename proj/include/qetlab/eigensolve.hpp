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
#include <cstdint>
#include <string>
#include <vector>

#include "qetlab/ground_state.hpp"
#include "qetlab/models.hpp"
#include "qetlab/pauli.hpp"

namespace qet {

enum class EigenMethod { dense, lanczos, automatic };

/// Gaps below this mark the ground state as degenerate.
inline constexpr double kDegeneracyTolerance = 1e-10;
/// `automatic` picks dense diagonalization up to this many qubits.
inline constexpr std::size_t kAutoDenseLimit = 10;
inline constexpr std::size_t kLanczosLimit = 24;

struct LanczosOptions {
  std::size_t max_iterations = 500;
  /// Krylov vectors kept before an explicit restart from the Ritz vector.
  std::size_t krylov_dim = 64;
  double tolerance = 1e-10;
  std::uint64_t seed = 0x5eed;
  /// Rerun from an independent start vector and require E0 agreement.
  bool confirm = true;
};

GroundState ground_state(const OperatorSum& hamiltonian, EigenMethod method = EigenMethod::automatic,
                         const LanczosOptions& options = {});
GroundState ground_state(const SpinChainModel& model, EigenMethod method = EigenMethod::automatic,
                         const LanczosOptions& options = {});

/// All 2^N eigenvalues in ascending order (dense, N <= 10).
std::vector<double> spectrum(const OperatorSum& hamiltonian);
std::vector<double> spectrum(const SpinChainModel& model);

/// Multiplies by a global phase so the first amplitude with modulus above
/// 1e-10 is real and positive.
void fix_global_phase(StateVector& v);

/// Binary amplitude dump: 16-byte header ("QETGS\0\0\0", u32 N, u32 0)
/// followed by interleaved little-endian (re, im) doubles.
void write_ground_state(const std::string& path, const GroundState& g);
StateVector read_ground_state(const std::string& path);

}  // namespace qet
