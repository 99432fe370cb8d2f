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

#include "qetlab/pauli.hpp"

namespace qet {

/// Lowest eigenpair of a chain Hamiltonian.
///
/// Amplitudes are normalized and carry a fixed global phase: the first
/// amplitude with modulus above 1e-10 is real and positive.
struct GroundState {
  StateVector amplitudes;
  double energy = 0.0;
  /// E1 - E0; for Lanczos this is the Ritz estimate, an upper bound.
  double gap = 0.0;
  bool degenerate = false;

  std::size_t num_qubits() const;
};

}  // namespace qet
