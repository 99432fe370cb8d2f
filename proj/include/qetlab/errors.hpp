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

#include <stdexcept>
#include <string>

namespace qet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand qubit counts disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A dense representation was requested beyond the configured limit.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A state vector is not normalized.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// An operator that must be Hermitian is not.
class AlgebraError : public Error {
 public:
  using Error::Error;
};

/// Iterative eigensolver failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the inputs of an operation was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

class PartitionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace qet
