// Copyright 2026 The cfloquet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace cfloquet {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument value or geometry (e.g. L <= 0, site out of range).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Operation requires a different dynamical phase (e.g. heating peaks of a
/// non-heating drive) or the data cannot support it.
class PhaseError : public Error {
  public:
    using Error::Error;
};

/// Requested system exceeds the statevector capacity.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Iterative numerical method failed to reach its tolerance.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Hamiltonian cannot be split into the layers a method requires.
class UnsupportedStructureError : public Error {
  public:
    using Error::Error;
};

/// Malformed configuration, file, or serialized artifact.
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace cfloquet
