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

/**
 * @file
 * Dense statevector storage.
 *
 * Basis convention (shared by every module and file format): bit i of an
 * amplitude index is site i, with bit value 0 for the Z = +1 eigenstate |0>
 * and 1 for Z = -1 (|1>). Site 0 is the least-significant bit.
 */

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "cfloquet/types.hpp"

namespace cfloquet::sim {

inline constexpr int kMaxQubits = 24;

/// Throws CapacityError when N is outside [1, kMaxQubits].
void check_capacity(int N);

class StateVector {
  public:
    /// |0...0> on num_qubits sites.
    explicit StateVector(int num_qubits);
    /// Takes ownership of 2^num_qubits amplitudes (not renormalized).
    StateVector(int num_qubits, std::vector<Complex> amplitudes);

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t size() const { return amplitudes_.size(); }

    [[nodiscard]] std::span<Complex> amplitudes() { return amplitudes_; }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }

    Complex &operator[](std::size_t i) { return amplitudes_[i]; }
    const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }

    [[nodiscard]] double norm() const;
    void normalize();

  private:
    int num_qubits_;
    std::vector<Complex> amplitudes_;
};

/// |+>^N: every amplitude 2^(-N/2).
StateVector initial_plus_state(int N);

/// <a|b>. Throws DomainError on size mismatch.
Complex overlap(const StateVector &a, const StateVector &b);

/// ||a - b||.
double distance(const StateVector &a, const StateVector &b);

/// Raw export: 8-byte little-endian uint64 N, then 2^N (re, im) little-endian
/// doubles.
void write_state(std::ostream &out, const StateVector &state);
StateVector read_state(std::istream &in);

} // namespace cfloquet::sim
