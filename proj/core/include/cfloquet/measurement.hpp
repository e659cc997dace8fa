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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cfloquet/random.hpp"
#include "cfloquet/state_vector.hpp"

namespace cfloquet::sim {

enum class Basis : unsigned char { Z, X };

/// Bitstring samples. Bit i of an outcome is 1 when site i returned the -1
/// eigenvalue of its measured Pauli (|1> for Z, |-> for X).
struct ShotBatch {
    int num_qubits = 0;
    std::vector<Basis> basis;
    std::vector<std::uint64_t> outcomes;

    [[nodiscard]] std::size_t size() const { return outcomes.size(); }
    [[nodiscard]] bool all_in(Basis b) const;
    /// Product of the +-1 outcomes over all sites of one shot.
    [[nodiscard]] int parity(std::size_t shot) const;
};

/// Born-rule samples in the requested per-site basis (an X site is rotated by
/// a Hadamard before sampling). Deterministic for a fixed seed.
ShotBatch sample_measurements(const StateVector &state, std::span<const Basis> basis,
                              std::size_t shots, std::uint64_t seed);
ShotBatch sample_measurements(const StateVector &state, Basis basis, std::size_t shots,
                              std::uint64_t seed);

/// Cumulative Born distribution of one state in a fixed basis; each draw
/// consumes one uniform variate.
class Sampler {
  public:
    Sampler(const StateVector &state, std::span<const Basis> basis);

    [[nodiscard]] std::uint64_t draw(Rng &rng) const;
    [[nodiscard]] const std::vector<Basis> &basis() const { return basis_; }
    [[nodiscard]] int num_qubits() const { return num_qubits_; }

  private:
    int num_qubits_ = 0;
    std::vector<Basis> basis_;
    std::vector<double> cdf_;
};

/// Appends `shots` samples drawn with rng; batch.basis must already be set.
void append_samples(ShotBatch &batch, const StateVector &state, std::size_t shots, Rng &rng);

/// Applies a Hadamard on every X-basis site (in place).
void rotate_to_basis(StateVector &state, std::span<const Basis> basis);

/// CSV with header "shot_index,bitstring,basis,parity"; bitstrings list site 0
/// first as '0'/'1', the basis column lists the per-site basis letters, and
/// parity is 1 or -1.
std::string to_csv(const ShotBatch &batch);
/// Throws ConfigError on malformed input.
ShotBatch shots_from_csv(const std::string &csv);

} // namespace cfloquet::sim
