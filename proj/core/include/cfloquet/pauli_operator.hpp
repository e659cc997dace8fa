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
#include <vector>

#include "cfloquet/lattice.hpp"
#include "cfloquet/state_vector.hpp"

namespace cfloquet::sim {

/// Bit masks of one Pauli string: P|x> = i^{#Y} (-1)^{popcount(x & phase_mask)} |x ^ flip_mask>.
struct PauliMasks {
    std::uint64_t flip_mask = 0;  ///< X or Y factors
    std::uint64_t phase_mask = 0; ///< Y or Z factors
    int y_count = 0;
};

/// Throws DomainError for out-of-range or repeated sites.
PauliMasks pauli_masks(const lattice::PauliTerm &term, int N);

/// Sum of Pauli strings compiled for matrix-free application. Terms are grouped
/// by flip mask; the diagonal group is tabulated once.
class PauliOperator {
  public:
    PauliOperator(int N, std::span<const lattice::PauliTerm> terms);
    explicit PauliOperator(const lattice::HamiltonianSpec &h);

    [[nodiscard]] int num_qubits() const { return num_qubits_; }

    /// out = H in. Sizes must equal 2^N and the spans must not alias.
    void apply(std::span<const Complex> in, std::span<Complex> out) const;

    /// <psi|H|psi>.
    [[nodiscard]] Complex expectation_complex(const StateVector &psi) const;
    [[nodiscard]] double expectation(const StateVector &psi) const {
        return expectation_complex(psi).real();
    }

    /// Sum of |coefficients|; bounds the spectral radius.
    [[nodiscard]] double norm_bound() const { return norm_bound_; }

  private:
    struct Entry {
        Complex coefficient; ///< includes i^{#Y}
        std::uint64_t phase_mask;
    };
    struct Group {
        std::uint64_t flip_mask;
        std::vector<Entry> entries;
    };

    int num_qubits_;
    std::vector<double> diagonal_;
    std::vector<Group> groups_;
    double norm_bound_ = 0.0;
};

/// Sum_k coeff_k <psi|P_k|psi>; real part of the Hermitian combination.
double expectation(const StateVector &psi, std::span<const lattice::PauliTerm> terms);

} // namespace cfloquet::sim
