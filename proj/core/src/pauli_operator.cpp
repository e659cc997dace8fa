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

#include "cfloquet/pauli_operator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cfloquet/errors.hpp"

namespace cfloquet::sim {
namespace {

Complex i_power(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, 1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, -1.0};
    }
}

double sign_of(std::uint64_t x) { return (std::popcount(x) & 1) ? -1.0 : 1.0; }

} // namespace

PauliMasks pauli_masks(const lattice::PauliTerm &term, int N) {
    PauliMasks m;
    for (const auto &f : term.factors) {
        if (f.site < 0 || f.site >= N) {
            throw DomainError("pauli term: site " + std::to_string(f.site) + " out of range");
        }
        const std::uint64_t bit = std::uint64_t{1} << f.site;
        if ((m.flip_mask | m.phase_mask) & bit) {
            throw DomainError("pauli term: repeated site " + std::to_string(f.site));
        }
        switch (f.axis) {
        case lattice::Axis::X:
            m.flip_mask |= bit;
            break;
        case lattice::Axis::Y:
            m.flip_mask |= bit;
            m.phase_mask |= bit;
            ++m.y_count;
            break;
        case lattice::Axis::Z:
            m.phase_mask |= bit;
            break;
        }
    }
    return m;
}

PauliOperator::PauliOperator(int N, std::span<const lattice::PauliTerm> terms) : num_qubits_(N) {
    check_capacity(N);
    const std::size_t dim = std::size_t{1} << N;
    for (const auto &t : terms) {
        const PauliMasks m = pauli_masks(t, N);
        norm_bound_ += std::abs(t.coefficient);
        if (m.flip_mask == 0) {
            if (diagonal_.empty()) {
                diagonal_.assign(dim, 0.0);
            }
            for (std::size_t x = 0; x < dim; ++x) {
                diagonal_[x] += t.coefficient * sign_of(x & m.phase_mask);
            }
            continue;
        }
        auto it = std::find_if(groups_.begin(), groups_.end(),
                               [&](const Group &g) { return g.flip_mask == m.flip_mask; });
        if (it == groups_.end()) {
            groups_.push_back({m.flip_mask, {}});
            it = std::prev(groups_.end());
        }
        it->entries.push_back({t.coefficient * i_power(m.y_count), m.phase_mask});
    }
}

PauliOperator::PauliOperator(const lattice::HamiltonianSpec &h)
    : PauliOperator(h.N, std::span<const lattice::PauliTerm>(h.terms)) {}

void PauliOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
    const std::size_t dim = std::size_t{1} << num_qubits_;
    if (in.size() != dim || out.size() != dim) {
        throw DomainError("PauliOperator::apply: dimension mismatch");
    }
    if (diagonal_.empty()) {
        std::fill(out.begin(), out.end(), Complex{});
    } else {
        for (std::size_t y = 0; y < dim; ++y) {
            out[y] = diagonal_[y] * in[y];
        }
    }
    for (const auto &g : groups_) {
        if (g.entries.size() == 1 && g.entries[0].phase_mask == 0) {
            const Complex c = g.entries[0].coefficient;
            for (std::size_t y = 0; y < dim; ++y) {
                out[y] += c * in[y ^ g.flip_mask];
            }
            continue;
        }
        for (std::size_t y = 0; y < dim; ++y) {
            const std::size_t x = y ^ g.flip_mask;
            Complex c{};
            for (const auto &e : g.entries) {
                c += e.coefficient * sign_of(x & e.phase_mask);
            }
            out[y] += c * in[x];
        }
    }
}

Complex PauliOperator::expectation_complex(const StateVector &psi) const {
    const std::size_t dim = std::size_t{1} << num_qubits_;
    if (psi.size() != dim) {
        throw DomainError("PauliOperator::expectation: dimension mismatch");
    }
    const auto a = psi.amplitudes();
    Complex total{};
    if (!diagonal_.empty()) {
        double d = 0.0;
        for (std::size_t y = 0; y < dim; ++y) {
            d += diagonal_[y] * std::norm(a[y]);
        }
        total += d;
    }
    for (const auto &g : groups_) {
        for (std::size_t y = 0; y < dim; ++y) {
            const std::size_t x = y ^ g.flip_mask;
            Complex c{};
            for (const auto &e : g.entries) {
                c += e.coefficient * sign_of(x & e.phase_mask);
            }
            total += std::conj(a[y]) * c * a[x];
        }
    }
    return total;
}

double expectation(const StateVector &psi, std::span<const lattice::PauliTerm> terms) {
    return PauliOperator(psi.num_qubits(), terms).expectation(psi);
}

} // namespace cfloquet::sim
