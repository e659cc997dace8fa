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

#include "cfloquet/measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cfloquet/errors.hpp"

namespace cfloquet::sim {
namespace {

void hadamard(StateVector &state, int i) {
    const double r = std::numbers::sqrt2 / 2.0;
    const std::size_t bit = std::size_t{1} << i;
    auto a = state.amplitudes();
    for (std::size_t base = 0; base < a.size(); base += 2 * bit) {
        Complex *lo = a.data() + base;
        Complex *hi = lo + bit;
        for (std::size_t k = 0; k < bit; ++k) {
            const Complex v0 = lo[k];
            const Complex v1 = hi[k];
            lo[k] = r * (v0 + v1);
            hi[k] = r * (v0 - v1);
        }
    }
}

char basis_char(Basis b) { return b == Basis::X ? 'X' : 'Z'; }

} // namespace

bool ShotBatch::all_in(Basis b) const {
    return std::all_of(basis.begin(), basis.end(), [b](Basis x) { return x == b; });
}

int ShotBatch::parity(std::size_t shot) const {
    return (std::popcount(outcomes.at(shot)) & 1) ? -1 : 1;
}

void rotate_to_basis(StateVector &state, std::span<const Basis> basis) {
    if (basis.size() != static_cast<std::size_t>(state.num_qubits())) {
        throw DomainError("measurement: basis list length must equal N");
    }
    for (int i = 0; i < state.num_qubits(); ++i) {
        if (basis[static_cast<std::size_t>(i)] == Basis::X) {
            hadamard(state, i);
        }
    }
}

Sampler::Sampler(const StateVector &state, std::span<const Basis> basis) : basis_(basis.begin(), basis.end()) {
    num_qubits_ = state.num_qubits();
    StateVector rotated = state;
    rotate_to_basis(rotated, basis_);
    const auto a = rotated.amplitudes();
    cdf_.resize(a.size());
    double acc = 0.0;
    for (std::size_t x = 0; x < a.size(); ++x) {
        acc += std::norm(a[x]);
        cdf_[x] = acc;
    }
}

std::uint64_t Sampler::draw(Rng &rng) const {
    const double total = cdf_.back();
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) {
        --it;
    }
    // Skip zero-probability entries that share the cumulative value.
    while (it != cdf_.begin() && *it == *(it - 1)) {
        --it;
    }
    return static_cast<std::uint64_t>(it - cdf_.begin());
}

void append_samples(ShotBatch &batch, const StateVector &state, std::size_t shots, Rng &rng) {
    const Sampler sampler(state, batch.basis);
    batch.outcomes.reserve(batch.outcomes.size() + shots);
    for (std::size_t s = 0; s < shots; ++s) {
        batch.outcomes.push_back(sampler.draw(rng));
    }
}

ShotBatch sample_measurements(const StateVector &state, std::span<const Basis> basis,
                              std::size_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw DomainError("sample_measurements: shots must be >= 1");
    }
    ShotBatch batch;
    batch.num_qubits = state.num_qubits();
    batch.basis.assign(basis.begin(), basis.end());
    Rng rng(seed);
    append_samples(batch, state, shots, rng);
    return batch;
}

ShotBatch sample_measurements(const StateVector &state, Basis basis, std::size_t shots,
                              std::uint64_t seed) {
    const std::vector<Basis> per_site(static_cast<std::size_t>(state.num_qubits()), basis);
    return sample_measurements(state, per_site, shots, seed);
}

std::string to_csv(const ShotBatch &batch) {
    std::string basis;
    for (Basis b : batch.basis) {
        basis += basis_char(b);
    }
    std::string out = "shot_index,bitstring,basis,parity\n";
    for (std::size_t s = 0; s < batch.size(); ++s) {
        out += std::to_string(s);
        out += ',';
        for (int i = 0; i < batch.num_qubits; ++i) {
            out += ((batch.outcomes[s] >> i) & 1) ? '1' : '0';
        }
        out += ',';
        out += basis;
        out += ',';
        out += std::to_string(batch.parity(s));
        out += '\n';
    }
    return out;
}

ShotBatch shots_from_csv(const std::string &csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "shot_index,bitstring,basis,parity") {
        throw ConfigError("shot csv: missing or unexpected header");
    }
    ShotBatch batch;
    batch.num_qubits = -1;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string col;
        while (std::getline(ls, col, ',')) {
            cols.push_back(col);
        }
        if (cols.size() != 4) {
            throw ConfigError("shot csv: expected 4 columns in '" + line + "'");
        }
        const std::string &bits = cols[1];
        const std::string &basis = cols[2];
        if (bits.empty() || bits.size() != basis.size() || bits.size() > 64) {
            throw ConfigError("shot csv: inconsistent bitstring/basis length");
        }
        if (batch.num_qubits < 0) {
            batch.num_qubits = static_cast<int>(bits.size());
            for (char c : basis) {
                if (c != 'X' && c != 'Z') {
                    throw ConfigError("shot csv: unknown basis letter");
                }
                batch.basis.push_back(c == 'X' ? Basis::X : Basis::Z);
            }
        } else if (static_cast<int>(bits.size()) != batch.num_qubits) {
            throw ConfigError("shot csv: bitstring length changes between rows");
        }
        std::uint64_t outcome = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') {
                outcome |= std::uint64_t{1} << i;
            } else if (bits[i] != '0') {
                throw ConfigError("shot csv: bitstring must contain only 0/1");
            }
        }
        batch.outcomes.push_back(outcome);
        const int parity = (std::popcount(outcome) & 1) ? -1 : 1;
        if (cols[3] != std::to_string(parity)) {
            throw ConfigError("shot csv: parity column disagrees with bitstring");
        }
    }
    if (batch.num_qubits < 0) {
        batch.num_qubits = 0;
    }
    return batch;
}

} // namespace cfloquet::sim
