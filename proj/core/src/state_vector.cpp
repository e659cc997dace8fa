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

#include "cfloquet/state_vector.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "cfloquet/errors.hpp"

namespace cfloquet::sim {
namespace {

static_assert(std::endian::native == std::endian::little,
              "state export assumes a little-endian host");

} // namespace

void check_capacity(int N) {
    if (N < 1 || N > kMaxQubits) {
        throw CapacityError("statevector: N=" + std::to_string(N) + " outside supported range [1, " +
                            std::to_string(kMaxQubits) + "]");
    }
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    check_capacity(num_qubits);
    amplitudes_.assign(std::size_t{1} << num_qubits, Complex{});
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    check_capacity(num_qubits);
    if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
        throw DomainError("statevector: amplitude count does not match 2^N");
    }
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto &a : amplitudes_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

void StateVector::normalize() {
    const double n = norm();
    if (n == 0.0) {
        throw NumericalError("statevector: cannot normalize the zero vector");
    }
    const double inv = 1.0 / n;
    for (auto &a : amplitudes_) {
        a *= inv;
    }
}

StateVector initial_plus_state(int N) {
    check_capacity(N);
    const double amp = std::pow(2.0, -0.5 * N);
    return StateVector(N, std::vector<Complex>(std::size_t{1} << N, Complex{amp, 0.0}));
}

Complex overlap(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) {
        throw DomainError("overlap: dimension mismatch");
    }
    Complex s{};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += std::conj(x[i]) * y[i];
    }
    return s;
}

double distance(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) {
        throw DomainError("distance: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::norm(a[i] - b[i]);
    }
    return std::sqrt(s);
}

void write_state(std::ostream &out, const StateVector &state) {
    const std::uint64_t n = static_cast<std::uint64_t>(state.num_qubits());
    out.write(reinterpret_cast<const char *>(&n), sizeof n);
    out.write(reinterpret_cast<const char *>(state.amplitudes().data()),
              static_cast<std::streamsize>(state.size() * sizeof(Complex)));
    if (!out) {
        throw ConfigError("write_state: stream error");
    }
}

StateVector read_state(std::istream &in) {
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char *>(&n), sizeof n);
    if (!in || n == 0 || n > static_cast<std::uint64_t>(kMaxQubits)) {
        throw ConfigError("read_state: bad or unsupported header");
    }
    std::vector<Complex> amps(std::size_t{1} << n);
    in.read(reinterpret_cast<char *>(amps.data()),
            static_cast<std::streamsize>(amps.size() * sizeof(Complex)));
    if (!in) {
        throw ConfigError("read_state: truncated amplitude data");
    }
    return StateVector(static_cast<int>(n), std::move(amps));
}

} // namespace cfloquet::sim
