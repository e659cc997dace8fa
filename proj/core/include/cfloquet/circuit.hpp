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
 * Gate kernels, flat circuits, and trajectory depolarizing noise.
 *
 * Rotation conventions: rzz(theta) = exp(-i theta Z_i Z_j / 2),
 * rx(theta) = exp(-i theta X_i / 2), and a Pauli rotation of string P is
 * exp(-i theta P / 2). A two-qubit gate matrix is row-major 4x4 in the basis
 * index 2 * b_first + b_second.
 */

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "cfloquet/lattice.hpp"
#include "cfloquet/random.hpp"
#include "cfloquet/state_vector.hpp"

namespace cfloquet::sim {

using Matrix4 = std::array<Complex, 16>;

struct TwoQubitGate {
    Matrix4 matrix{};
    int first = 0;
    int second = 1;
};

struct RzzOp {
    int first = 0;
    int second = 1;
    double theta = 0.0;
};

struct RxOp {
    int site = 0;
    double theta = 0.0;
};

/// exp(-i theta P / 2); the term coefficient is ignored.
struct PauliRotationOp {
    lattice::PauliTerm pauli;
    double theta = 0.0;
};

/// Multiplies the state by exp(-i phi).
struct GlobalPhaseOp {
    double phi = 0.0;
};

using Operation = std::variant<TwoQubitGate, RzzOp, RxOp, PauliRotationOp, GlobalPhaseOp>;

/// True for operations that act on exactly two sites.
bool is_two_qubit(const Operation &op);

struct Circuit {
    int num_qubits = 0;
    std::vector<Operation> ops;

    void append(const Circuit &other);
    [[nodiscard]] Circuit inverse() const;
    [[nodiscard]] std::size_t two_qubit_count() const;
};

/// exp(-i (phi Y(x)Z + gamma Z(x)Y) / 2) in closed form; the two generators
/// commute and their product is X(x)X.
Matrix4 mera_gate(double phi, double gamma);

Matrix4 adjoint(const Matrix4 &m);
/// max |(M^dagger M - I)_{kl}|.
double unitarity_error(const Matrix4 &m);

void apply_gate(StateVector &state, const TwoQubitGate &gate);
void apply_rzz(StateVector &state, int i, int j, double theta);
void apply_rx(StateVector &state, int i, double theta);
void apply_pauli_rotation(StateVector &state, const lattice::PauliTerm &pauli, double theta);
/// state <- P state for a Pauli string (coefficient ignored).
void apply_pauli(StateVector &state, const lattice::PauliTerm &pauli);
void apply(StateVector &state, const Operation &op);
/// Applies the diagonal gates as one sweep; equal to applying them in order.
void apply_rzz_batch(StateVector &state, std::span<const RzzOp> ops);

void run(StateVector &state, const Circuit &circuit);

/// Outcome of one noisy trajectory.
struct TrajectoryRecord {
    std::size_t injected = 0;      ///< number of Pauli errors inserted
    std::size_t parity_flips = 0;  ///< errors anticommuting with prod X
};

/// Runs the circuit, and after every two-qubit operation applies, with
/// probability p, one of the 15 non-identity two-site Paulis chosen uniformly.
TrajectoryRecord run_noisy(StateVector &state, const Circuit &circuit, double p, Rng &rng);

/// Draws the variates run_noisy would consume on an error-free pass. Returns
/// false at the first error, leaving rng mid-stream; callers that then replay
/// with run_noisy must restore a copy taken beforehand.
bool draw_clean_pass(const Circuit &circuit, double p, Rng &rng);

/// Two-site depolarizing channel attached to a circuit. Trajectory k draws
/// its randomness from derive_seed(seed, k), so results do not depend on the
/// order in which trajectories are evaluated.
class NoisySampler {
  public:
    NoisySampler(Circuit circuit, double p, std::uint64_t seed);

    [[nodiscard]] double probability() const { return p_; }
    [[nodiscard]] const Circuit &circuit() const { return circuit_; }

    /// Applies trajectory number index of the noisy circuit to state in place.
    TrajectoryRecord run_trajectory(StateVector &state, std::uint64_t index) const;

  private:
    Circuit circuit_;
    double p_;
    std::uint64_t seed_;
};

} // namespace cfloquet::sim
