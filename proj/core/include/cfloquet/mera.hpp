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
 * Hierarchical (top-down) MERA-style preparation circuit on N = 2^k sites.
 *
 * Layer 0 is one Top gate on (0, N/2). Layer l >= 1 works at spacing
 * d = N / 2^l: every representative r (a multiple of d) is branched by an
 * Isometry on (r, r + d/2), then an Entangler couples each new site r + d/2 to
 * the next representative (r + d) mod N, which includes the periodic wrap.
 * Every gate is exp(-i (phi Y(x)Z + gamma Z(x)Y) / 2) acting on |+>^N.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfloquet/circuit.hpp"
#include "cfloquet/lattice.hpp"
#include "cfloquet/pauli_operator.hpp"
#include "cfloquet/state_vector.hpp"

namespace cfloquet::mera {

enum class GateKind { Top, Isometry, Entangler };

const char *to_string(GateKind kind);

struct GateSlot {
    GateKind kind = GateKind::Top;
    int first = 0;
    int second = 0;
    int layer = 0;

    friend bool operator==(const GateSlot &, const GateSlot &) = default;
};

struct MeraLayout {
    int N = 0;
    std::vector<GateSlot> gates;

    [[nodiscard]] int layer_count() const;
    /// Stable FNV-1a digest of N and the ordered gate list, as 16 hex digits.
    [[nodiscard]] std::string descriptor_hash() const;
};

struct GateAngles {
    double phi = 0.0;
    double gamma = 0.0;
};

using MeraParams = std::vector<GateAngles>;

/// Supported N: 4, 8, 16, 32. Throws DomainError otherwise.
MeraLayout build_layout(int N);

/// Circuit applying the layout's gates in order.
sim::Circuit mera_circuit(const MeraLayout &layout, const MeraParams &params);

/// U_MERA |+>^N. Throws DomainError when params and layout are misaligned.
sim::StateVector prepare_state(const MeraLayout &layout, const MeraParams &params);

enum class GradientMethod {
    /// Reverse-mode (adjoint) differentiation through the circuit.
    Adjoint,
    /// Central differences with step fd_step.
    CentralDifference,
};

/// Energy <psi(params)|H|psi(params)> and its gradient with respect to the flat
/// parameter vector (phi_0, gamma_0, phi_1, ...).
struct EnergyGradient {
    double energy = 0.0;
    std::vector<double> gradient;
};

EnergyGradient energy_and_gradient(const MeraLayout &layout, const MeraParams &params,
                                   const sim::PauliOperator &h, GradientMethod method,
                                   double fd_step = 1e-5);

struct OptimizeOptions {
    int restarts = 8;
    std::uint64_t seed = 20260514;
    /// Explicit per-restart seeds; overrides `restarts`/`seed` when non-empty.
    std::vector<std::uint64_t> restart_seeds;
    double init_range = 0.3;
    int max_iterations = 3000;
    double gradient_tol = 1e-7;
    /// Stop when the accepted decrease stays below this for 10 iterations.
    double energy_tol = 1e-13;
    GradientMethod gradient = GradientMethod::Adjoint;
    double fd_step = 1e-5;
    int history = 12;
    /// Optional reference state; when set, infidelity is recorded per step.
    const sim::StateVector *reference = nullptr;
};

struct TraceEntry {
    double energy = 0.0;
    double infidelity = -1.0; ///< negative when no reference was supplied
};

struct RestartResult {
    std::uint64_t seed = 0;
    MeraParams params;
    double energy = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<TraceEntry> trace; ///< objective at every accepted step
};

struct OptimizeResult {
    MeraParams params;
    double energy = 0.0;
    bool converged = false;
    std::vector<TraceEntry> trace; ///< trace of the winning restart
    std::vector<RestartResult> restarts;
    std::size_t best_restart = 0;
};

/// Minimises the energy of h0 over the layout's angles with L-BFGS and an
/// Armijo backtracking line search. Restart 0 starts from `init` when
/// non-empty; other starts draw angles uniformly from [-init_range, init_range].
/// The lowest final energy wins (ties broken by seed).
OptimizeResult optimize(const MeraLayout &layout, const lattice::HamiltonianSpec &h0,
                        const MeraParams &init, const OptimizeOptions &options = {});

struct FidelityMetrics {
    double energy_density_error = 0.0;
    double infidelity = 0.0;
    double exact_energy = 0.0;
    bool degenerate = false;
};

/// ((<H> - E0)/N, 1 - <psi|P0|psi>) with P0 the projector onto the exact
/// ground space of h0.
FidelityMetrics fidelity_metrics(const sim::StateVector &state, const lattice::HamiltonianSpec &h0);

/// Same, against a precomputed ground space.
FidelityMetrics fidelity_metrics(const sim::StateVector &state, const sim::PauliOperator &h0,
                                 double exact_energy, const std::vector<sim::StateVector> &ground_space);

/// JSON: {"schema":1,"kind":"mera_params","N":..,"layout_hash":"..","gates":..,
///        "params":[[phi,gamma],...]} with 17-digit doubles.
std::string params_to_json(const MeraLayout &layout, const MeraParams &params);
/// Throws ConfigError on malformed JSON or when the hash does not match layout.
MeraParams params_from_json(const std::string &json, const MeraLayout &layout);

} // namespace cfloquet::mera
