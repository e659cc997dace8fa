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
 * Time evolution: second-order Trotter segments compiled to circuits, and a
 * Krylov (Lanczos) approximation of exp(-i H t) |psi> that only applies H
 * term-wise.
 */

#pragma once

#include "cfloquet/circuit.hpp"
#include "cfloquet/lattice.hpp"
#include "cfloquet/pauli_operator.hpp"
#include "cfloquet/state_vector.hpp"

namespace cfloquet::sim {

/// Symmetric splitting with layer A = all multi-site terms and layer B = all
/// single-site terms:
///   [exp(-i H_A tau/2m) exp(-i H_B tau/m) exp(-i H_A tau/2m)]^m,  m = steps.
/// Each layer must consist of mutually commuting strings, otherwise
/// UnsupportedStructureError is thrown. tau may be negative.
Circuit trotter_circuit(const lattice::HamiltonianSpec &h, double tau, int steps = 1);

void trotter_segment(StateVector &state, const lattice::HamiltonianSpec &h, double tau,
                     int steps = 1);

struct KrylovOptions {
    double tol = 1e-10;
    int max_dimension = 40;
};

/// state <- exp(-i H t) state with error at most about tol (2-norm).
/// Throws NumericalError when the step size collapses.
void exact_evolve(StateVector &state, const PauliOperator &h, double t,
                  const KrylovOptions &options = {});
void exact_evolve(StateVector &state, const lattice::HamiltonianSpec &h, double t,
                  double tol = 1e-10);

} // namespace cfloquet::sim
