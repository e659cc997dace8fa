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
#include <vector>

#include "cfloquet/lattice.hpp"
#include "cfloquet/pauli_operator.hpp"
#include "cfloquet/state_vector.hpp"

namespace cfloquet::sim {

struct EigenOptions {
    /// Required residual ||H psi - E psi||.
    double tol = 1e-9;
    int krylov_dimension = 60;
    int max_restarts = 400;
    /// 0: whole space; +1 / -1: restrict to that eigenspace of prod X.
    int parity_sector = 0;
    std::uint64_t seed = 0x5EED;
    /// Run a deflated second solve to detect a degenerate lowest level.
    bool check_degeneracy = true;
    /// Levels closer than this are treated as degenerate.
    double degeneracy_tol = 1e-7;
};

struct Eigenpair {
    double energy = 0.0;
    StateVector state{1};
    double residual = 0.0;
    int matvecs = 0;
};

struct GroundState {
    double energy = 0.0;
    StateVector state{1};
    double residual = 0.0;
    /// True when more than one independent vector shares the lowest level.
    bool degenerate = false;
    /// Orthonormal basis of the lowest level (just `state` when nondegenerate).
    std::vector<StateVector> ground_space;
    /// Next level in the same sector, when the degeneracy check ran.
    double next_energy = 0.0;
};

/// Lowest eigenpair of H restricted to the orthogonal complement of `deflate`
/// (and to a parity sector if requested), by explicitly restarted Lanczos with
/// full reorthogonalization. Throws NumericalError if tol is not reached.
Eigenpair lowest_eigenpair(const PauliOperator &h, const EigenOptions &options,
                           const std::vector<StateVector> &deflate = {});

/// Ground state of H with degeneracy detection.
GroundState ground_state(const lattice::HamiltonianSpec &h, const EigenOptions &options = {});
GroundState ground_state(const PauliOperator &h, const EigenOptions &options = {});

/// Projects onto the +1 (sector = 1) or -1 eigenspace of prod X in place.
void project_parity(std::span<Complex> psi, int sector);

} // namespace cfloquet::sim
