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
 * Continuum predictions for the two-step deformed-CFT Floquet drive. Every
 * segment of the drive acts on the chiral sector as an SU(1,1) Mobius matrix;
 * the one-cycle product determines the dynamical phase, the Loschmidt echo,
 * and the energy density of the evolved vacuum.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "cfloquet/types.hpp"

namespace cfloquet::cft {

/// SU(1,1) element [[a, b], [conj(b), conj(a)]] with |a|^2 - |b|^2 = 1.
struct MobiusMatrix {
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};

    static MobiusMatrix identity() { return {}; }

    /// |a|^2 - |b|^2.
    [[nodiscard]] double determinant() const { return std::norm(a) - std::norm(b); }
    /// Tr = a + conj(a), always real.
    [[nodiscard]] double trace() const { return 2.0 * a.real(); }

    friend MobiusMatrix operator*(const MobiusMatrix &lhs, const MobiusMatrix &rhs) {
        return {lhs.a * rhs.a + lhs.b * std::conj(rhs.b), lhs.a * rhs.b + lhs.b * std::conj(rhs.a)};
    }
};

/// Two-step drive: H0 for T0, then H1 for T1, on a ring of circumference L.
/// Lattice durations are rescaled to CFT time by the velocity v.
struct DriveSpec {
    int N = 16;
    double L = 16.0;
    int q = 2;
    KappaTriplet kappa0{1.0, 0.0, 0.0};
    KappaTriplet kappa1{1.0, 0.0, 0.0};
    double T0 = 0.0;
    double T1 = 0.0;
    double v = 1.0;

    /// Checks N > 0, L > 0, 1 <= q < N/2, v > 0; throws DomainError.
    void validate() const;
};

enum class Phase { Heating, NonHeating, Critical };

struct PhaseLabel {
    Phase label = Phase::Critical;
    double trace_magnitude = 2.0;
    double tolerance = 0.0;
};

inline constexpr double kDefaultCriticalTolerance = 1e-9;

const char *to_string(Phase phase);

/// Mobius matrix of evolution for time t under the deformation kappa with
/// wavenumber q on a ring of circumference L. Depends on t and L only
/// through t/L. Throws DomainError for L <= 0 or q < 1.
MobiusMatrix segment_matrix(const KappaTriplet &kappa, double t, int q, double L);

/// Antichiral partner: (a, -conj(b)).
MobiusMatrix antichiral_of(const MobiusMatrix &g);

struct CycleMatrices {
    MobiusMatrix chiral;
    MobiusMatrix antichiral;
};

/// One-cycle products G0(v T0) G1(v T1) for both chiralities.
CycleMatrices one_cycle(const DriveSpec &drive);

PhaseLabel classify(const MobiusMatrix &pi, double tol = kDefaultCriticalTolerance);

/// pi^n. Uses the closed-form eigen-decomposition away from the parabolic
/// point (||Tr| - 2| > 1e-8) and repeated multiplication near it.
MobiusMatrix cycle_power(const MobiusMatrix &pi, std::uint64_t n);

/// Exponent (q^2 - 1) c / (3 q) of the closed-form echo |alpha_n|^-exponent.
double echo_exponent(int q, double c);

/// Loschmidt echo of the CFT vacuum after n cycles; in (0, 1].
double loschmidt_cft(const DriveSpec &drive, std::uint64_t n, double c);

/// Echo for n = 0..n_max, sharing a single one-cycle evaluation.
std::vector<double> loschmidt_series(const DriveSpec &drive, std::uint64_t n_max, double c);

/// Energy density at position x after n cycles; x is wrapped into [0, L).
double energy_density_cft(const DriveSpec &drive, std::uint64_t n, double c, double x);

/// Energy density integrated over the ring after n cycles.
double total_energy_cft(const DriveSpec &drive, std::uint64_t n, double c);

struct HeatingPeaks {
    std::vector<double> chiral;     ///< q positions, ascending
    std::vector<double> antichiral; ///< q positions, ascending
    std::vector<double> all;        ///< 2q positions, ascending
};

/// Positions in [0, L) where the energy density accumulates in the heating
/// phase, from the attracting fixed point of each one-cycle Mobius map.
/// Throws PhaseError unless the drive classifies as Heating.
HeatingPeaks heating_peaks(const DriveSpec &drive, double tol = kDefaultCriticalTolerance);

struct PhaseDiagram {
    std::vector<double> T0_axis;
    std::vector<double> T1_axis;
    /// Row-major, one row per T0 value: cells[i * T1_axis.size() + j].
    std::vector<PhaseLabel> cells;

    [[nodiscard]] const PhaseLabel &at(std::size_t i0, std::size_t i1) const {
        return cells[i0 * T1_axis.size() + i1];
    }
};

/// Classifies every (T0, T1) pair with the remaining fields of drive_template.
PhaseDiagram phase_diagram(const DriveSpec &drive_template, const std::vector<double> &T0_grid,
                           const std::vector<double> &T1_grid,
                           double tol = kDefaultCriticalTolerance);

} // namespace cfloquet::cft
