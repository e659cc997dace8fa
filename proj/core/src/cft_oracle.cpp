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

#include "cfloquet/cft_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cfloquet/errors.hpp"
#include "cfloquet/parallel.hpp"

namespace cfloquet::cft {
namespace {

using std::numbers::pi;

constexpr double kParabolicBand = 1e-8;

double wrap(double x, double L) {
    double r = std::fmod(x, L);
    if (r < 0.0) {
        r += L;
    }
    return r >= L ? 0.0 : r;
}

// Chebyshev-type sequence u_n with u_0 = 0, u_1 = 1, u_{n+1} = tr u_n - u_{n-1},
// evaluated in closed form. Returns (u_n, u_{n-1}).
std::pair<double, double> chebyshev_pair(double tr, std::uint64_t n) {
    const double half = 0.5 * tr;
    const double nd = static_cast<double>(n);
    if (std::abs(half) < 1.0) {
        const double theta = std::acos(half);
        const double s = std::sin(theta);
        return {std::sin(nd * theta) / s, std::sin((nd - 1.0) * theta) / s};
    }
    // |tr| > 2: tr = sign * 2 cosh(mu); u_n = sign^(n-1) sinh(n mu) / sinh(mu).
    const double sign = half > 0.0 ? 1.0 : -1.0;
    const double mu = std::acosh(std::abs(half));
    const double s = std::sinh(mu);
    const double sign_n = (n % 2 == 1) ? 1.0 : sign;  // sign^(n-1)
    const double sign_nm1 = (n % 2 == 0) ? 1.0 : sign; // sign^(n-2)
    return {sign_n * std::sinh(nd * mu) / s, sign_nm1 * std::sinh((nd - 1.0) * mu) / s};
}

std::vector<double> sorted_positions(double theta, int q, double L) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) {
        out.push_back(wrap(L * (theta + 2.0 * pi * k) / (2.0 * pi * q), L));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Angle z on the unit circle minimising |w1 z + w2| for the left eigenvector
// of the expanding eigenvalue: z = -w2 / w1 with w1 = 1.
double attracting_angle(const MobiusMatrix &m) {
    const double tr = m.trace();
    const double lambda = 0.5 * (tr + std::copysign(std::sqrt(tr * tr - 4.0), tr));
    const Complex w2 = (lambda - m.a) / std::conj(m.b);
    return std::arg(-w2);
}

} // namespace

const char *to_string(Phase phase) {
    switch (phase) {
    case Phase::Heating:
        return "heating";
    case Phase::NonHeating:
        return "non-heating";
    case Phase::Critical:
        return "critical";
    }
    return "unknown";
}

void DriveSpec::validate() const {
    if (N <= 0) {
        throw DomainError("drive: N must be positive");
    }
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw DomainError("drive: L must be positive");
    }
    if (q < 1 || 2 * q >= N) {
        throw DomainError("drive: q must satisfy 1 <= q < N/2 (got q=" + std::to_string(q) +
                          ", N=" + std::to_string(N) + ")");
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("drive: velocity v must be positive");
    }
}

MobiusMatrix segment_matrix(const KappaTriplet &kappa, double t, int q, double L) {
    if (!(L > 0.0)) {
        throw DomainError("segment_matrix: L must be positive");
    }
    if (q < 1) {
        throw DomainError("segment_matrix: q must be >= 1");
    }
    const double x = pi * q * (t / L);
    const double s2 = kappa.s_squared();
    const Complex s = std::sqrt(Complex(s2, 0.0));
    const Complex z = s * x;

    // cos(s x) and sin(s x) / s are even in s; the series covers s -> 0.
    double cos_sx = 0.0;
    double sinc_sx = 0.0;
    if (std::abs(z) < 1e-4) {
        const double z2 = s2 * x * x;
        cos_sx = 1.0 - z2 / 2.0 + z2 * z2 / 24.0;
        sinc_sx = x * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
    } else {
        cos_sx = std::cos(z).real();
        sinc_sx = (std::sin(z) / s).real();
    }
    const Complex i{0.0, 1.0};
    return {-cos_sx - i * kappa.kappa0 * sinc_sx,
            -i * Complex(kappa.kappa_plus, kappa.kappa_minus) * sinc_sx};
}

MobiusMatrix antichiral_of(const MobiusMatrix &g) { return {g.a, -std::conj(g.b)}; }

CycleMatrices one_cycle(const DriveSpec &drive) {
    drive.validate();
    const MobiusMatrix g0 = segment_matrix(drive.kappa0, drive.v * drive.T0, drive.q, drive.L);
    const MobiusMatrix g1 = segment_matrix(drive.kappa1, drive.v * drive.T1, drive.q, drive.L);
    return {g0 * g1, antichiral_of(g0) * antichiral_of(g1)};
}

PhaseLabel classify(const MobiusMatrix &pi_matrix, double tol) {
    PhaseLabel out;
    out.trace_magnitude = std::abs(pi_matrix.trace());
    out.tolerance = tol;
    if (out.trace_magnitude > 2.0 + tol) {
        out.label = Phase::Heating;
    } else if (out.trace_magnitude < 2.0 - tol) {
        out.label = Phase::NonHeating;
    } else {
        out.label = Phase::Critical;
    }
    return out;
}

MobiusMatrix cycle_power(const MobiusMatrix &pi_matrix, std::uint64_t n) {
    if (n == 0) {
        return MobiusMatrix::identity();
    }
    if (n == 1) {
        return pi_matrix;
    }
    const double tr = pi_matrix.trace();
    if (std::abs(std::abs(tr) - 2.0) > kParabolicBand) {
        // Cayley-Hamilton with unit determinant: M^n = u_n M - u_{n-1} I.
        const auto [un, unm1] = chebyshev_pair(tr, n);
        return {un * pi_matrix.a - unm1, un * pi_matrix.b};
    }
    MobiusMatrix result = MobiusMatrix::identity();
    for (std::uint64_t k = 0; k < n; ++k) {
        result = result * pi_matrix;
    }
    return result;
}

double echo_exponent(int q, double c) {
    const double qd = static_cast<double>(q);
    return (qd * qd - 1.0) * c / (3.0 * qd);
}

double loschmidt_cft(const DriveSpec &drive, std::uint64_t n, double c) {
    if (!(c > 0.0)) {
        throw DomainError("loschmidt_cft: central charge must be positive");
    }
    const MobiusMatrix power = cycle_power(one_cycle(drive).chiral, n);
    return std::pow(std::abs(power.a), -echo_exponent(drive.q, c));
}

std::vector<double> loschmidt_series(const DriveSpec &drive, std::uint64_t n_max, double c) {
    if (!(c > 0.0)) {
        throw DomainError("loschmidt_series: central charge must be positive");
    }
    const MobiusMatrix pi_matrix = one_cycle(drive).chiral;
    const double exponent = echo_exponent(drive.q, c);
    std::vector<double> out;
    out.reserve(n_max + 1);
    for (std::uint64_t n = 0; n <= n_max; ++n) {
        out.push_back(std::pow(std::abs(cycle_power(pi_matrix, n).a), -exponent));
    }
    return out;
}

double energy_density_cft(const DriveSpec &drive, std::uint64_t n, double c, double x) {
    const CycleMatrices cycle = one_cycle(drive);
    const MobiusMatrix chi = cycle_power(cycle.chiral, n);
    const MobiusMatrix anti = cycle_power(cycle.antichiral, n);
    const double L = drive.L;
    const double q2 = static_cast<double>(drive.q) * drive.q;
    const double theta = 2.0 * pi * drive.q * wrap(x, L) / L;
    const Complex z = std::polar(1.0, theta);
    const double base = -pi * c * q2 / (12.0 * L * L);
    const double scale = pi * c * (q2 - 1.0) / (12.0 * L * L);
    const double chiral = base + scale / std::pow(std::norm(chi.a * z + chi.b), 2);
    const double antichiral = base + scale / std::pow(std::norm(anti.a * std::conj(z) + anti.b), 2);
    return chiral + antichiral;
}

double total_energy_cft(const DriveSpec &drive, std::uint64_t n, double c) {
    const CycleMatrices cycle = one_cycle(drive);
    const MobiusMatrix chi = cycle_power(cycle.chiral, n);
    const MobiusMatrix anti = cycle_power(cycle.antichiral, n);
    const double L = drive.L;
    const double q2 = static_cast<double>(drive.q) * drive.q;
    const double weights = std::norm(chi.a) + std::norm(chi.b) + std::norm(anti.a) + std::norm(anti.b);
    return -pi * c * q2 / (6.0 * L) + pi * c * (q2 - 1.0) / (12.0 * L) * weights;
}

HeatingPeaks heating_peaks(const DriveSpec &drive, double tol) {
    const CycleMatrices cycle = one_cycle(drive);
    const PhaseLabel phase = classify(cycle.chiral, tol);
    if (phase.label != Phase::Heating) {
        throw PhaseError(std::string("heating_peaks: drive is ") + to_string(phase.label) +
                         " (|Tr| = " + std::to_string(phase.trace_magnitude) + ")");
    }
    HeatingPeaks out;
    // Chiral density ~ |alpha z + beta|^-4 with z = exp(+i theta); antichiral
    // uses exp(-i theta), hence the sign flip.
    out.chiral = sorted_positions(attracting_angle(cycle.chiral), drive.q, drive.L);
    out.antichiral = sorted_positions(-attracting_angle(cycle.antichiral), drive.q, drive.L);
    out.all = out.chiral;
    out.all.insert(out.all.end(), out.antichiral.begin(), out.antichiral.end());
    std::sort(out.all.begin(), out.all.end());
    return out;
}

PhaseDiagram phase_diagram(const DriveSpec &drive_template, const std::vector<double> &T0_grid,
                           const std::vector<double> &T1_grid, double tol) {
    if (T0_grid.empty() || T1_grid.empty()) {
        throw DomainError("phase_diagram: grids must be non-empty");
    }
    drive_template.validate();
    PhaseDiagram out{T0_grid, T1_grid, std::vector<PhaseLabel>(T0_grid.size() * T1_grid.size())};
    parallel_for(out.cells.size(), [&](std::size_t k) {
        DriveSpec drive = drive_template;
        drive.T0 = T0_grid[k / T1_grid.size()];
        drive.T1 = T1_grid[k % T1_grid.size()];
        out.cells[k] = classify(one_cycle(drive).chiral, tol);
    });
    return out;
}

} // namespace cfloquet::cft
