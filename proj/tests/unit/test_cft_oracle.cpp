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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cfloquet/cft_oracle.hpp"
#include "cfloquet/errors.hpp"
#include "oracles.hpp"

namespace cft = cfloquet::cft;
using cfloquet::Complex;
using cfloquet::KappaTriplet;

namespace {

constexpr double kPi = std::numbers::pi;

cft::DriveSpec marker(double T0, double kappa_minus = -0.2) {
    cft::DriveSpec d;
    d.N = 16;
    d.L = 16.0;
    d.q = 2;
    d.kappa0 = {1.0, 0.0, 0.0};
    d.kappa1 = {1.0, 1.2, kappa_minus};
    d.T0 = T0;
    d.T1 = 0.3;
    d.v = 1.0;
    return d;
}

} // namespace

TEST(SegmentMatrix, ZeroTimeIsMinusIdentity) {
    for (const KappaTriplet k : {KappaTriplet{1, 0, 0}, KappaTriplet{1, 1.2, -0.2}, KappaTriplet{1, 0.6, 0.8}}) {
        const auto m = cft::segment_matrix(k, 0.0, 2, 16.0);
        EXPECT_NEAR(std::abs(m.a - Complex(-1.0, 0.0)), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(m.b), 0.0, 1e-15);
    }
}

TEST(SegmentMatrix, UniformIsPhase) {
    const auto m = cft::segment_matrix({1, 0, 0}, 0.3, 2, 16.0);
    const Complex expected = -std::exp(Complex(0.0, kPi * 2 * 0.3 / 16.0));
    EXPECT_NEAR(std::abs(m.a - expected), 0.0, 1e-15);
    EXPECT_EQ(m.b, Complex(0.0, 0.0));
    EXPECT_NEAR(std::abs(m.a), 1.0, 1e-15);
}

TEST(SegmentMatrix, HyperbolicMarkerBranch) {
    const KappaTriplet k{1.0, 1.2, -0.2};
    EXPECT_NEAR(k.s_squared(), -0.48, 1e-15);
    const auto m = cft::segment_matrix(k, 0.3, 2, 16.0);
    EXPECT_NEAR(m.determinant(), 1.0, 1e-10);
}

TEST(SegmentMatrix, MatchesGeneratorExponentialOnAllBranches) {
    const std::vector<KappaTriplet> ks = {
        {1.0, 0.3, 0.1},  // elliptic
        {1.0, 0.6, 0.8},  // parabolic
        {1.0, 1.2, -0.2}, // hyperbolic
        {-0.5, 2.0, 1.0},
    };
    for (const auto &k : ks) {
        for (double t : {-1.3, -0.3, 0.05, 0.7, 2.9}) {
            const auto m = cft::segment_matrix(k, t, 3, 11.0);
            const auto e = oracle::mobius_by_expm(k, t, 3, 11.0);
            EXPECT_NEAR(std::abs(m.a - e(0, 0)), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(m.b - e(0, 1)), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(std::conj(m.b) - e(1, 0)), 0.0, 1e-12);
        }
    }
}

TEST(SegmentMatrix, DependsOnTimeOverLength) {
    const KappaTriplet k{1.0, 1.2, -0.2};
    const auto a = cft::segment_matrix(k, 0.3, 2, 16.0);
    const auto b = cft::segment_matrix(k, 0.6, 2, 32.0);
    EXPECT_NEAR(std::abs(a.a - b.a), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(a.b - b.b), 0.0, 1e-14);
}

TEST(SegmentMatrix, RejectsBadGeometry) {
    EXPECT_THROW(cft::segment_matrix({1, 0, 0}, 0.1, 2, 0.0), cfloquet::DomainError);
    EXPECT_THROW(cft::segment_matrix({1, 0, 0}, 0.1, 0, 16.0), cfloquet::DomainError);
}

TEST(Antichiral, Examples) {
    const auto id = cft::antichiral_of({Complex(-1, 0), Complex(0, 0)});
    EXPECT_EQ(id.a, Complex(-1, 0));
    EXPECT_EQ(std::abs(id.b), 0.0);
    const cft::MobiusMatrix g{Complex(std::sqrt(1.25), 0.0), Complex(0.0, 0.5)};
    const auto h = cft::antichiral_of(g);
    EXPECT_NEAR(std::abs(h.b - Complex(0.0, 0.5)), 0.0, 1e-15);
    const auto r = cft::antichiral_of(cft::segment_matrix({1.0, 1.2, -0.2}, 0.37, 2, 16.0));
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
}

TEST(OneCycle, UniformDriveIsPurePhase) {
    auto d = marker(-0.3);
    d.kappa1 = d.kappa0;
    const auto c = cft::one_cycle(d);
    EXPECT_NEAR(std::abs(c.chiral.b), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c.antichiral.b), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c.chiral.a), 1.0, 1e-14);
}

TEST(Classify, Markers) {
    EXPECT_EQ(cft::classify(cft::MobiusMatrix{Complex(-1, 0), 0.0}).label, cft::Phase::Critical);
    const auto heat = cft::classify(cft::one_cycle(marker(-0.3)).chiral);
    const auto cool = cft::classify(cft::one_cycle(marker(0.3)).chiral);
    EXPECT_EQ(heat.label, cft::Phase::Heating);
    EXPECT_GT(heat.trace_magnitude, 2.0);
    EXPECT_EQ(cool.label, cft::Phase::NonHeating);
    EXPECT_LT(cool.trace_magnitude, 2.0);
    // Both chiralities share the trace.
    const auto c = cft::one_cycle(marker(-0.3));
    EXPECT_NEAR(c.chiral.trace(), c.antichiral.trace(), 1e-14);
}

TEST(CyclePower, SmallPowers) {
    const auto pi = cft::one_cycle(marker(-0.3)).chiral;
    const auto p0 = cft::cycle_power(pi, 0);
    EXPECT_NEAR(std::abs(p0.a - Complex(1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p0.b), 0.0, 1e-15);
    const auto p1 = cft::cycle_power(pi, 1);
    EXPECT_NEAR(std::abs(p1.a - pi.a), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(p1.b - pi.b), 0.0, 1e-14);
}

TEST(CyclePower, MatchesRepeatedMultiplication) {
    for (double T0 : {-0.3, 0.3}) {
        const auto pi = cft::one_cycle(marker(T0)).chiral;
        for (std::uint64_t n : {2u, 5u, 16u, 40u}) {
            const auto p = cft::cycle_power(pi, n);
            const auto ref = oracle::power_by_multiplication(pi, n);
            const double scale = std::max(1.0, std::abs(ref.a));
            EXPECT_NEAR(std::abs(p.a - ref.a) / scale, 0.0, 1e-10);
            EXPECT_NEAR(std::abs(p.b - ref.b) / scale, 0.0, 1e-10);
        }
        const auto p16 = cft::cycle_power(pi, 16);
        EXPECT_NEAR(p16.determinant(), 1.0, 1e-8);
    }
}

TEST(CyclePower, NearParabolicFallsBackToMultiplication) {
    // Parabolic element: trace exactly -2 within 1e-12.
    const cft::MobiusMatrix m{Complex(-1.0, 0.3), Complex(0.3, 0.0)};
    ASSERT_NEAR(m.determinant(), 1.0, 1e-15);
    const auto p = cft::cycle_power(m, 25);
    const auto ref = oracle::power_by_multiplication(m, 25);
    EXPECT_NEAR(std::abs(p.a - ref.a), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(p.b - ref.b), 0.0, 1e-9);
}

TEST(Loschmidt, Anchors) {
    const auto d = marker(-0.3);
    EXPECT_DOUBLE_EQ(cft::loschmidt_cft(d, 0, 0.5), 1.0);
    auto u = d;
    u.kappa1 = u.kappa0;
    for (std::uint64_t n = 0; n <= 16; ++n) {
        EXPECT_NEAR(cft::loschmidt_cft(u, n, 0.5), 1.0, 1e-12);
    }
    EXPECT_DOUBLE_EQ(cft::echo_exponent(2, 0.5), 3.0 * 0.5 / 6.0);
}

TEST(Loschmidt, HeatingDecaysMonotonically) {
    const auto series = cft::loschmidt_series(marker(-0.3), 16, 0.5);
    ASSERT_EQ(series.size(), 17u);
    for (std::size_t n = 1; n < series.size(); ++n) {
        EXPECT_LT(series[n], series[n - 1]);
        EXPECT_NEAR(series[n], cft::loschmidt_cft(marker(-0.3), n, 0.5), 1e-14);
    }
}

TEST(Loschmidt, EqualsAlphaPower) {
    const auto d = marker(-0.3);
    const auto pi = cft::one_cycle(d).chiral;
    for (std::uint64_t n = 1; n <= 16; ++n) {
        const auto p = oracle::power_by_multiplication(pi, n);
        const double expected = std::pow(std::abs(p.a), -cft::echo_exponent(2, 0.5));
        EXPECT_NEAR(cft::loschmidt_cft(d, n, 0.5), expected, 1e-12);
    }
}

TEST(EnergyDensity, VacuumIsUniform) {
    const auto d = marker(-0.3);
    const double c = 0.5;
    const double L = d.L;
    for (double x : {0.0, 1.3, 7.9, 15.99}) {
        EXPECT_NEAR(cft::energy_density_cft(d, 0, c, x), -kPi * c / (6 * L * L), 1e-14);
    }
    EXPECT_NEAR(cft::total_energy_cft(d, 0, c), -kPi * c / (6 * L), 1e-14);
}

TEST(EnergyDensity, IntegratesToTotal) {
    const auto d = marker(-0.3);
    for (std::uint64_t n : {1u, 5u, 16u}) {
        const int M = 20000;
        double sum = 0.0;
        for (int k = 0; k < M; ++k) {
            sum += cft::energy_density_cft(d, n, 0.5, (k + 0.5) * d.L / M);
        }
        sum *= d.L / M;
        EXPECT_NEAR(sum, cft::total_energy_cft(d, n, 0.5), 1e-6 * std::max(1.0, std::abs(sum)));
    }
}

TEST(EnergyDensity, WrapsPeriodically) {
    const auto d = marker(-0.3);
    EXPECT_NEAR(cft::energy_density_cft(d, 7, 0.5, 3.2), cft::energy_density_cft(d, 7, 0.5, 3.2 + 16.0), 1e-12);
    EXPECT_NEAR(cft::energy_density_cft(d, 7, 0.5, 3.2), cft::energy_density_cft(d, 7, 0.5, 3.2 - 32.0), 1e-12);
}

TEST(EnergyDensity, NonHeatingStaysBounded) {
    auto window_max = [](const cft::DriveSpec &d, std::uint64_t from, std::uint64_t to) {
        double mx = -1e300;
        for (std::uint64_t n = from; n <= to; ++n) {
            for (int k = 0; k < 256; ++k) {
                mx = std::max(mx, cft::energy_density_cft(d, n, 0.5, k * d.L / 256));
            }
        }
        return mx;
    };
    const auto d = marker(0.3);
    const double early = window_max(d, 0, 64);
    const double late = window_max(d, 192, 256);
    EXPECT_LT(late, 1.5 * early);
    EXPECT_LT(early, 0.1);
    // The heating marker at n = 16 is far above that bound.
    EXPECT_GT(window_max(marker(-0.3), 16, 16), 10 * early);
}

TEST(TotalEnergy, HeatingGrowsNonHeatingBounded) {
    const auto h = marker(-0.3);
    const auto nh = marker(0.3);
    std::vector<double> eh;
    double nh_max = -1e300;
    for (std::uint64_t n = 0; n <= 32; ++n) {
        eh.push_back(cft::total_energy_cft(h, n, 0.5));
        nh_max = std::max(nh_max, cft::total_energy_cft(nh, n, 0.5));
    }
    // Exponential growth: log of the excess energy is asymptotically linear.
    const double e0 = eh[0];
    const double r1 = std::log(eh[32] - e0) - std::log(eh[24] - e0);
    const double r2 = std::log(eh[24] - e0) - std::log(eh[16] - e0);
    EXPECT_GT(r1, 0.5);
    EXPECT_NEAR(r1, r2, 0.1 * r2);
    EXPECT_LT(nh_max, 1.0);
}

namespace {

std::vector<double> density_argmax_peaks(const cft::DriveSpec &d, std::uint64_t n, std::size_t count) {
    const int M = 160000;
    std::vector<double> rho(M);
    for (int k = 0; k < M; ++k) {
        rho[static_cast<std::size_t>(k)] = cft::energy_density_cft(d, n, 0.5, k * d.L / M);
    }
    std::vector<std::pair<double, double>> maxima;
    for (int k = 0; k < M; ++k) {
        const double l = rho[static_cast<std::size_t>((k + M - 1) % M)];
        const double r = rho[static_cast<std::size_t>((k + 1) % M)];
        const double c = rho[static_cast<std::size_t>(k)];
        if (c > l && c >= r) {
            maxima.emplace_back(c, k * d.L / M);
        }
    }
    std::sort(maxima.rbegin(), maxima.rend());
    std::vector<double> xs;
    for (std::size_t i = 0; i < std::min(count, maxima.size()); ++i) {
        xs.push_back(maxima[i].second);
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

double ring_distance(double a, double b, double L) {
    const double d = std::fmod(std::abs(a - b), L);
    return std::min(d, L - d);
}

} // namespace

TEST(HeatingPeaks, MatchDensityMaxima) {
    const auto d = marker(-0.3, -0.4);
    const auto peaks = cft::heating_peaks(d);
    ASSERT_EQ(peaks.all.size(), 4u);
    ASSERT_EQ(peaks.chiral.size(), 2u);
    ASSERT_EQ(peaks.antichiral.size(), 2u);
    const auto maxima = density_argmax_peaks(d, 16, 4);
    ASSERT_EQ(maxima.size(), 4u);
    for (double p : peaks.all) {
        double best = 1e300;
        for (double m : maxima) {
            best = std::min(best, ring_distance(p, m, d.L));
        }
        EXPECT_LT(best, 1e-3 * d.L) << "peak " << p;
    }
    // Disjoint chiral and antichiral sets.
    for (double a : peaks.chiral) {
        for (double b : peaks.antichiral) {
            EXPECT_GT(ring_distance(a, b, d.L), 0.1);
        }
    }
}

TEST(HeatingPeaks, MatchFixedPointIteration) {
    const auto d = marker(-0.3, -0.4);
    const auto peaks = cft::heating_peaks(d).all;
    const auto iter = oracle::peaks_by_iteration(d);
    ASSERT_EQ(iter.size(), peaks.size());
    for (std::size_t k = 0; k < peaks.size(); ++k) {
        EXPECT_NEAR(peaks[k], iter[k], 1e-9);
    }
}

TEST(HeatingPeaks, SingleHarmonicGivesTwoPeaks) {
    auto d = marker(-0.3, -0.4);
    d.q = 1;
    // q = 1 needs a longer drive to heat at the same amplitudes.
    d.T0 = -1.2;
    d.T1 = 1.2;
    ASSERT_EQ(cft::classify(cft::one_cycle(d).chiral).label, cft::Phase::Heating);
    const auto peaks = cft::heating_peaks(d);
    ASSERT_EQ(peaks.all.size(), 2u);
    // The q = 1 maps are global conformal maps that leave the vacuum density
    // flat, so the check goes through the fixed points directly.
    const auto iter = oracle::peaks_by_iteration(d);
    ASSERT_EQ(iter.size(), 2u);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_LT(ring_distance(peaks.all[k], iter[k], d.L), 1e-3 * d.L);
    }
}

TEST(HeatingPeaks, NonHeatingThrows) {
    EXPECT_THROW(cft::heating_peaks(marker(0.3)), cfloquet::PhaseError);
}

TEST(PhaseDiagram, MarkersAndUniformRow) {
    const std::vector<double> t0 = {-0.3, 0.0, 0.3};
    const std::vector<double> t1 = {0.0, 0.3};
    const auto pd = cft::phase_diagram(marker(0.0), t0, t1);
    EXPECT_EQ(pd.at(0, 1).label, cft::Phase::Heating);
    EXPECT_EQ(pd.at(2, 1).label, cft::Phase::NonHeating);
    for (std::size_t i = 0; i < t0.size(); ++i) {
        EXPECT_NE(pd.at(i, 0).label, cft::Phase::Heating);
    }
}

TEST(PhaseDiagram, FullGridIsDeterministic) {
    std::vector<double> axis;
    for (int k = 0; k < 101; ++k) {
        axis.push_back(-1.5 + 3.0 * k / 100);
    }
    const auto a = cft::phase_diagram(marker(0.0), axis, axis, 1e-6);
    const auto b = cft::phase_diagram(marker(0.0), axis, axis, 1e-6);
    ASSERT_EQ(a.cells.size(), 101u * 101u);
    std::size_t heating = 0;
    for (std::size_t k = 0; k < a.cells.size(); ++k) {
        EXPECT_EQ(a.cells[k].label, b.cells[k].label);
        EXPECT_EQ(a.cells[k].trace_magnitude, b.cells[k].trace_magnitude);
        heating += a.cells[k].label == cft::Phase::Heating;
    }
    EXPECT_GT(heating, 0u);
    EXPECT_LT(heating, a.cells.size());
}

TEST(DriveSpec, Validation) {
    auto d = marker(-0.3);
    d.q = 8;
    EXPECT_THROW(d.validate(), cfloquet::DomainError);
    d = marker(-0.3);
    d.v = 0.0;
    EXPECT_THROW(d.validate(), cfloquet::DomainError);
    d = marker(-0.3);
    d.L = -1;
    EXPECT_THROW(d.validate(), cfloquet::DomainError);
}
