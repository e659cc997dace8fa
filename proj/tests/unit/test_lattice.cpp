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

#include <cmath>
#include <numeric>
#include <string>

#include "cfloquet/eigensolver.hpp"
#include "cfloquet/errors.hpp"
#include "cfloquet/lattice.hpp"
#include "cfloquet/pauli_operator.hpp"
#include "oracles.hpp"

namespace lat = cfloquet::lattice;
using lat::Axis;

namespace {

bool same_terms(std::vector<lat::PauliTerm> a, std::vector<lat::PauliTerm> b) {
    a = lat::merge_terms(std::move(a));
    b = lat::merge_terms(std::move(b));
    if (a.size() != b.size()) {
        return false;
    }
    for (const auto &t : a) {
        bool found = false;
        for (const auto &u : b) {
            if (t.factors == u.factors && std::abs(t.coefficient - u.coefficient) < 1e-14) {
                found = true;
            }
        }
        if (!found) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST(Envelope, Examples) {
    EXPECT_DOUBLE_EQ(lat::envelope({1, 0, 0}, 2, 16, 3.7), 1.0);
    EXPECT_NEAR(lat::envelope({1.0, 1.2, -0.2}, 2, 16, 0.0), 2.2, 1e-15);
    EXPECT_NEAR(lat::envelope({1.0, 1.2, -0.2}, 2, 16, 4.0), -0.2, 1e-14);
}

TEST(CouplingProfile, SiteFieldAveragesBonds) {
    const lat::CouplingProfile p{{1.0, 1.2, -0.2}, 2, 16};
    const double f_m = lat::envelope(p.kappa, 2, 16, -0.5);
    const double f_p = lat::envelope(p.kappa, 2, 16, 0.5);
    EXPECT_NEAR(p.site_field(0), (f_m + f_p) / 2, 1e-15);
    double sum = 0.0;
    for (int i = 0; i < 16; ++i) {
        sum += p.site_field(i);
        EXPECT_NEAR(p.bond(i), lat::envelope(p.kappa, 2, 16, i + 0.5), 1e-15);
    }
    EXPECT_NEAR(sum, 16.0, 1e-12);
}

TEST(BuildTfim, UniformSmallRing) {
    const auto h = lat::build_tfim({{1, 0, 0}, 1, 4});
    int zz = 0;
    int x = 0;
    for (const auto &t : h.terms) {
        EXPECT_NEAR(t.coefficient, -0.5, 1e-15);
        if (t.factors.size() == 2) {
            EXPECT_EQ(t.factors[0].axis, Axis::Z);
            EXPECT_EQ(t.factors[1].axis, Axis::Z);
            ++zz;
        } else {
            ASSERT_EQ(t.factors.size(), 1u);
            EXPECT_EQ(t.factors[0].axis, Axis::X);
            ++x;
        }
    }
    EXPECT_EQ(zz, 4);
    EXPECT_EQ(x, 4);
}

TEST(BuildTfim, WrapBondPresent) {
    const auto h = lat::build_tfim({{1, 0, 0}, 1, 6});
    bool wrap = false;
    for (const auto &t : h.terms) {
        if (t.factors.size() == 2) {
            const int a = std::min(t.factors[0].site, t.factors[1].site);
            const int b = std::max(t.factors[0].site, t.factors[1].site);
            wrap = wrap || (a == 0 && b == 5);
        }
    }
    EXPECT_TRUE(wrap);
}

TEST(BuildTfim, GroundEnergyMatchesFreeFermions) {
    const auto h = lat::build_tfim({{1, 0, 0}, 1, 16});
    cfloquet::sim::EigenOptions opts;
    opts.tol = 1e-10;
    const auto gs = cfloquet::sim::ground_state(h, opts);
    EXPECT_NEAR(gs.energy, oracle::tfim_ground_energy(16, 0.5, 0.5), 1e-8);
    EXPECT_NEAR(gs.energy, -1.0 / std::sin(std::numbers::pi / 32), 1e-8);
}

TEST(GeneralizedIsing, TfimPointReproducesTfim) {
    const auto gi = lat::build_generalized_ising(0.5, 0.5, 0.0, std::nullopt, 12);
    const auto tf = lat::build_tfim({{1, 0, 0}, 1, 12});
    EXPECT_TRUE(same_terms(gi.terms, tf.terms));
}

TEST(GeneralizedIsing, ProfileScalesEachCoupling) {
    const lat::CouplingProfile p{{1.0, 1.2, -0.2}, 2, 8};
    const auto gi = lat::build_generalized_ising(0.5, 0.5, 0.0, p, 8);
    const auto tf = lat::build_tfim(p);
    EXPECT_TRUE(same_terms(gi.terms, tf.terms));
    const auto xx = lat::build_generalized_ising(1.0, 0.6066, 0.25, p, 8);
    for (const auto &t : xx.terms) {
        if (t.factors.size() == 2 && t.factors[0].axis == Axis::X) {
            const int i = std::min(t.factors[0].site, t.factors[1].site);
            const int j = std::max(t.factors[0].site, t.factors[1].site);
            const int bond = (i == 0 && j == 7) ? 7 : i;
            EXPECT_NEAR(t.coefficient, -0.25 * p.bond(bond), 1e-15);
        }
    }
}

TEST(GeneralizedIsing, ZeroCouplingsOmitted) {
    const auto xx = lat::build_generalized_ising(0.5, 0.0, 0.5, std::nullopt, 8);
    for (const auto &t : xx.terms) {
        EXPECT_EQ(t.factors.size(), 2u);
    }
    EXPECT_EQ(xx.terms.size(), 16u);
}

TEST(LocalEnergy, Transcription) {
    const auto h = lat::local_energy_op(0, 16);
    ASSERT_EQ(h.size(), 3u);
    EXPECT_TRUE(same_terms(h, {{-0.5, {{0, Axis::Z}, {1, Axis::Z}}}, {-0.25, {{0, Axis::X}}}, {-0.25, {{1, Axis::X}}}}));
    const auto wrap = lat::local_energy_op(15, 16);
    EXPECT_TRUE(same_terms(wrap, {{-0.5, {{15, Axis::Z}, {0, Axis::Z}}}, {-0.25, {{15, Axis::X}}}, {-0.25, {{0, Axis::X}}}}));
}

TEST(LocalEnergy, SumsToUniformTfim) {
    std::vector<lat::PauliTerm> all;
    for (int i = 0; i < 10; ++i) {
        const auto h = lat::local_energy_op(i, 10);
        all.insert(all.end(), h.begin(), h.end());
    }
    EXPECT_TRUE(same_terms(all, lat::build_tfim({{1, 0, 0}, 1, 10}).terms));
}

TEST(LocalEnergy, GroundStateIsTranslationInvariant) {
    const int N = 16;
    cfloquet::sim::EigenOptions opts;
    opts.tol = 1e-10;
    const auto gs = cfloquet::sim::ground_state(lat::build_tfim({{1, 0, 0}, 1, N}), opts);
    const double e0 = oracle::tfim_ground_energy(N, 0.5, 0.5);
    for (int i = 0; i < N; ++i) {
        EXPECT_NEAR(cfloquet::sim::expectation(gs.state, lat::local_energy_op(i, N)), e0 / N, 1e-9);
    }
}

TEST(Parity, Examples) {
    const auto p2 = lat::parity_op(2);
    ASSERT_EQ(p2.size(), 1u);
    EXPECT_EQ(p2[0].coefficient, 1.0);
    EXPECT_EQ(p2[0].factors.size(), 2u);
    for (const auto &f : p2[0].factors) {
        EXPECT_EQ(f.axis, Axis::X);
    }
    const auto plus = cfloquet::sim::initial_plus_state(9);
    EXPECT_NEAR(cfloquet::sim::expectation(plus, lat::parity_op(9)), 1.0, 1e-14);
}

TEST(Parity, CommutesWithModels) {
    const auto p = lat::parity_op(8)[0];
    for (const auto &h : {lat::build_tfim({{1.0, 1.2, -0.2}, 2, 8}),
                          lat::build_generalized_ising(1.0, 0.6066, 0.25, std::nullopt, 8)}) {
        for (const auto &t : h.terms) {
            EXPECT_TRUE(lat::commutes(t, p));
        }
    }
}

TEST(Commutes, PauliAlgebra) {
    const lat::PauliTerm zz{1, {{0, Axis::Z}, {1, Axis::Z}}};
    const lat::PauliTerm x0{1, {{0, Axis::X}}};
    const lat::PauliTerm xx{1, {{0, Axis::X}, {1, Axis::X}}};
    const lat::PauliTerm y2{1, {{2, Axis::Y}}};
    EXPECT_FALSE(lat::commutes(zz, x0));
    EXPECT_TRUE(lat::commutes(zz, xx));
    EXPECT_TRUE(lat::commutes(zz, y2));
    EXPECT_FALSE(lat::commutes({1, {{2, Axis::X}}}, y2));
}

TEST(MergeTerms, CombinesAndDrops) {
    std::vector<lat::PauliTerm> terms = {{0.5, {{1, Axis::Z}, {0, Axis::Z}}},
                                         {0.25, {{0, Axis::Z}, {1, Axis::Z}}},
                                         {1.0, {{3, Axis::X}}},
                                         {-1.0, {{3, Axis::X}}}};
    const auto merged = lat::merge_terms(terms, 1e-15);
    ASSERT_EQ(merged.size(), 1u);
    EXPECT_NEAR(merged[0].coefficient, 0.75, 1e-15);
}

TEST(Scaled, MultipliesCoefficients) {
    const auto h = lat::scaled(lat::build_tfim({{1, 0, 0}, 1, 4}), -2.0);
    for (const auto &t : h.terms) {
        EXPECT_NEAR(t.coefficient, 1.0, 1e-15);
    }
}

TEST(TextFormat, RoundTrip) {
    const auto h = lat::build_generalized_ising(1.0, 0.6066, 0.25, lat::CouplingProfile{{1.0, 1.2, -0.2}, 2, 8}, 8);
    const std::string text = lat::to_text(h);
    EXPECT_EQ(text.rfind("# N=8", 0), 0u);
    const auto back = lat::from_text(text);
    EXPECT_EQ(back.N, 8);
    ASSERT_EQ(back.terms.size(), h.terms.size());
    for (std::size_t k = 0; k < h.terms.size(); ++k) {
        EXPECT_EQ(back.terms[k].coefficient, h.terms[k].coefficient);
        EXPECT_EQ(back.terms[k].factors, h.terms[k].factors);
    }
    EXPECT_EQ(lat::to_text(back), text);
}

TEST(TextFormat, RejectsGarbage) {
    EXPECT_THROW(lat::from_text("# N=4\n0.5 0:Q\n"), cfloquet::ConfigError);
    EXPECT_THROW(lat::from_text("0.5 0:Z\n"), cfloquet::ConfigError);
    EXPECT_THROW(lat::from_text("# N=4\nabc 0:Z\n"), cfloquet::ConfigError);
}

TEST(Label, StoredOrder) {
    EXPECT_EQ(lat::label({1.0, {{0, Axis::Z}, {1, Axis::Z}}}), "Z0 Z1");
}

TEST(DenseOracle, SmallChainSpectrum) {
    // The free-fermion formula at N = 6 against dense diagonalization.
    const auto h = lat::build_tfim({{1, 0, 0}, 1, 6});
    const auto spec = oracle::diagonalize(oracle::dense_hamiltonian(h));
    EXPECT_NEAR(spec.energies(0), oracle::tfim_ground_energy(6, 0.5, 0.5), 1e-12);
}
