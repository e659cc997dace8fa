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
 * Floquet runs on the lattice: preparation, stroboscopic observables, the shot
 * pipeline (parity post-selection, reference normalization, bootstrap) and
 * velocity estimation.
 *
 * Drive times in a RunConfig are lattice times. The matching continuum drive
 * (cft_drive) carries the velocity, so its segments last v * T.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfloquet/cft_oracle.hpp"
#include "cfloquet/lattice.hpp"
#include "cfloquet/measurement.hpp"
#include "cfloquet/mera.hpp"
#include "cfloquet/state_vector.hpp"
#include "cfloquet/types.hpp"

namespace cfloquet::experiment {

/// Uniform couplings of H = -sum [J ZZ + g X + Gamma XX]; the deformed TFIM is
/// the family member (1/2, 1/2, 0).
struct ModelSpec {
    lattice::ModelFamily family = lattice::ModelFamily::DeformedTFIM;
    double J = 0.5;
    double g = 0.5;
    double Gamma = 0.0;

    /// Smallest scaling dimension of the model's CFT: 1/4 for the XX class
    /// (g == 0, Gamma != 0), else 1/8.
    [[nodiscard]] double default_delta_min() const;
};

enum class Preparation { ExactGroundState, Mera };
enum class EvolutionMethod { Trotter, Exact };
enum class VelocityMode { Fixed, Fit };

struct VelocitySpec {
    VelocityMode mode = VelocityMode::Fixed;
    double value = 1.0;
    /// Overrides ModelSpec::default_delta_min() when set.
    std::optional<double> delta_min;
};

struct BootstrapSpec {
    double level = 0.95;
    int resamples = 1000;
};

struct RunConfig {
    int schema = 1;
    ModelSpec model;
    int N = 16;
    int q = 2;
    KappaTriplet kappa0{1.0, 0.0, 0.0};
    KappaTriplet kappa1{1.0, 1.2, -0.2};
    double T0 = -0.3;
    double T1 = 0.3;
    int cycles = 16;
    int shots = 0;
    double noise_p = 0.0;
    std::uint64_t seed = 1;
    Preparation preparation = Preparation::ExactGroundState;
    /// Parameters for Preparation::Mera; loaded by the caller from a fixture.
    std::optional<mera::MeraParams> mera_params;
    /// Fixture path as written in the config (resolved by the CLI).
    std::string mera_fixture;
    VelocitySpec velocity;
    EvolutionMethod evolution = EvolutionMethod::Trotter;
    int trotter_steps = 1;
    /// Keep only +1-parity X-basis shots when estimating from shots.
    bool postselect = false;
    BootstrapSpec bootstrap;

    /// Throws ConfigError on out-of-range fields.
    void validate() const;
};

/// The reference run: identical except that H1 = H0.
RunConfig reference_config(const RunConfig &config);

/// H0 (kappa0 profile) and H1 (kappa1 profile) for the configured model.
lattice::HamiltonianSpec h0_of(const RunConfig &config);
lattice::HamiltonianSpec h1_of(const RunConfig &config);

/// Couplings (J, g, Gamma) actually used: the TFIM family is pinned to
/// (1/2, 1/2, 0).
ModelSpec effective_model(const ModelSpec &model);

/// Bond operators h_i = -b_i (J Z_i Z_{i+1} + Gamma X_i X_{i+1})
/// - g/2 (s_i X_i + s_{i+1} X_{i+1}) with bond and site scales of the profile.
/// They sum to the Hamiltonian of that profile.
std::vector<std::vector<lattice::PauliTerm>> bond_operators(const ModelSpec &model,
                                                            const lattice::CouplingProfile &profile);

struct CyclePoint {
    int n = 0;
    double echo = 0.0;
    std::optional<std::pair<double, double>> echo_ci;
    double total_energy = 0.0;
    std::vector<double> bond_energy;
    std::optional<double> retained_fraction;

    /// Echo above 1 after normalization: flagged, never clamped.
    [[nodiscard]] bool flagged() const { return echo > 1.0; }
};

struct TimeSeries {
    int N = 0;
    std::vector<CyclePoint> points;
    /// Named scalars describing how the series was produced (fit amplitudes,
    /// velocity, noise level, ...).
    std::map<std::string, double> provenance;

    [[nodiscard]] std::vector<double> echoes() const;
};

/// Raw shot data of one run. The echo batch at cycle n holds X-basis
/// outcomes measured after undoing the preparation circuit; all-plus (0)
/// counts as a return to the initial state.
struct ShotData {
    int N = 0;
    std::vector<sim::ShotBatch> echo;
    std::vector<sim::ShotBatch> z_basis;
    std::vector<sim::ShotBatch> x_basis;
    /// Injected Pauli errors summed over trajectories (0 without noise).
    std::uint64_t injected = 0;
};

/// Velocity used for the continuum comparison (fits it when requested).
double resolve_velocity(const RunConfig &config);

/// Continuum drive matching the config with the given velocity.
cft::DriveSpec cft_drive(const RunConfig &config, double v);

/// Initial state. Throws ConfigError when the MERA fixture is missing or its
/// size differs from N.
sim::StateVector prepare_initial(const RunConfig &config);

/// Noiseless exact-expectation run (shots ignored).
TimeSeries run_exact(const RunConfig &config);

/// Shot-level run; requires Preparation::Mera. One trajectory per shot spans
/// all cycles when noise_p > 0.
ShotData run_shots(const RunConfig &config);

/// Reduces shot data to a time series (echo CIs by bootstrap, retention when
/// post-selecting).
TimeSeries summarize(const ShotData &data, const RunConfig &config, bool postselect);

/// run_exact when shots == 0, else summarize(run_shots(config), config, postselect).
TimeSeries run_floquet(const RunConfig &config);

struct PostselectResult {
    sim::ShotBatch filtered;
    double retained_fraction = 0.0;
};

/// Keeps the shots with even X parity. Throws DomainError for a batch that is
/// not entirely in the X basis.
PostselectResult parity_postselect(const sim::ShotBatch &batch);

struct DecayFit {
    double amplitude = 1.0;
    double rate = 0.0;
};

/// Least-squares fit of echo(n) = A exp(-rate n). Throws NumericalError when
/// any echo is non-positive.
DecayFit fit_decay(const TimeSeries &reference);

/// Divides echoes (and their intervals) by the reference decay fit. The fit is
/// recorded in provenance under "reference_amplitude" / "reference_rate".
TimeSeries reference_normalize(const TimeSeries &series, const TimeSeries &reference);

/// Percentile bootstrap interval of the sample mean for each sample set.
/// Throws DomainError for an empty set, level outside (0,1) or < 100 resamples.
std::vector<std::pair<double, double>> bootstrap_ci(const std::vector<std::vector<double>> &samples,
                                                    double level = 0.95, int resamples = 1000,
                                                    std::uint64_t seed = 0);

struct VelocityEstimate {
    double v = 0.0;
    double gap = 0.0;
    double even_energy = 0.0;
    double odd_energy = 0.0;
    double delta_min = 0.0;
};

/// v = gap * N / (2 pi delta_min) from the lowest odd-parity level of the
/// uniform model at size N.
VelocityEstimate estimate_velocity(const ModelSpec &model, int N,
                                   std::optional<double> delta_min = std::nullopt);

/// Averages bond energies over the q partners i, i + N/q, ... of each bond.
std::vector<double> average_over_partners(const std::vector<double> &bond_energy, int q);

} // namespace cfloquet::experiment
