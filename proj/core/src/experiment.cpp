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

#include "cfloquet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cfloquet/circuit.hpp"
#include "cfloquet/eigensolver.hpp"
#include "cfloquet/errors.hpp"
#include "cfloquet/evolution.hpp"
#include "cfloquet/parallel.hpp"
#include "cfloquet/pauli_operator.hpp"
#include "cfloquet/random.hpp"

namespace cfloquet::experiment {
namespace {

using lattice::Axis;
using lattice::PauliTerm;
using sim::Basis;
using sim::StateVector;

lattice::CouplingProfile profile_of(const RunConfig &config, const KappaTriplet &kappa) {
    return lattice::CouplingProfile{kappa, config.q, config.N};
}

lattice::HamiltonianSpec hamiltonian(const RunConfig &config, const KappaTriplet &kappa) {
    const auto profile = profile_of(config, kappa);
    if (config.model.family == lattice::ModelFamily::DeformedTFIM) {
        return lattice::build_tfim(profile);
    }
    const ModelSpec m = config.model;
    return lattice::build_generalized_ising(m.J, m.g, m.Gamma, profile, config.N);
}

// One Floquet period as a gate list (Trotter evolution only).
sim::Circuit cycle_circuit(const RunConfig &config, const lattice::HamiltonianSpec &h0,
                           const lattice::HamiltonianSpec &h1) {
    sim::Circuit c = sim::trotter_circuit(h0, config.T0, config.trotter_steps);
    c.append(sim::trotter_circuit(h1, config.T1, config.trotter_steps));
    return c;
}

struct Propagator {
    EvolutionMethod method;
    sim::Circuit circuit;
    sim::PauliOperator h0;
    sim::PauliOperator h1;
    double T0;
    double T1;

    void step(StateVector &psi) const {
        if (method == EvolutionMethod::Trotter) {
            sim::run(psi, circuit);
        } else {
            sim::exact_evolve(psi, h0, T0);
            sim::exact_evolve(psi, h1, T1);
        }
    }
};

Propagator make_propagator(const RunConfig &config) {
    const auto h0 = h0_of(config);
    const auto h1 = h1_of(config);
    sim::Circuit circuit{config.N, {}};
    if (config.evolution == EvolutionMethod::Trotter) {
        circuit = cycle_circuit(config, h0, h1);
    }
    return Propagator{config.evolution, std::move(circuit), sim::PauliOperator(h0),
                      sim::PauliOperator(h1), config.T0, config.T1};
}

double z_correlator(std::uint64_t outcome, const PauliTerm &t) {
    int sign = 1;
    for (const auto &f : t.factors) {
        if ((outcome >> f.site) & 1) {
            sign = -sign;
        }
    }
    return sign;
}

// Shot estimate of sum_k c_k <P_k> for strings made only of Z or only of X.
double shot_expectation(const std::vector<PauliTerm> &terms, const sim::ShotBatch &z,
                        const sim::ShotBatch &x) {
    double total = 0.0;
    for (const auto &t : terms) {
        const bool z_only = std::all_of(t.factors.begin(), t.factors.end(),
                                        [](const auto &f) { return f.axis == Axis::Z; });
        const bool x_only = std::all_of(t.factors.begin(), t.factors.end(),
                                        [](const auto &f) { return f.axis == Axis::X; });
        if (!z_only && !x_only) {
            throw UnsupportedStructureError("shot energy: term " + lattice::label(t) +
                                            " is not measurable in the Z or X setting");
        }
        const sim::ShotBatch &batch = z_only ? z : x;
        if (batch.size() == 0) {
            continue;
        }
        double acc = 0.0;
        for (auto o : batch.outcomes) {
            acc += z_correlator(o, t);
        }
        total += t.coefficient * acc / static_cast<double>(batch.size());
    }
    return total;
}

sim::ShotBatch empty_batch(int N, Basis b) {
    sim::ShotBatch batch;
    batch.num_qubits = N;
    batch.basis.assign(static_cast<std::size_t>(N), b);
    return batch;
}

} // namespace

double ModelSpec::default_delta_min() const {
    const ModelSpec m = effective_model(*this);
    return (m.g == 0.0 && m.Gamma != 0.0) ? 0.25 : 0.125;
}

ModelSpec effective_model(const ModelSpec &model) {
    if (model.family == lattice::ModelFamily::DeformedTFIM) {
        return ModelSpec{model.family, 0.5, 0.5, 0.0};
    }
    return model;
}

void RunConfig::validate() const {
    if (schema != 1) {
        throw ConfigError("config: unsupported schema " + std::to_string(schema) + " (expected 1)");
    }
    sim::check_capacity(N);
    if (N < 4) {
        throw ConfigError("config: N must be >= 4");
    }
    if (q < 1 || 2 * q >= N) {
        throw ConfigError("config: q must satisfy 1 <= q < N/2");
    }
    if (cycles < 0 || cycles > 64) {
        throw ConfigError("config: cycles must lie in [0, 64]");
    }
    if (shots < 0) {
        throw ConfigError("config: shots must be >= 0");
    }
    if (!(noise_p >= 0.0 && noise_p <= 1.0)) {
        throw ConfigError("config: noise_p must lie in [0, 1]");
    }
    if (trotter_steps < 1) {
        throw ConfigError("config: trotter_steps must be >= 1");
    }
    if (!(velocity.value > 0.0)) {
        throw ConfigError("config: velocity value must be > 0");
    }
    if (velocity.delta_min && !(*velocity.delta_min > 0.0)) {
        throw ConfigError("config: delta_min must be > 0");
    }
    if (!(bootstrap.level > 0.0 && bootstrap.level < 1.0) || bootstrap.resamples < 100) {
        throw ConfigError("config: bootstrap needs level in (0,1) and >= 100 resamples");
    }
    if (noise_p > 0.0 && evolution == EvolutionMethod::Exact) {
        throw ConfigError("config: gate noise requires trotter evolution");
    }
    if (shots > 0 && preparation != Preparation::Mera) {
        throw ConfigError("config: shot-based echo requires preparation \"mera\"");
    }
    if (preparation == Preparation::Mera && mera_params) {
        const auto layout = mera::build_layout(N);
        if (mera_params->size() != layout.gates.size()) {
            throw ConfigError("config: MERA fixture has " + std::to_string(mera_params->size()) +
                              " gates, layout for N=" + std::to_string(N) + " needs " +
                              std::to_string(layout.gates.size()));
        }
    }
}

RunConfig reference_config(const RunConfig &config) {
    RunConfig ref = config;
    ref.kappa1 = config.kappa0;
    return ref;
}

lattice::HamiltonianSpec h0_of(const RunConfig &config) { return hamiltonian(config, config.kappa0); }
lattice::HamiltonianSpec h1_of(const RunConfig &config) { return hamiltonian(config, config.kappa1); }

std::vector<std::vector<PauliTerm>> bond_operators(const ModelSpec &model,
                                                   const lattice::CouplingProfile &profile) {
    const ModelSpec m = effective_model(model);
    const int N = profile.N;
    std::vector<std::vector<PauliTerm>> out(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        const int a = i;
        const int b = (i + 1) % N;
        const double bond = profile.bond(i);
        auto &terms = out[static_cast<std::size_t>(i)];
        if (m.J != 0.0) {
            terms.push_back({-m.J * bond, {{a, Axis::Z}, {b, Axis::Z}}});
        }
        if (m.g != 0.0) {
            terms.push_back({-0.5 * m.g * profile.site_field(a), {{a, Axis::X}}});
            terms.push_back({-0.5 * m.g * profile.site_field(b), {{b, Axis::X}}});
        }
        if (m.Gamma != 0.0) {
            terms.push_back({-m.Gamma * bond, {{a, Axis::X}, {b, Axis::X}}});
        }
    }
    return out;
}

std::vector<double> TimeSeries::echoes() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto &p : points) {
        out.push_back(p.echo);
    }
    return out;
}

double resolve_velocity(const RunConfig &config) {
    if (config.velocity.mode == VelocityMode::Fixed) {
        return config.velocity.value;
    }
    return estimate_velocity(config.model, config.N, config.velocity.delta_min).v;
}

cft::DriveSpec cft_drive(const RunConfig &config, double v) {
    cft::DriveSpec d;
    d.N = config.N;
    d.L = config.N;
    d.q = config.q;
    d.kappa0 = config.kappa0;
    d.kappa1 = config.kappa1;
    d.T0 = config.T0;
    d.T1 = config.T1;
    d.v = v;
    return d;
}

StateVector prepare_initial(const RunConfig &config) {
    if (config.preparation == Preparation::Mera) {
        if (!config.mera_params) {
            throw ConfigError("preparation \"mera\" needs a parameter fixture");
        }
        const auto layout = mera::build_layout(config.N);
        if (config.mera_params->size() != layout.gates.size()) {
            throw ConfigError("MERA fixture does not match N=" + std::to_string(config.N));
        }
        return mera::prepare_state(layout, *config.mera_params);
    }
    sim::EigenOptions opts;
    opts.tol = 1e-10;
    opts.parity_sector = 1;
    opts.check_degeneracy = false;
    return sim::ground_state(h0_of(config), opts).state;
}

TimeSeries run_exact(const RunConfig &config) {
    config.validate();
    const Propagator prop = make_propagator(config);
    const auto bonds = bond_operators(config.model, profile_of(config, config.kappa0));
    std::vector<sim::PauliOperator> bond_ops;
    bond_ops.reserve(bonds.size());

    const StateVector psi0 = prepare_initial(config);
    StateVector psi = psi0;
    TimeSeries out;
    out.N = config.N;
    out.provenance["noise_p"] = 0.0;
    out.provenance["shots"] = 0.0;
    for (int n = 0; n <= config.cycles; ++n) {
        if (n > 0) {
            prop.step(psi);
        }
        CyclePoint pt;
        pt.n = n;
        pt.echo = std::norm(sim::overlap(psi0, psi));
        pt.bond_energy.resize(bonds.size());
        for (std::size_t i = 0; i < bonds.size(); ++i) {
            pt.bond_energy[i] = sim::expectation(psi, bonds[i]);
        }
        pt.total_energy = prop.h0.expectation(psi);
        out.points.push_back(std::move(pt));
    }
    return out;
}

ShotData run_shots(const RunConfig &config) {
    config.validate();
    if (config.shots <= 0) {
        throw ConfigError("run_shots: shots must be > 0");
    }
    const int N = config.N;
    const auto layout = mera::build_layout(N);
    if (!config.mera_params) {
        throw ConfigError("preparation \"mera\" needs a parameter fixture");
    }
    const sim::Circuit prep = mera::mera_circuit(layout, *config.mera_params);
    const sim::Circuit unprep = prep.inverse();
    const Propagator prop = make_propagator(config);
    const std::size_t cycles = static_cast<std::size_t>(config.cycles);
    const std::vector<Basis> xb(static_cast<std::size_t>(N), Basis::X);
    const std::vector<Basis> zb(static_cast<std::size_t>(N), Basis::Z);

    // Noiseless states and their samplers; a trajectory uses them until its
    // first injected error.
    std::vector<StateVector> clean;
    std::vector<sim::Sampler> echo_s, z_s, x_s;
    {
        StateVector psi = sim::initial_plus_state(N);
        sim::run(psi, prep);
        for (std::size_t n = 0; n <= cycles; ++n) {
            if (n > 0) {
                prop.step(psi);
            }
            StateVector phi = psi;
            sim::run(phi, unprep);
            echo_s.emplace_back(phi, xb);
            z_s.emplace_back(psi, zb);
            x_s.emplace_back(psi, xb);
            clean.push_back(psi);
        }
    }

    ShotData data;
    data.N = N;
    data.echo.assign(cycles + 1, empty_batch(N, Basis::X));
    data.z_basis.assign(cycles + 1, empty_batch(N, Basis::Z));
    data.x_basis.assign(cycles + 1, empty_batch(N, Basis::X));
    const std::size_t shots = static_cast<std::size_t>(config.shots);

    if (config.noise_p == 0.0) {
        for (std::size_t n = 0; n <= cycles; ++n) {
            Rng rng(derive_seed(config.seed, n));
            for (std::size_t s = 0; s < shots; ++s) {
                data.echo[n].outcomes.push_back(echo_s[n].draw(rng));
            }
            for (std::size_t s = 0; s < shots; ++s) {
                data.z_basis[n].outcomes.push_back(z_s[n].draw(rng));
            }
            for (std::size_t s = 0; s < shots; ++s) {
                data.x_basis[n].outcomes.push_back(x_s[n].draw(rng));
            }
        }
        return data;
    }

    const double p = config.noise_p;
    const sim::Circuit &cycle = prop.circuit;
    // Per trajectory: (echo, z, x) outcome for every cycle, then the count of
    // injected errors.
    std::vector<std::vector<std::uint64_t>> rows(shots);
    parallel_for(shots, [&](std::size_t t) {
        Rng rng(derive_seed(config.seed, t));
        std::vector<std::uint64_t> row;
        row.reserve(3 * (cycles + 1) + 1);
        std::uint64_t injected = 0;
        bool pristine = true;
        StateVector psi(N);
        Rng saved = rng;
        if (!sim::draw_clean_pass(prep, p, rng)) {
            rng = saved;
            psi = sim::initial_plus_state(N);
            injected += sim::run_noisy(psi, prep, p, rng).injected;
            pristine = false;
        }
        for (std::size_t n = 0; n <= cycles; ++n) {
            if (n > 0) {
                if (pristine) {
                    saved = rng;
                    if (!sim::draw_clean_pass(cycle, p, rng)) {
                        rng = saved;
                        psi = clean[n - 1];
                        pristine = false;
                        injected += sim::run_noisy(psi, cycle, p, rng).injected;
                    }
                } else {
                    injected += sim::run_noisy(psi, cycle, p, rng).injected;
                }
            }
            saved = rng;
            if (pristine && sim::draw_clean_pass(unprep, p, rng)) {
                row.push_back(echo_s[n].draw(rng));
            } else {
                if (pristine) {
                    rng = saved;
                }
                StateVector phi = pristine ? clean[n] : psi;
                injected += sim::run_noisy(phi, unprep, p, rng).injected;
                row.push_back(sim::Sampler(phi, xb).draw(rng));
            }
            if (pristine) {
                row.push_back(z_s[n].draw(rng));
                row.push_back(x_s[n].draw(rng));
            } else {
                row.push_back(sim::Sampler(psi, zb).draw(rng));
                row.push_back(sim::Sampler(psi, xb).draw(rng));
            }
        }
        row.push_back(injected);
        rows[t] = std::move(row);
    });
    for (const auto &row : rows) {
        for (std::size_t n = 0; n <= cycles; ++n) {
            data.echo[n].outcomes.push_back(row[3 * n]);
            data.z_basis[n].outcomes.push_back(row[3 * n + 1]);
            data.x_basis[n].outcomes.push_back(row[3 * n + 2]);
        }
        data.injected += row.back();
    }
    return data;
}

TimeSeries summarize(const ShotData &data, const RunConfig &config, bool postselect) {
    const auto bonds = bond_operators(config.model, profile_of(config, config.kappa0));
    TimeSeries out;
    out.N = data.N;
    out.provenance["noise_p"] = config.noise_p;
    out.provenance["shots"] = config.shots;
    out.provenance["postselected"] = postselect ? 1.0 : 0.0;
    out.provenance["injected_errors"] = static_cast<double>(data.injected);
    std::vector<std::vector<double>> indicators(data.echo.size());
    for (std::size_t n = 0; n < data.echo.size(); ++n) {
        CyclePoint pt;
        pt.n = static_cast<int>(n);
        const sim::ShotBatch *batch = &data.echo[n];
        PostselectResult kept;
        if (postselect) {
            kept = parity_postselect(*batch);
            batch = &kept.filtered;
            pt.retained_fraction = kept.retained_fraction;
        }
        auto &ind = indicators[n];
        ind.reserve(batch->size());
        for (auto o : batch->outcomes) {
            ind.push_back(o == 0 ? 1.0 : 0.0);
        }
        pt.echo = ind.empty() ? 0.0
                              : std::accumulate(ind.begin(), ind.end(), 0.0) / static_cast<double>(ind.size());
        pt.bond_energy.resize(bonds.size());
        for (std::size_t i = 0; i < bonds.size(); ++i) {
            pt.bond_energy[i] = shot_expectation(bonds[i], data.z_basis[n], data.x_basis[n]);
        }
        pt.total_energy = std::accumulate(pt.bond_energy.begin(), pt.bond_energy.end(), 0.0);
        out.points.push_back(std::move(pt));
    }
    if (std::all_of(indicators.begin(), indicators.end(), [](const auto &v) { return !v.empty(); })) {
        const auto ci = bootstrap_ci(indicators, config.bootstrap.level, config.bootstrap.resamples,
                                     derive_seed(config.seed, 0xB0075));
        for (std::size_t n = 0; n < ci.size(); ++n) {
            out.points[n].echo_ci = ci[n];
        }
    }
    return out;
}

TimeSeries run_floquet(const RunConfig &config) {
    if (config.shots == 0) {
        return run_exact(config);
    }
    return summarize(run_shots(config), config, config.postselect);
}

PostselectResult parity_postselect(const sim::ShotBatch &batch) {
    if (!batch.all_in(Basis::X)) {
        throw DomainError("parity_postselect: batch is not in the X basis");
    }
    PostselectResult out;
    out.filtered.num_qubits = batch.num_qubits;
    out.filtered.basis = batch.basis;
    for (std::size_t s = 0; s < batch.size(); ++s) {
        if (batch.parity(s) == 1) {
            out.filtered.outcomes.push_back(batch.outcomes[s]);
        }
    }
    out.retained_fraction = batch.size() == 0 ? 0.0
                                              : static_cast<double>(out.filtered.size()) /
                                                    static_cast<double>(batch.size());
    return out;
}

DecayFit fit_decay(const TimeSeries &reference) {
    if (reference.points.empty()) {
        throw NumericalError("fit_decay: empty reference series");
    }
    std::vector<double> n, y;
    for (const auto &p : reference.points) {
        if (!(p.echo > 0.0)) {
            throw NumericalError("fit_decay: reference echo is non-positive at n=" + std::to_string(p.n));
        }
        n.push_back(p.n);
        y.push_back(p.echo);
    }
    DecayFit fit;
    fit.amplitude = y[0];
    if (y.size() == 1) {
        return fit;
    }
    // Log-linear start, then Gauss-Newton on the unweighted residuals.
    const double m = static_cast<double>(n.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        const double ly = std::log(y[k]);
        sx += n[k];
        sy += ly;
        sxx += n[k] * n[k];
        sxy += n[k] * ly;
    }
    const double den = m * sxx - sx * sx;
    if (den == 0.0) {
        return fit;
    }
    double slope = (m * sxy - sx * sy) / den;
    double A = std::exp((sy - slope * sx) / m);
    double g = -slope;
    for (int it = 0; it < 50; ++it) {
        double jaa = 0, jag = 0, jgg = 0, ra = 0, rg = 0;
        for (std::size_t k = 0; k < n.size(); ++k) {
            const double e = std::exp(-g * n[k]);
            const double r = y[k] - A * e;
            const double da = e;
            const double dg = -A * n[k] * e;
            jaa += da * da;
            jag += da * dg;
            jgg += dg * dg;
            ra += da * r;
            rg += dg * r;
        }
        const double det = jaa * jgg - jag * jag;
        if (det <= 0.0) {
            break;
        }
        const double dA = (jgg * ra - jag * rg) / det;
        const double dG = (jaa * rg - jag * ra) / det;
        A += dA;
        g += dG;
        if (std::abs(dA) < 1e-15 * std::abs(A) && std::abs(dG) < 1e-15) {
            break;
        }
    }
    fit.amplitude = A;
    fit.rate = g;
    return fit;
}

TimeSeries reference_normalize(const TimeSeries &series, const TimeSeries &reference) {
    if (series.points.size() != reference.points.size()) {
        throw DomainError("reference_normalize: cycle grids differ");
    }
    for (std::size_t k = 0; k < series.points.size(); ++k) {
        if (series.points[k].n != reference.points[k].n) {
            throw DomainError("reference_normalize: cycle grids differ");
        }
    }
    const DecayFit fit = fit_decay(reference);
    TimeSeries out = series;
    for (auto &p : out.points) {
        const double scale = fit.amplitude * std::exp(-fit.rate * p.n);
        p.echo /= scale;
        if (p.echo_ci) {
            p.echo_ci = std::make_pair(p.echo_ci->first / scale, p.echo_ci->second / scale);
        }
    }
    out.provenance["reference_amplitude"] = fit.amplitude;
    out.provenance["reference_rate"] = fit.rate;
    return out;
}

std::vector<std::pair<double, double>> bootstrap_ci(const std::vector<std::vector<double>> &samples,
                                                    double level, int resamples, std::uint64_t seed) {
    if (!(level > 0.0 && level < 1.0)) {
        throw DomainError("bootstrap_ci: level must lie in (0, 1)");
    }
    if (resamples < 100) {
        throw DomainError("bootstrap_ci: need at least 100 resamples");
    }
    for (const auto &s : samples) {
        if (s.empty()) {
            throw DomainError("bootstrap_ci: empty sample set");
        }
    }
    std::vector<std::pair<double, double>> out(samples.size());
    parallel_for(samples.size(), [&](std::size_t k) {
        const auto &s = samples[k];
        Rng rng(derive_seed(seed, k));
        std::vector<double> means(static_cast<std::size_t>(resamples));
        for (auto &m : means) {
            double acc = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                acc += s[rng.below(s.size())];
            }
            m = acc / static_cast<double>(s.size());
        }
        std::sort(means.begin(), means.end());
        auto quantile = [&](double prob) {
            const double pos = prob * static_cast<double>(means.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const auto hi = std::min(lo + 1, means.size() - 1);
            const double frac = pos - static_cast<double>(lo);
            return means[lo] + frac * (means[hi] - means[lo]);
        };
        const double tail = 0.5 * (1.0 - level);
        out[k] = {quantile(tail), quantile(1.0 - tail)};
    });
    return out;
}

VelocityEstimate estimate_velocity(const ModelSpec &model, int N, std::optional<double> delta_min) {
    const ModelSpec m = effective_model(model);
    const auto h = lattice::build_generalized_ising(m.J, m.g, m.Gamma, std::nullopt, N);
    sim::EigenOptions opts;
    opts.tol = 1e-10;
    opts.check_degeneracy = false;
    opts.parity_sector = 1;
    const sim::PauliOperator op(h);
    const double even = sim::lowest_eigenpair(op, opts).energy;
    opts.parity_sector = -1;
    const double odd = sim::lowest_eigenpair(op, opts).energy;
    VelocityEstimate est;
    est.even_energy = even;
    est.odd_energy = odd;
    est.gap = odd - even;
    est.delta_min = delta_min.value_or(m.default_delta_min());
    if (!(est.gap > 0.0)) {
        throw NumericalError("estimate_velocity: odd-sector gap is not positive");
    }
    est.v = est.gap * N / (2.0 * std::numbers::pi * est.delta_min);
    return est;
}

std::vector<double> average_over_partners(const std::vector<double> &bond_energy, int q) {
    const int N = static_cast<int>(bond_energy.size());
    if (q < 1 || N % q != 0) {
        throw DomainError("average_over_partners: q must divide N");
    }
    std::vector<double> out(bond_energy.size(), 0.0);
    for (int i = 0; i < N; ++i) {
        for (int k = 0; k < q; ++k) {
            out[static_cast<std::size_t>(i)] += bond_energy[static_cast<std::size_t>((i + k * N / q) % N)];
        }
        out[static_cast<std::size_t>(i)] /= q;
    }
    return out;
}

} // namespace cfloquet::experiment
