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

// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit when any
// fails. Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cfloquet/cft_oracle.hpp"
#include "cfloquet/evolution.hpp"
#include "cfloquet/experiment.hpp"
#include "cfloquet/fitting.hpp"
#include "cfloquet/mera.hpp"
#include "cfloquet/pauli_operator.hpp"
#include "oracles.hpp"

using namespace cfloquet;
using experiment::RunConfig;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double ring_distance(double a, double b, double L) {
    const double d = std::fmod(std::abs(a - b), L);
    return std::min(d, L - d);
}

// 1: Moebius matrices stay in SU(1,1), closed-form powers agree with products.
Outcome su11_suite() {
    const auto start = Clock::now();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> qd(1, 4);
    double worst_det = 0.0;
    double worst_power = 0.0;
    for (int draw = 0; draw < 10000; ++draw) {
        auto random_kappa = [&](int branch) {
            const double k0 = 2.0 * u(rng);
            const double theta = std::numbers::pi * u(rng);
            double r = std::abs(k0);
            if (branch == 0) {
                r *= 0.5 * (1.0 + u(rng)); // elliptic
            } else if (branch == 1) {
                r *= 1.0 + (1.0 + u(rng)); // hyperbolic
            }
            return KappaTriplet{k0, r * std::cos(theta), r * std::sin(theta)};
        };
        const int branch = draw % 3;
        const int q = qd(rng);
        const double L = 8.0 + 12.0 * (1.0 + u(rng));
        const auto g0 = cft::segment_matrix(random_kappa(branch), 0.5 * (1.0 + u(rng)), q, L);
        const auto g1 = cft::segment_matrix(random_kappa((branch + 1) % 3), 0.5 * (1.0 + u(rng)), q, L);
        worst_det = std::max({worst_det, std::abs(g0.determinant() - 1.0), std::abs(g1.determinant() - 1.0)});
        const auto pi = g1 * g0;
        auto prod = cft::MobiusMatrix::identity();
        for (std::uint64_t n = 1; n <= 100; ++n) {
            prod = pi * prod;
            const auto p = cft::cycle_power(pi, n);
            const double scale = std::max(1.0, std::abs(prod.a));
            worst_power = std::max({worst_power, std::abs(p.a - prod.a) / scale, std::abs(p.b - prod.b) / scale,
                                    std::abs(p.determinant() - 1.0) / (scale * scale)});
        }
    }
    const double elapsed = seconds_since(start);
    return {worst_det < 1e-10 && worst_power < 1e-8 && elapsed < 5.0,
            fmt("max|det-1|=%.2e max power dev=%.2e time=%.2fs", worst_det, worst_power, elapsed)};
}

// 2: phase markers.
Outcome phase_markers() {
    RunConfig heat;
    RunConfig cool;
    cool.T0 = 0.3;
    const auto h = cft::classify(cft::one_cycle(experiment::cft_drive(heat, 1.0)).chiral);
    const auto c = cft::classify(cft::one_cycle(experiment::cft_drive(cool, 1.0)).chiral);
    return {h.label == cft::Phase::Heating && c.label == cft::Phase::NonHeating,
            fmt("(-0.3,0.3) %s |Tr|=%.4f; (0.3,0.3) %s |Tr|=%.4f", cft::to_string(h.label), h.trace_magnitude,
                cft::to_string(c.label), c.trace_magnitude)};
}

// 3: lattice echo against the CFT prediction at c = 1/2.
Outcome echo_equivalence() {
    const auto start = Clock::now();
    RunConfig heat;
    RunConfig cool;
    cool.T0 = 0.3;
    const auto sh = experiment::run_floquet(heat);
    const auto sc = experiment::run_floquet(cool);
    double worst_rel = 0.0;
    double worst_abs = 0.0;
    for (int n = 1; n <= 16; ++n) {
        const double lh = cft::loschmidt_cft(experiment::cft_drive(heat, 1.0), n, 0.5);
        const double lc = cft::loschmidt_cft(experiment::cft_drive(cool, 1.0), n, 0.5);
        worst_rel = std::max(worst_rel, std::abs(sh.points[n].echo - lh) / lh);
        worst_abs = std::max(worst_abs, std::abs(sc.points[n].echo - lc));
    }
    const double elapsed = seconds_since(start);
    return {worst_rel <= 0.10 && worst_abs <= 0.1 && elapsed < 120.0,
            fmt("heating max rel=%.4f non-heating max abs=%.4f time=%.1fs", worst_rel, worst_abs, elapsed)};
}

// 4: fitted c for other critical chains.
Outcome universality() {
    const auto start = Clock::now();
    auto fit_for = [](experiment::ModelSpec model) {
        RunConfig rc;
        rc.model = model;
        rc.evolution = experiment::EvolutionMethod::Exact;
        rc.velocity.mode = experiment::VelocityMode::Fit;
        const double v = experiment::resolve_velocity(rc);
        const auto series = experiment::run_floquet(rc);
        return std::pair{v, fit::fit_central_charge(series, experiment::cft_drive(rc, v)).c_estimate};
    };
    const auto [v_gi, c_gi] = fit_for({lattice::ModelFamily::GeneralizedIsing, 1.0, 0.6066, 0.25});
    const auto [v_xx, c_xx] = fit_for({lattice::ModelFamily::GeneralizedIsing, 0.5, 0.0, 0.5});
    const double elapsed = seconds_since(start);
    return {c_gi >= 0.4 && c_gi <= 0.6 && c_xx >= 0.9 && c_xx <= 1.1 && elapsed < 600.0,
            fmt("GI v=%.4f c=%.4f; XX v=%.4f c=%.4f; time=%.1fs", v_gi, c_gi, v_xx, c_xx, elapsed)};
}

// 5: Trotter against exact evolution.
Outcome trotter_fidelity() {
    RunConfig rc;
    const auto h0 = experiment::h0_of(rc);
    const auto h1 = experiment::h1_of(rc);
    const auto psi0 = experiment::prepare_initial(rc);
    auto exact = psi0;
    for (int n = 0; n < 16; ++n) {
        sim::exact_evolve(exact, h0, rc.T0, 1e-12);
        sim::exact_evolve(exact, h1, rc.T1, 1e-12);
    }
    std::vector<double> log_h;
    std::vector<double> log_err;
    double fidelity = 0.0;
    std::string errs;
    for (int steps : {1, 2, 4, 8}) {
        auto psi = psi0;
        for (int n = 0; n < 16; ++n) {
            sim::trotter_segment(psi, h0, rc.T0, steps);
            sim::trotter_segment(psi, h1, rc.T1, steps);
        }
        if (steps == 1) {
            fidelity = std::norm(sim::overlap(psi, exact));
        }
        const double err = sim::distance(psi, exact);
        log_h.push_back(std::log(1.0 / steps));
        log_err.push_back(std::log(err));
        errs += fmt(" %.3e", err);
    }
    const double mh = std::accumulate(log_h.begin(), log_h.end(), 0.0) / log_h.size();
    const double me = std::accumulate(log_err.begin(), log_err.end(), 0.0) / log_err.size();
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < log_h.size(); ++k) {
        sxy += (log_h[k] - mh) * (log_err[k] - me);
        sxx += (log_h[k] - mh) * (log_h[k] - mh);
    }
    const double slope = sxy / sxx;
    return {fidelity >= 0.95 && std::abs(slope - 2.0) <= 0.1,
            fmt("fidelity=%.5f slope=%.4f errors(m=1,2,4,8):%s", fidelity, slope, errs.c_str())};
}

// 6: MERA preparation from scratch with 8 restarts.
Outcome mera_preparation() {
    const auto start = Clock::now();
    const auto layout = mera::build_layout(16);
    const auto h0 = experiment::h0_of(RunConfig{});
    mera::OptimizeOptions options;
    options.restarts = 8;
    const auto result = mera::optimize(layout, h0, {}, options);
    const auto m = mera::fidelity_metrics(mera::prepare_state(layout, result.params), h0);
    const double elapsed = seconds_since(start);
    return {m.energy_density_error <= 1.5e-3 && m.infidelity <= 6e-3 && elapsed < 1800.0,
            fmt("energy density error=%.3e infidelity=%.3e best restart=%zu time=%.1fs", m.energy_density_error,
                m.infidelity, result.best_restart, elapsed)};
}

// 7: central-charge fits.
Outcome central_charge() {
    RunConfig rc;
    const auto drive = experiment::cft_drive(rc, 1.0);
    experiment::TimeSeries synthetic;
    synthetic.N = rc.N;
    for (int n = 0; n <= 16; ++n) {
        experiment::CyclePoint p;
        p.n = n;
        p.echo = cft::loschmidt_cft(drive, n, 0.575);
        synthetic.points.push_back(p);
    }
    const double c_syn = fit::fit_central_charge(synthetic, drive).c_estimate;
    const auto lattice_fit = fit::fit_central_charge(experiment::run_floquet(rc), drive);
    return {std::abs(c_syn - 0.575) <= 1e-6 && lattice_fit.c_estimate >= 0.45 && lattice_fit.c_estimate <= 0.55,
            fmt("synthetic c=%.9f lattice c=%.4f +- %.4f", c_syn, lattice_fit.c_estimate, lattice_fit.c_uncertainty)};
}

// 8: energy accumulates at the heating peaks, and stays put otherwise.
Outcome localization() {
    RunConfig heat;
    heat.kappa1 = {1.0, 1.2, -0.4};
    RunConfig cool = heat;
    cool.T0 = 0.3;
    const auto peaks = cft::heating_peaks(experiment::cft_drive(heat, 1.0)).all;
    const auto bonds = experiment::run_floquet(heat).points[16].bond_energy;
    const int N = static_cast<int>(bonds.size());
    std::vector<std::pair<double, int>> maxima;
    for (int i = 0; i < N; ++i) {
        if (bonds[i] > bonds[(i + N - 1) % N] && bonds[i] > bonds[(i + 1) % N]) {
            maxima.emplace_back(bonds[i], i);
        }
    }
    std::sort(maxima.rbegin(), maxima.rend());
    bool located = maxima.size() >= 4;
    std::string where;
    for (std::size_t k = 0; k < std::min<std::size_t>(4, maxima.size()); ++k) {
        const double x = maxima[k].second + 0.5;
        double nearest = 1e9;
        for (double p : peaks) {
            nearest = std::min(nearest, ring_distance(x, p, N));
        }
        located = located && nearest <= 1.0;
        where += fmt(" %.1f(d=%.2f)", x, nearest);
    }

    const auto series = experiment::run_floquet(cool);
    const auto psi0 = experiment::prepare_initial(cool);
    const auto ops = experiment::bond_operators(cool.model, lattice::CouplingProfile{cool.kappa0, cool.q, N});
    double worst_ratio = 0.0;
    for (int i = 0; i < N; ++i) {
        const sim::PauliOperator h(N, ops[i]);
        sim::StateVector hpsi(N);
        h.apply(psi0.amplitudes(), hpsi.amplitudes());
        const double mean = sim::overlap(psi0, hpsi).real();
        const double sigma = std::sqrt(std::max(0.0, std::norm(hpsi.norm()) - mean * mean));
        for (const auto &p : series.points) {
            worst_ratio = std::max(worst_ratio, std::abs(p.bond_energy[i] - series.points[0].bond_energy[i]) / sigma);
        }
    }
    return {located && worst_ratio <= 3.0,
            fmt("top maxima at%s; non-heating max|e_i(n)-e_i(0)|/sigma0=%.3f", where.c_str(), worst_ratio)};
}

// 9: shot pipeline with noise and error mitigation.
Outcome mitigation() {
    const auto start = Clock::now();
    std::ifstream in(std::string(CFLOQUET_SOURCE_DIR) + "/fixtures/mera_n16.json");
    const std::string json{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    RunConfig rc;
    rc.preparation = experiment::Preparation::Mera;
    rc.mera_params = mera::params_from_json(json, mera::build_layout(rc.N));
    const auto exact = experiment::run_exact(rc);

    rc.shots = 1000;
    rc.seed = 7;
    RunConfig clean = rc;
    const auto clean_ps = experiment::summarize(experiment::run_shots(clean), clean, true);
    double min_retained = 1.0;
    for (const auto &p : clean_ps.points) {
        min_retained = std::min(min_retained, p.retained_fraction.value_or(0.0));
    }

    rc.noise_p = 2e-3;
    const auto data = experiment::run_shots(rc);
    const auto reference = experiment::run_shots(experiment::reference_config(rc));
    const auto raw = experiment::summarize(data, rc, false);
    const auto corrected = experiment::reference_normalize(experiment::summarize(data, rc, true),
                                                           experiment::summarize(reference, rc, true));
    double mae_raw = 0.0;
    double mae_corr = 0.0;
    for (int n = 1; n <= 16; ++n) {
        mae_raw += std::abs(raw.points[n].echo - exact.points[n].echo) / 16.0;
        mae_corr += std::abs(corrected.points[n].echo - exact.points[n].echo) / 16.0;
    }

    // Bootstrap coverage on synthetic Bernoulli shot records.
    std::mt19937_64 rng(2024);
    const double truth = 0.6;
    std::bernoulli_distribution shot(truth);
    int covered = 0;
    const int repetitions = 200;
    for (int r = 0; r < repetitions; ++r) {
        std::vector<double> sample(1000);
        for (double &s : sample) {
            s = shot(rng) ? 1.0 : 0.0;
        }
        const auto ci = experiment::bootstrap_ci({sample}, 0.95, 1000, 9000 + r)[0];
        covered += (ci.first <= truth && truth <= ci.second) ? 1 : 0;
    }
    const double coverage = static_cast<double>(covered) / repetitions;
    const double elapsed = seconds_since(start);
    return {mae_corr < mae_raw && min_retained == 1.0 && coverage >= 0.93 && coverage <= 0.97,
            fmt("MAE raw=%.4f mitigated=%.4f; retention(p=0) min=%.3f; coverage=%.3f; time=%.1fs", mae_raw, mae_corr,
                min_retained, coverage, elapsed)};
}

// 10: trivial anchors.
Outcome anchors() {
    RunConfig rc;
    const auto drive = experiment::cft_drive(rc, 1.0);
    const double c = 0.5;
    const double l0 = cft::loschmidt_cft(drive, 0, c);
    const double e0 = cft::total_energy_cft(drive, 0, c);
    const double e0_expected = -std::numbers::pi * c / (6.0 * drive.L);
    auto uniform = drive;
    uniform.kappa1 = uniform.kappa0;
    double uniform_dev = 0.0;
    for (double e : cft::loschmidt_series(uniform, 16, c)) {
        uniform_dev = std::max(uniform_dev, std::abs(e - 1.0));
    }
    double reference_dev = 0.0;
    for (const auto &p : experiment::run_floquet(experiment::reference_config(rc)).points) {
        reference_dev = std::max(reference_dev, std::abs(p.echo - 1.0));
    }
    return {l0 == 1.0 && std::abs(e0 - e0_expected) <= 1e-15 && uniform_dev <= 1e-12 && reference_dev <= 1e-8,
            fmt("L(0)=%.17g E(0)+pi c/6L=%.1e uniform dev=%.1e reference dev=%.1e", l0, e0 - e0_expected,
                uniform_dev, reference_dev)};
}

} // namespace

int main(int argc, char **argv) {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"su11-suite", su11_suite},       {"phase-markers", phase_markers}, {"echo-equivalence", echo_equivalence},
        {"universality", universality},   {"trotter-fidelity", trotter_fidelity},
        {"mera-preparation", mera_preparation}, {"central-charge", central_charge},
        {"localization", localization},   {"mitigation", mitigation},       {"anchors", anchors},
    };
    std::set<int> selected;
    for (int k = 1; k < argc; ++k) {
        selected.insert(std::stoi(argv[k]));
    }
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!selected.empty() && !selected.contains(id)) {
            continue;
        }
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
