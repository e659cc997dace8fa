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

#include "cfloquet/mera.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>

#include "cfloquet/eigensolver.hpp"
#include "cfloquet/errors.hpp"
#include "cfloquet/parallel.hpp"
#include "cfloquet/random.hpp"
#include "json.hpp"

namespace cfloquet::mera {
namespace {

using sim::StateVector;

inline std::size_t insert_zero(std::size_t x, int bit) {
    const std::size_t low = x & ((std::size_t{1} << bit) - 1);
    return ((x >> bit) << (bit + 1)) | low;
}

// Returns (Im <lambda|Y_f Z_s|psi>, Im <lambda|Z_f Y_s|psi>), then replaces
// psi and lambda with U^dagger psi and U^dagger lambda in the same sweep.
std::pair<double, double> gate_gradient_and_pullback(StateVector &psi, StateVector &lambda,
                                                     const sim::TwoQubitGate &gate) {
    const int lo = std::min(gate.first, gate.second);
    const int hi = std::max(gate.first, gate.second);
    const std::size_t bf = std::size_t{1} << gate.first;
    const std::size_t bs = std::size_t{1} << gate.second;
    // MERA gates are real orthogonal, so U^dagger = U^T.
    double m[16];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const Complex z = gate.matrix[static_cast<std::size_t>(c * 4 + r)];
            if (z.imag() != 0.0) {
                throw NumericalError("mera: gate matrix is not real");
            }
            m[r * 4 + c] = z.real();
        }
    }
    auto p = psi.amplitudes();
    auto l = lambda.amplitudes();
    const std::size_t quarter = p.size() >> 2;
    // <l|YZ|v> = i (-conj(l0) v2 + conj(l1) v3 + conj(l2) v0 - conj(l3) v1), so
    // its imaginary part is Re of the bracket; likewise for ZY.
    double g_yz = 0.0;
    double g_zy = 0.0;
    for (std::size_t k = 0; k < quarter; ++k) {
        const std::size_t base = insert_zero(insert_zero(k, lo), hi);
        const std::size_t idx[4] = {base, base | bs, base | bf, base | bf | bs};
        const Complex v[4] = {p[idx[0]], p[idx[1]], p[idx[2]], p[idx[3]]};
        const Complex w[4] = {l[idx[0]], l[idx[1]], l[idx[2]], l[idx[3]]};
        g_yz += (std::conj(w[2]) * v[0] + std::conj(w[1]) * v[3] - std::conj(w[0]) * v[2] -
                 std::conj(w[3]) * v[1]).real();
        g_zy += (std::conj(w[1]) * v[0] + std::conj(w[2]) * v[3] - std::conj(w[0]) * v[1] -
                 std::conj(w[3]) * v[2]).real();
        for (int r = 0; r < 4; ++r) {
            p[idx[r]] = m[r * 4] * v[0] + m[r * 4 + 1] * v[1] + m[r * 4 + 2] * v[2] + m[r * 4 + 3] * v[3];
            l[idx[r]] = m[r * 4] * w[0] + m[r * 4 + 1] * w[1] + m[r * 4 + 2] * w[2] + m[r * 4 + 3] * w[3];
        }
    }
    return {g_yz, g_zy};
}

void check_aligned(const MeraLayout &layout, const MeraParams &params) {
    if (params.size() != layout.gates.size()) {
        throw DomainError("mera: " + std::to_string(params.size()) + " parameter pairs for " +
                          std::to_string(layout.gates.size()) + " gates");
    }
}

std::vector<double> flatten(const MeraParams &p) {
    std::vector<double> x;
    x.reserve(2 * p.size());
    for (const auto &g : p) {
        x.push_back(g.phi);
        x.push_back(g.gamma);
    }
    return x;
}

MeraParams unflatten(const std::vector<double> &x) {
    MeraParams p(x.size() / 2);
    for (std::size_t k = 0; k < p.size(); ++k) {
        p[k] = {x[2 * k], x[2 * k + 1]};
    }
    return p;
}

double dot(const std::vector<double> &a, const std::vector<double> &b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double infidelity_against(const StateVector &psi, const StateVector &reference) {
    return 1.0 - std::norm(sim::overlap(reference, psi));
}

RestartResult run_restart(const MeraLayout &layout, const sim::PauliOperator &h,
                          std::vector<double> x, std::uint64_t seed,
                          const OptimizeOptions &options) {
    RestartResult out;
    out.seed = seed;
    auto evaluate = [&](const std::vector<double> &p) {
        return energy_and_gradient(layout, unflatten(p), h, options.gradient, options.fd_step);
    };
    auto record = [&](const std::vector<double> &p, double energy) {
        TraceEntry e{energy, -1.0};
        if (options.reference != nullptr) {
            e.infidelity = infidelity_against(prepare_state(layout, unflatten(p)), *options.reference);
        }
        out.trace.push_back(e);
    };

    EnergyGradient cur = evaluate(x);
    record(x, cur.energy);
    std::deque<std::pair<std::vector<double>, std::vector<double>>> memory;
    int stalled = 0;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        const double gnorm = std::sqrt(dot(cur.gradient, cur.gradient));
        if (gnorm < options.gradient_tol) {
            out.converged = true;
            break;
        }
        // L-BFGS two-loop recursion.
        std::vector<double> d = cur.gradient;
        std::vector<double> alphas(memory.size());
        for (std::size_t k = memory.size(); k-- > 0;) {
            const auto &[s, y] = memory[k];
            alphas[k] = dot(s, d) / dot(y, s);
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i] -= alphas[k] * y[i];
            }
        }
        if (!memory.empty()) {
            const auto &[s, y] = memory.back();
            const double gamma = dot(s, y) / dot(y, y);
            for (auto &v : d) {
                v *= gamma;
            }
        } else {
            const double scale = 0.1 / std::max(gnorm, 1e-12);
            for (auto &v : d) {
                v *= scale;
            }
        }
        for (std::size_t k = 0; k < memory.size(); ++k) {
            const auto &[s, y] = memory[k];
            const double beta = dot(y, d) / dot(y, s);
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i] += (alphas[k] - beta) * s[i];
            }
        }
        for (auto &v : d) {
            v = -v;
        }
        double slope = dot(cur.gradient, d);
        if (!(slope < 0.0)) {
            memory.clear();
            d = cur.gradient;
            const double scale = -0.1 / std::max(gnorm, 1e-12);
            for (auto &v : d) {
                v *= scale;
            }
            slope = dot(cur.gradient, d);
        }

        if (-slope < 1e-13 * std::max(1.0, std::abs(cur.energy))) {
            out.converged = true; // predicted decrease is below roundoff
            break;
        }
        double step = 1.0;
        bool accepted = false;
        std::vector<double> trial(x.size());
        EnergyGradient next;
        for (int ls = 0; ls < 30; ++ls) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                trial[i] = x[i] + step * d[i];
            }
            next = evaluate(trial);
            if (next.energy <= cur.energy + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || next.energy > cur.energy) {
            if (memory.empty()) {
                out.converged = true; // no descent possible at working precision
                break;
            }
            memory.clear();
            continue;
        }
        std::vector<double> s(x.size());
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            s[i] = trial[i] - x[i];
            y[i] = next.gradient[i] - cur.gradient[i];
        }
        if (dot(s, y) > 1e-14) {
            memory.emplace_back(std::move(s), std::move(y));
            if (static_cast<int>(memory.size()) > options.history) {
                memory.pop_front();
            }
        }
        const double decrease = cur.energy - next.energy;
        x = trial;
        cur = std::move(next);
        record(x, cur.energy);
        stalled = decrease < options.energy_tol ? stalled + 1 : 0;
        if (stalled >= 10) {
            out.converged = true;
            break;
        }
    }
    out.iterations = it;
    out.params = unflatten(x);
    out.energy = cur.energy;
    return out;
}

} // namespace

const char *to_string(GateKind kind) {
    switch (kind) {
    case GateKind::Top:
        return "top";
    case GateKind::Isometry:
        return "isometry";
    case GateKind::Entangler:
        return "entangler";
    }
    return "unknown";
}

int MeraLayout::layer_count() const {
    int top = -1;
    for (const auto &g : gates) {
        top = std::max(top, g.layer);
    }
    return top + 1;
}

std::string MeraLayout::descriptor_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xFF;
            h *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(N));
    for (const auto &g : gates) {
        mix(static_cast<std::uint64_t>(g.kind));
        mix(static_cast<std::uint64_t>(g.first));
        mix(static_cast<std::uint64_t>(g.second));
        mix(static_cast<std::uint64_t>(g.layer));
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

MeraLayout build_layout(int N) {
    if (N != 4 && N != 8 && N != 16 && N != 32) {
        throw DomainError("mera: unsupported N=" + std::to_string(N) + " (expected 4, 8, 16 or 32)");
    }
    MeraLayout layout;
    layout.N = N;
    layout.gates.push_back({GateKind::Top, 0, N / 2, 0});
    int layer = 1;
    for (int d = N / 2; d >= 2; d /= 2, ++layer) {
        for (int r = 0; r < N; r += d) {
            layout.gates.push_back({GateKind::Isometry, r, r + d / 2, layer});
        }
        for (int r = 0; r < N; r += d) {
            layout.gates.push_back({GateKind::Entangler, r + d / 2, (r + d) % N, layer});
        }
    }
    return layout;
}

sim::Circuit mera_circuit(const MeraLayout &layout, const MeraParams &params) {
    check_aligned(layout, params);
    sim::Circuit c{layout.N, {}};
    c.ops.reserve(layout.gates.size());
    for (std::size_t k = 0; k < layout.gates.size(); ++k) {
        const auto &g = layout.gates[k];
        c.ops.push_back(sim::TwoQubitGate{sim::mera_gate(params[k].phi, params[k].gamma), g.first, g.second});
    }
    return c;
}

StateVector prepare_state(const MeraLayout &layout, const MeraParams &params) {
    StateVector psi = sim::initial_plus_state(layout.N);
    sim::run(psi, mera_circuit(layout, params));
    return psi;
}

EnergyGradient energy_and_gradient(const MeraLayout &layout, const MeraParams &params,
                                   const sim::PauliOperator &h, GradientMethod method,
                                   double fd_step) {
    check_aligned(layout, params);
    EnergyGradient out;
    out.gradient.assign(2 * params.size(), 0.0);
    const sim::Circuit circuit = mera_circuit(layout, params);
    StateVector psi = sim::initial_plus_state(layout.N);
    sim::run(psi, circuit);

    if (method == GradientMethod::CentralDifference) {
        out.energy = h.expectation(psi);
        std::vector<double> x = flatten(params);
        std::vector<double> &g = out.gradient;
        parallel_for(x.size(), [&](std::size_t k) {
            std::vector<double> probe = x;
            probe[k] = x[k] + fd_step;
            const double up = h.expectation(prepare_state(layout, unflatten(probe)));
            probe[k] = x[k] - fd_step;
            const double down = h.expectation(prepare_state(layout, unflatten(probe)));
            g[k] = (up - down) / (2.0 * fd_step);
        });
        return out;
    }

    // Adjoint sweep: lambda = H psi pulled back through the circuit.
    StateVector lambda(layout.N);
    h.apply(psi.amplitudes(), lambda.amplitudes());
    out.energy = sim::overlap(psi, lambda).real();
    for (std::size_t k = layout.gates.size(); k-- > 0;) {
        const auto &gate = std::get<sim::TwoQubitGate>(circuit.ops[k]);
        const auto [d_phi, d_gamma] = gate_gradient_and_pullback(psi, lambda, gate);
        out.gradient[2 * k] = d_phi;
        out.gradient[2 * k + 1] = d_gamma;
    }
    return out;
}

OptimizeResult optimize(const MeraLayout &layout, const lattice::HamiltonianSpec &h0,
                        const MeraParams &init, const OptimizeOptions &options) {
    if (h0.N != layout.N) {
        throw DomainError("mera optimize: Hamiltonian and layout sizes differ");
    }
    if (!init.empty()) {
        check_aligned(layout, init);
    }
    std::vector<std::uint64_t> seeds = options.restart_seeds;
    if (seeds.empty()) {
        for (int r = 0; r < std::max(options.restarts, 1); ++r) {
            seeds.push_back(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
        }
    }
    const sim::PauliOperator h(h0);
    const std::size_t n_params = 2 * layout.gates.size();

    OptimizeResult result;
    result.restarts.resize(seeds.size());
    // Restarts run sequentially: each energy evaluation may already use the
    // worker pool for finite-difference probes.
    for (std::size_t r = 0; r < seeds.size(); ++r) {
        std::vector<double> x(n_params);
        if (r == 0 && !init.empty()) {
            x = flatten(init);
        } else {
            Rng rng(seeds[r]);
            for (auto &v : x) {
                v = rng.uniform(-options.init_range, options.init_range);
            }
        }
        result.restarts[r] = run_restart(layout, h, std::move(x), seeds[r], options);
    }
    std::size_t best = 0;
    for (std::size_t r = 1; r < result.restarts.size(); ++r) {
        const auto &a = result.restarts[r];
        const auto &b = result.restarts[best];
        if (a.energy < b.energy || (a.energy == b.energy && a.seed < b.seed)) {
            best = r;
        }
    }
    result.best_restart = best;
    result.params = result.restarts[best].params;
    result.energy = result.restarts[best].energy;
    result.converged = result.restarts[best].converged;
    result.trace = result.restarts[best].trace;
    return result;
}

FidelityMetrics fidelity_metrics(const StateVector &state, const sim::PauliOperator &h0,
                                 double exact_energy, const std::vector<StateVector> &ground_space) {
    FidelityMetrics m;
    m.exact_energy = exact_energy;
    m.degenerate = ground_space.size() > 1;
    m.energy_density_error = (h0.expectation(state) - exact_energy) / state.num_qubits();
    double weight = 0.0;
    for (const auto &g : ground_space) {
        weight += std::norm(sim::overlap(g, state));
    }
    m.infidelity = 1.0 - weight;
    return m;
}

FidelityMetrics fidelity_metrics(const StateVector &state, const lattice::HamiltonianSpec &h0) {
    const sim::PauliOperator h(h0);
    sim::EigenOptions opts;
    opts.tol = 1e-10;
    const sim::GroundState gs = sim::ground_state(h, opts);
    return fidelity_metrics(state, h, gs.energy, gs.ground_space);
}

std::string params_to_json(const MeraLayout &layout, const MeraParams &params) {
    check_aligned(layout, params);
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["kind"] = "mera_params";
    j["N"] = layout.N;
    j["layout_hash"] = layout.descriptor_hash();
    j["gates"] = layout.gates.size();
    auto arr = nlohmann::ordered_json::array();
    for (const auto &p : params) {
        arr.push_back({p.phi, p.gamma});
    }
    j["params"] = std::move(arr);
    return j.dump(2) + "\n";
}

MeraParams params_from_json(const std::string &json, const MeraLayout &layout) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("mera params: malformed JSON: ") + e.what());
    }
    try {
        if (j.at("schema").get<int>() != 1 || j.at("kind").get<std::string>() != "mera_params") {
            throw ConfigError("mera params: unsupported schema or kind");
        }
        if (j.at("N").get<int>() != layout.N) {
            throw ConfigError("mera params: fixture N=" + std::to_string(j.at("N").get<int>()) +
                              " does not match layout N=" + std::to_string(layout.N));
        }
        if (j.at("layout_hash").get<std::string>() != layout.descriptor_hash()) {
            throw ConfigError("mera params: layout hash mismatch");
        }
        MeraParams out;
        for (const auto &pair : j.at("params")) {
            out.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
        }
        check_aligned(layout, out);
        return out;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("mera params: ") + e.what());
    } catch (const DomainError &e) {
        throw ConfigError(e.what());
    }
}

} // namespace cfloquet::mera
