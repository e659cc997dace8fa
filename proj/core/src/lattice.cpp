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

#include "cfloquet/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <tuple>

#include "cfloquet/errors.hpp"

namespace cfloquet::lattice {
namespace {

int wrap_site(int i, int N) { return ((i % N) + N) % N; }

PauliTerm one_site(double c, int i, Axis a) { return {c, {{i, a}}}; }

PauliTerm two_site(double c, int i, int j, Axis a) { return {c, {{i, a}, {j, a}}}; }

char axis_char(Axis a) {
    switch (a) {
    case Axis::X:
        return 'X';
    case Axis::Y:
        return 'Y';
    case Axis::Z:
        return 'Z';
    }
    return '?';
}

Axis parse_axis(char c) {
    switch (c) {
    case 'X':
        return Axis::X;
    case 'Y':
        return Axis::Y;
    case 'Z':
        return Axis::Z;
    default:
        throw ConfigError(std::string("hamiltonian text: unknown axis '") + c + "'");
    }
}

void check_sites(const PauliTerm &t, int N) {
    for (std::size_t a = 0; a < t.factors.size(); ++a) {
        if (t.factors[a].site < 0 || t.factors[a].site >= N) {
            throw ConfigError("hamiltonian text: site out of range");
        }
        for (std::size_t b = 0; b < a; ++b) {
            if (t.factors[a].site == t.factors[b].site) {
                throw ConfigError("hamiltonian text: repeated site within a term");
            }
        }
    }
}

} // namespace

double envelope(const KappaTriplet &kappa, int q, int N, double x) {
    const double phase = 2.0 * std::numbers::pi * q * x / N;
    return kappa.kappa0 + kappa.kappa_plus * std::cos(phase) + kappa.kappa_minus * std::sin(phase);
}

double CouplingProfile::bond(int i) const {
    return envelope(kappa, q, N, wrap_site(i, N) + 0.5);
}

double CouplingProfile::site_field(int i) const { return 0.5 * (bond(i - 1) + bond(i)); }

HamiltonianSpec build_tfim(const CouplingProfile &profile) {
    if (profile.N < 2) {
        throw DomainError("build_tfim: N must be >= 2");
    }
    const int N = profile.N;
    HamiltonianSpec h;
    h.N = N;
    h.family = ModelFamily::DeformedTFIM;
    h.parameters = {{"kappa0", profile.kappa.kappa0},
                    {"kappa_plus", profile.kappa.kappa_plus},
                    {"kappa_minus", profile.kappa.kappa_minus},
                    {"q", static_cast<double>(profile.q)}};
    h.terms.reserve(2 * static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        h.terms.push_back(two_site(-0.5 * profile.bond(i), i, (i + 1) % N, Axis::Z));
    }
    for (int i = 0; i < N; ++i) {
        h.terms.push_back(one_site(-0.5 * profile.site_field(i), i, Axis::X));
    }
    return h;
}

HamiltonianSpec build_generalized_ising(double J, double g, double Gamma,
                                        const std::optional<CouplingProfile> &profile, int N) {
    if (N < 2) {
        throw DomainError("build_generalized_ising: N must be >= 2");
    }
    if (profile && profile->N != N) {
        throw DomainError("build_generalized_ising: profile size does not match N");
    }
    auto bond_scale = [&](int i) { return profile ? profile->bond(i) : 1.0; };
    auto site_scale = [&](int i) { return profile ? profile->site_field(i) : 1.0; };

    HamiltonianSpec h;
    h.N = N;
    h.family = ModelFamily::GeneralizedIsing;
    h.parameters = {{"J", J}, {"g", g}, {"Gamma", Gamma}};
    if (profile) {
        h.parameters["kappa0"] = profile->kappa.kappa0;
        h.parameters["kappa_plus"] = profile->kappa.kappa_plus;
        h.parameters["kappa_minus"] = profile->kappa.kappa_minus;
        h.parameters["q"] = profile->q;
    }
    if (J != 0.0) {
        for (int i = 0; i < N; ++i) {
            h.terms.push_back(two_site(-J * bond_scale(i), i, (i + 1) % N, Axis::Z));
        }
    }
    if (g != 0.0) {
        for (int i = 0; i < N; ++i) {
            h.terms.push_back(one_site(-g * site_scale(i), i, Axis::X));
        }
    }
    if (Gamma != 0.0) {
        for (int i = 0; i < N; ++i) {
            h.terms.push_back(two_site(-Gamma * bond_scale(i), i, (i + 1) % N, Axis::X));
        }
    }
    return h;
}

std::vector<PauliTerm> local_energy_op(int i, int N) {
    if (N < 2) {
        throw DomainError("local_energy_op: N must be >= 2");
    }
    const int a = wrap_site(i, N);
    const int b = wrap_site(i + 1, N);
    return {two_site(-0.5, a, b, Axis::Z), one_site(-0.25, a, Axis::X), one_site(-0.25, b, Axis::X)};
}

std::vector<PauliTerm> parity_op(int N) {
    if (N < 1) {
        throw DomainError("parity_op: N must be >= 1");
    }
    PauliTerm t{1.0, {}};
    t.factors.reserve(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        t.factors.push_back({i, Axis::X});
    }
    return {t};
}

bool commutes(const PauliTerm &lhs, const PauliTerm &rhs) {
    int anticommuting = 0;
    for (const auto &f : lhs.factors) {
        for (const auto &g : rhs.factors) {
            if (f.site == g.site && f.axis != g.axis) {
                ++anticommuting;
            }
        }
    }
    return anticommuting % 2 == 0;
}

std::vector<PauliTerm> merge_terms(std::vector<PauliTerm> terms, double tol) {
    auto key = [](const PauliTerm &t) {
        std::vector<std::pair<int, int>> k;
        for (const auto &f : t.factors) {
            k.emplace_back(f.site, static_cast<int>(f.axis));
        }
        return k;
    };
    for (auto &t : terms) {
        std::sort(t.factors.begin(), t.factors.end(),
                  [](const PauliFactor &x, const PauliFactor &y) { return x.site < y.site; });
    }
    std::stable_sort(terms.begin(), terms.end(),
                     [&](const PauliTerm &x, const PauliTerm &y) { return key(x) < key(y); });
    std::vector<PauliTerm> out;
    for (auto &t : terms) {
        if (!out.empty() && key(out.back()) == key(t)) {
            out.back().coefficient += t.coefficient;
        } else {
            out.push_back(std::move(t));
        }
    }
    std::erase_if(out, [tol](const PauliTerm &t) { return std::abs(t.coefficient) <= tol; });
    return out;
}

HamiltonianSpec scaled(HamiltonianSpec h, double factor) {
    for (auto &t : h.terms) {
        t.coefficient *= factor;
    }
    return h;
}

std::string label(const PauliTerm &term) {
    std::string out;
    for (const auto &f : term.factors) {
        if (!out.empty()) {
            out += ' ';
        }
        out += axis_char(f.axis);
        out += std::to_string(f.site);
    }
    return out.empty() ? "I" : out;
}

std::string to_text(const HamiltonianSpec &h) {
    std::string out = "# N=" + std::to_string(h.N) + "\n";
    char buf[64];
    for (const auto &t : h.terms) {
        std::snprintf(buf, sizeof buf, "%.17g", t.coefficient);
        out += buf;
        for (const auto &f : t.factors) {
            out += ' ';
            out += std::to_string(f.site);
            out += ':';
            out += axis_char(f.axis);
        }
        out += '\n';
    }
    return out;
}

HamiltonianSpec from_text(const std::string &text) {
    HamiltonianSpec h;
    h.N = -1;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line.rfind("# N=", 0) == 0) {
            try {
                h.N = std::stoi(line.substr(4));
            } catch (...) {
                throw ConfigError("hamiltonian text: bad header '" + line + "'");
            }
            continue;
        }
        if (line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        PauliTerm t;
        if (!(ls >> t.coefficient)) {
            throw ConfigError("hamiltonian text: bad coefficient in '" + line + "'");
        }
        std::string tok;
        while (ls >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos || colon + 2 != tok.size()) {
                throw ConfigError("hamiltonian text: bad factor '" + tok + "'");
            }
            int site = 0;
            try {
                site = std::stoi(tok.substr(0, colon));
            } catch (...) {
                throw ConfigError("hamiltonian text: bad site in '" + tok + "'");
            }
            t.factors.push_back({site, parse_axis(tok[colon + 1])});
        }
        h.terms.push_back(std::move(t));
    }
    if (h.N <= 0) {
        throw ConfigError("hamiltonian text: missing '# N=' header");
    }
    for (const auto &t : h.terms) {
        check_sites(t, h.N);
    }
    return h;
}

} // namespace cfloquet::lattice
