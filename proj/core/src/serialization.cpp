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

#include "cfloquet/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "cfloquet/errors.hpp"
#include "json.hpp"

namespace cfloquet::io {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class ObjectReader {
  public:
    ObjectReader(const json &j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw ConfigError("config: " + where() + " must be an object");
        }
    }

    [[nodiscard]] bool has(const std::string &key) const { return j_.contains(key); }

    const json *get(const std::string &key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    template <typename T> void read(const std::string &key, T &out) {
        const json *v = get(key);
        if (v == nullptr) {
            return;
        }
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v->is_boolean()) {
                    throw ConfigError("");
                }
            } else if constexpr (std::is_arithmetic_v<T>) {
                if (!v->is_number()) {
                    throw ConfigError("");
                }
                if constexpr (std::is_integral_v<T>) {
                    if (!v->is_number_integer()) {
                        throw ConfigError("");
                    }
                }
            }
            out = v->get<T>();
        } catch (const std::exception &) {
            throw ConfigError("config: " + where(key) + " has the wrong type");
        }
    }

    std::vector<double> numbers(const std::string &key, std::size_t expected) {
        const json *v = get(key);
        if (v == nullptr) {
            return {};
        }
        if (!v->is_array() || v->size() != expected ||
            !std::all_of(v->begin(), v->end(), [](const json &e) { return e.is_number(); })) {
            throw ConfigError("config: " + where(key) + " must be an array of " + std::to_string(expected) +
                              " numbers");
        }
        return v->get<std::vector<double>>();
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw ConfigError("config: unknown key " + where(it.key()));
            }
        }
    }

    [[nodiscard]] std::string where(const std::string &key = "") const {
        std::string p = path_.empty() ? key : (key.empty() ? path_ : path_ + "." + key);
        return "\"" + (p.empty() ? std::string("<root>") : p) + "\"";
    }

  private:
    const json &j_;
    std::string path_;
    std::set<std::string> seen_;
};

KappaTriplet kappa_from(const std::vector<double> &v, const KappaTriplet &fallback) {
    if (v.empty()) {
        return fallback;
    }
    return KappaTriplet{v[0], v[1], v[2]};
}

void apply_override(json &root, const std::string &spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override \"" + spec + "\" is not of the form key=value");
    }
    const std::string key = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::exception &) {
        value = raw;
    }
    json *node = &root;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) {
            throw ConfigError("override \"" + spec + "\" has an empty key component");
        }
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        if (!node->contains(part)) {
            (*node)[part] = json::object();
        }
        node = &(*node)[part];
        if (!node->is_object()) {
            throw ConfigError("override \"" + spec + "\": \"" + part + "\" is not an object");
        }
        start = dot + 1;
    }
}

GridAxis axis_from(const std::vector<double> &v, const GridAxis &fallback, const std::string &name) {
    if (v.empty()) {
        return fallback;
    }
    if (v[2] < 1 || std::floor(v[2]) != v[2]) {
        throw ConfigError("config: \"analysis." + name + "\" count must be a positive integer");
    }
    return GridAxis{v[0], v[1], static_cast<int>(v[2])};
}

std::string family_name(lattice::ModelFamily f) {
    return f == lattice::ModelFamily::DeformedTFIM ? "tfim" : "generalized_ising";
}

} // namespace

std::vector<double> GridAxis::values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(count == 1 ? min : min + (max - min) * i / (count - 1));
    }
    return out;
}

ConfigFile parse_config(const std::string &text, const std::vector<std::string> &overrides) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    for (const auto &o : overrides) {
        apply_override(root, o);
    }

    ConfigFile cf;
    experiment::RunConfig &rc = cf.run;
    ObjectReader r(root, "");
    if (!r.has("schema")) {
        throw ConfigError("config: missing \"schema\" (expected 1)");
    }
    r.read("schema", rc.schema);
    if (rc.schema != 1) {
        throw ConfigError("config: unsupported schema " + std::to_string(rc.schema));
    }
    if (const json *m = r.get("model")) {
        ObjectReader mr(*m, "model");
        std::string family = "tfim";
        mr.read("family", family);
        if (family == "tfim") {
            rc.model.family = lattice::ModelFamily::DeformedTFIM;
        } else if (family == "generalized_ising") {
            rc.model.family = lattice::ModelFamily::GeneralizedIsing;
        } else {
            throw ConfigError("config: unknown model family \"" + family + "\"");
        }
        mr.read("J", rc.model.J);
        mr.read("g", rc.model.g);
        mr.read("Gamma", rc.model.Gamma);
        mr.finish();
    }
    r.read("N", rc.N);
    r.read("q", rc.q);
    rc.kappa0 = kappa_from(r.numbers("kappa0", 3), rc.kappa0);
    rc.kappa1 = kappa_from(r.numbers("kappa1", 3), rc.kappa1);
    r.read("T0", rc.T0);
    r.read("T1", rc.T1);
    r.read("cycles", rc.cycles);
    r.read("shots", rc.shots);
    r.read("noise_p", rc.noise_p);
    if (const json *s = r.get("seed")) {
        if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0)) {
            throw ConfigError("config: \"seed\" must be a non-negative integer");
        }
        rc.seed = s->get<std::uint64_t>();
    }
    std::string prep = "exact_ground_state";
    r.read("preparation", prep);
    if (prep == "exact_ground_state") {
        rc.preparation = experiment::Preparation::ExactGroundState;
    } else if (prep == "mera") {
        rc.preparation = experiment::Preparation::Mera;
    } else {
        throw ConfigError("config: unknown preparation \"" + prep + "\"");
    }
    r.read("mera_fixture", rc.mera_fixture);
    if (const json *v = r.get("velocity")) {
        ObjectReader vr(*v, "velocity");
        std::string mode = "fixed";
        vr.read("mode", mode);
        if (mode == "fixed") {
            rc.velocity.mode = experiment::VelocityMode::Fixed;
        } else if (mode == "fit") {
            rc.velocity.mode = experiment::VelocityMode::Fit;
        } else {
            throw ConfigError("config: unknown velocity mode \"" + mode + "\"");
        }
        vr.read("value", rc.velocity.value);
        if (vr.has("delta_min")) {
            double d = 0.0;
            vr.read("delta_min", d);
            rc.velocity.delta_min = d;
        }
        vr.finish();
    }
    std::string evo = "trotter";
    r.read("evolution", evo);
    if (evo == "trotter") {
        rc.evolution = experiment::EvolutionMethod::Trotter;
    } else if (evo == "exact") {
        rc.evolution = experiment::EvolutionMethod::Exact;
    } else {
        throw ConfigError("config: unknown evolution \"" + evo + "\"");
    }
    r.read("trotter_steps", rc.trotter_steps);
    r.read("postselect", rc.postselect);
    if (const json *b = r.get("bootstrap")) {
        ObjectReader br(*b, "bootstrap");
        br.read("level", rc.bootstrap.level);
        br.read("resamples", rc.bootstrap.resamples);
        br.finish();
    }
    if (const json *a = r.get("analysis")) {
        ObjectReader ar(*a, "analysis");
        ar.read("c", cf.analysis.c);
        if (auto g = ar.numbers("c_grid", 3); !g.empty()) {
            cf.analysis.c_grid = fit::CGrid{g[0], g[1], g[2]};
        }
        if (auto w = ar.numbers("fit_cycles", 2); !w.empty()) {
            cf.analysis.fit_n_min = static_cast<int>(w[0]);
            cf.analysis.fit_n_max = static_cast<int>(w[1]);
        }
        cf.analysis.T0_grid = axis_from(ar.numbers("T0_grid", 3), cf.analysis.T0_grid, "T0_grid");
        cf.analysis.T1_grid = axis_from(ar.numbers("T1_grid", 3), cf.analysis.T1_grid, "T1_grid");
        ar.read("critical_tol", cf.analysis.critical_tol);
        ar.finish();
    }
    if (const json *m = r.get("mera")) {
        ObjectReader mr(*m, "mera");
        mr.read("restarts", cf.mera.restarts);
        if (const json *s = mr.get("seed")) {
            if (!s->is_number_integer() || s->get<long long>() < 0) {
                throw ConfigError("config: \"mera.seed\" must be a non-negative integer");
            }
            cf.mera.seed = s->get<std::uint64_t>();
        }
        mr.read("max_iterations", cf.mera.max_iterations);
        mr.finish();
    }
    r.finish();
    if (!(cf.analysis.c > 0.0)) {
        throw ConfigError("config: \"analysis.c\" must be > 0");
    }
    if (cf.mera.restarts < 1 || cf.mera.max_iterations < 1) {
        throw ConfigError("config: MERA restarts and iterations must be >= 1");
    }
    rc.validate();
    return cf;
}

std::string to_json(const ConfigFile &cf) {
    const auto &rc = cf.run;
    ordered_json j;
    j["schema"] = rc.schema;
    j["model"] = {{"family", family_name(rc.model.family)},
                  {"J", rc.model.J},
                  {"g", rc.model.g},
                  {"Gamma", rc.model.Gamma}};
    j["N"] = rc.N;
    j["q"] = rc.q;
    j["kappa0"] = {rc.kappa0.kappa0, rc.kappa0.kappa_plus, rc.kappa0.kappa_minus};
    j["kappa1"] = {rc.kappa1.kappa0, rc.kappa1.kappa_plus, rc.kappa1.kappa_minus};
    j["T0"] = rc.T0;
    j["T1"] = rc.T1;
    j["cycles"] = rc.cycles;
    j["shots"] = rc.shots;
    j["noise_p"] = rc.noise_p;
    j["seed"] = rc.seed;
    j["preparation"] = rc.preparation == experiment::Preparation::Mera ? "mera" : "exact_ground_state";
    if (!rc.mera_fixture.empty()) {
        j["mera_fixture"] = rc.mera_fixture;
    }
    ordered_json v{{"mode", rc.velocity.mode == experiment::VelocityMode::Fit ? "fit" : "fixed"},
                   {"value", rc.velocity.value}};
    if (rc.velocity.delta_min) {
        v["delta_min"] = *rc.velocity.delta_min;
    }
    j["velocity"] = v;
    j["evolution"] = rc.evolution == experiment::EvolutionMethod::Exact ? "exact" : "trotter";
    j["trotter_steps"] = rc.trotter_steps;
    j["postselect"] = rc.postselect;
    j["bootstrap"] = {{"level", rc.bootstrap.level}, {"resamples", rc.bootstrap.resamples}};
    const auto &a = cf.analysis;
    j["analysis"] = {{"c", a.c},
                     {"c_grid", {a.c_grid.min, a.c_grid.max, a.c_grid.step}},
                     {"fit_cycles", {a.fit_n_min, a.fit_n_max}},
                     {"T0_grid", {a.T0_grid.min, a.T0_grid.max, a.T0_grid.count}},
                     {"T1_grid", {a.T1_grid.min, a.T1_grid.max, a.T1_grid.count}},
                     {"critical_tol", a.critical_tol}};
    j["mera"] = {{"restarts", cf.mera.restarts}, {"seed", cf.mera.seed}, {"max_iterations", cf.mera.max_iterations}};
    return j.dump(2) + "\n";
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const experiment::TimeSeries &series) {
    std::string out = "n,echo,echo_lo,echo_hi,total_energy";
    for (int i = 0; i < series.N; ++i) {
        out += ",bond_energy_" + std::to_string(i);
    }
    out += ",retained_fraction\n";
    for (const auto &p : series.points) {
        if (static_cast<int>(p.bond_energy.size()) != series.N) {
            throw DomainError("to_csv: bond energy count differs from N");
        }
        out += std::to_string(p.n);
        out += ',' + format_double(p.echo);
        out += ',' + (p.echo_ci ? format_double(p.echo_ci->first) : std::string());
        out += ',' + (p.echo_ci ? format_double(p.echo_ci->second) : std::string());
        out += ',' + format_double(p.total_energy);
        for (double e : p.bond_energy) {
            out += ',' + format_double(e);
        }
        out += ',' + (p.retained_fraction ? format_double(*p.retained_fraction) : std::string());
        out += '\n';
    }
    return out;
}

experiment::TimeSeries time_series_from_csv(const std::string &csv) {
    std::istringstream in(csv);
    std::string line;
    auto split = [](const std::string &s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(s);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!s.empty() && s.back() == ',') {
            cells.emplace_back();
        }
        return cells;
    };
    auto number = [](const std::string &s, int row) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) {
                throw std::invalid_argument(s);
            }
            return v;
        } catch (const std::exception &) {
            throw ConfigError("time series CSV: bad number \"" + s + "\" on row " + std::to_string(row));
        }
    };
    if (!std::getline(in, line)) {
        throw ConfigError("time series CSV: empty input");
    }
    const auto header = split(line);
    if (header.size() < 6 || header[0] != "n" || header[1] != "echo" || header[2] != "echo_lo" ||
        header[3] != "echo_hi" || header[4] != "total_energy" || header.back() != "retained_fraction") {
        throw ConfigError("time series CSV: unexpected header");
    }
    experiment::TimeSeries series;
    series.N = static_cast<int>(header.size()) - 6;
    for (int i = 0; i < series.N; ++i) {
        if (header[static_cast<std::size_t>(5 + i)] != "bond_energy_" + std::to_string(i)) {
            throw ConfigError("time series CSV: unexpected header");
        }
    }
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw ConfigError("time series CSV: row " + std::to_string(row) + " has " +
                              std::to_string(cells.size()) + " fields, expected " + std::to_string(header.size()));
        }
        experiment::CyclePoint p;
        p.n = static_cast<int>(number(cells[0], row));
        p.echo = number(cells[1], row);
        if (!cells[2].empty() || !cells[3].empty()) {
            p.echo_ci = std::make_pair(number(cells[2], row), number(cells[3], row));
        }
        p.total_energy = number(cells[4], row);
        for (int i = 0; i < series.N; ++i) {
            p.bond_energy.push_back(number(cells[static_cast<std::size_t>(5 + i)], row));
        }
        if (!cells.back().empty()) {
            p.retained_fraction = number(cells.back(), row);
        }
        series.points.push_back(std::move(p));
    }
    return series;
}

std::string to_json(const fit::FitResult &result) {
    ordered_json j;
    j["schema"] = 1;
    j["kind"] = "fit_result";
    j["c_estimate"] = result.c_estimate;
    j["c_uncertainty"] = result.c_uncertainty;
    j["sse_min"] = result.sse_min;
    j["fit_cycles"] = {result.n_min, result.n_max};
    j["points"] = result.points;
    auto curve = ordered_json::array();
    for (const auto &[c, s] : result.sse_curve) {
        curve.push_back({c, s});
    }
    j["sse_curve"] = std::move(curve);
    return j.dump(2) + "\n";
}

std::string to_csv(const cft::PhaseDiagram &diagram) {
    std::string out = "T0,T1,trace_magnitude,label\n";
    for (std::size_t i = 0; i < diagram.T0_axis.size(); ++i) {
        for (std::size_t k = 0; k < diagram.T1_axis.size(); ++k) {
            const auto &cell = diagram.at(i, k);
            out += format_double(diagram.T0_axis[i]) + ',' + format_double(diagram.T1_axis[k]) + ',' +
                   format_double(cell.trace_magnitude) + ',' + cft::to_string(cell.label) + '\n';
        }
    }
    return out;
}

} // namespace cfloquet::io
