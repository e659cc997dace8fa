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
 * Text formats: the JSON run configuration, TimeSeries CSV, FitResult JSON and
 * phase-diagram CSV. Doubles are written with 17 significant digits.
 *
 * Config schema (version 1):
 *
 *   {"schema": 1,
 *    "model": {"family": "tfim" | "generalized_ising", "J": .., "g": .., "Gamma": ..},
 *    "N": 16, "q": 2, "kappa0": [1, 0, 0], "kappa1": [1, 1.2, -0.2],
 *    "T0": -0.3, "T1": 0.3, "cycles": 16, "shots": 0, "noise_p": 0, "seed": 1,
 *    "preparation": "exact_ground_state" | "mera", "mera_fixture": "path",
 *    "velocity": {"mode": "fixed" | "fit", "value": 1, "delta_min": 0.125},
 *    "evolution": "trotter" | "exact", "trotter_steps": 1, "postselect": false,
 *    "bootstrap": {"level": 0.95, "resamples": 1000},
 *    "analysis": {"c": 0.5, "c_grid": [min, max, step], "fit_cycles": [1, 16],
 *                 "T0_grid": [min, max, count], "T1_grid": [min, max, count],
 *                 "critical_tol": 1e-9},
 *    "mera": {"restarts": 8, "seed": 20260514, "max_iterations": 3000}}
 *
 * "schema" is required. Every other key is optional and missing keys keep their
 * defaults. Unknown keys are rejected.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfloquet/cft_oracle.hpp"
#include "cfloquet/experiment.hpp"
#include "cfloquet/fitting.hpp"

namespace cfloquet::io {

struct GridAxis {
    double min = -1.5;
    double max = 1.5;
    int count = 101;

    [[nodiscard]] std::vector<double> values() const;
};

struct AnalysisOptions {
    double c = 0.5;
    fit::CGrid c_grid;
    int fit_n_min = 1;
    int fit_n_max = 16;
    GridAxis T0_grid;
    GridAxis T1_grid;
    double critical_tol = cft::kDefaultCriticalTolerance;
};

struct MeraRunOptions {
    int restarts = 8;
    std::uint64_t seed = 20260514;
    int max_iterations = 3000;
};

struct ConfigFile {
    experiment::RunConfig run;
    AnalysisOptions analysis;
    MeraRunOptions mera;
};

/// Parses a config, first applying "dotted.key=value" overrides (the value is
/// read as JSON when it parses, else as a string). Throws ConfigError.
ConfigFile parse_config(const std::string &json, const std::vector<std::string> &overrides = {});

/// Canonical JSON for a config file (a fixed point of parse_config).
std::string to_json(const ConfigFile &config);

/// "%.17g"; non-finite values print as nan / inf / -inf.
std::string format_double(double v);

/// Columns n,echo,echo_lo,echo_hi,total_energy,bond_energy_0..N-1,
/// retained_fraction; absent optional values are empty fields.
std::string to_csv(const experiment::TimeSeries &series);
/// Throws ConfigError on malformed input.
experiment::TimeSeries time_series_from_csv(const std::string &csv);

std::string to_json(const fit::FitResult &result);

/// Columns T0,T1,trace_magnitude,label in row-major (T0 outer) order.
std::string to_csv(const cft::PhaseDiagram &diagram);

} // namespace cfloquet::io
