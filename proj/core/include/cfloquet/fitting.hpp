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
 * Central-charge extraction from a lattice echo series.
 */

#pragma once

#include <utility>
#include <vector>

#include "cfloquet/cft_oracle.hpp"
#include "cfloquet/experiment.hpp"

namespace cfloquet::fit {

struct CGrid {
    double min = 0.05;
    double max = 1.5;
    double step = 1e-3;
};

struct FitResult {
    double c_estimate = 0.0;
    /// sigma * sqrt(2 / SSE''(c*)) with sigma^2 = SSE(c*) / (m - 1).
    double c_uncertainty = 0.0;
    double sse_min = 0.0;
    /// Grid evaluations plus the refined minimum, sorted by c.
    std::vector<std::pair<double, double>> sse_curve;
    int n_min = 1;
    int n_max = 16;
    int points = 0;
};

/// SSE(c) over the cycles n in [n_min, n_max] present in the series.
double sse(const experiment::TimeSeries &series, const cft::DriveSpec &drive, double c, int n_min = 1,
           int n_max = 16);

/// Grid search followed by Brent refinement between the neighbours of the
/// best grid point. Throws PhaseError unless the drive heats, and
/// NumericalError when fewer than two cycles are usable or SSE is flat.
FitResult fit_central_charge(const experiment::TimeSeries &series, const cft::DriveSpec &drive,
                             const CGrid &grid = {}, int n_min = 1, int n_max = 16);

} // namespace cfloquet::fit
