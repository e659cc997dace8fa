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

#include "cfloquet/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "cfloquet/errors.hpp"

namespace cfloquet::fit {
namespace {

// log|alpha_n| and observed echo at each usable cycle; L(n; c) = exp(-k c log|alpha_n|).
struct Prepared {
    std::vector<double> log_alpha;
    std::vector<double> echo;
    double k = 0.0;

    [[nodiscard]] double sse(double c) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < echo.size(); ++i) {
            const double r = echo[i] - std::exp(-k * c * log_alpha[i]);
            acc += r * r;
        }
        return acc;
    }
};

Prepared prepare(const experiment::TimeSeries &series, const cft::DriveSpec &drive, int n_min, int n_max) {
    const cft::MobiusMatrix pi = cft::one_cycle(drive).chiral;
    Prepared p;
    p.k = (static_cast<double>(drive.q) * drive.q - 1.0) / (3.0 * drive.q);
    for (const auto &pt : series.points) {
        if (pt.n < n_min || pt.n > n_max) {
            continue;
        }
        const auto an = cft::cycle_power(pi, static_cast<std::uint64_t>(pt.n));
        p.log_alpha.push_back(std::log(std::abs(an.a)));
        p.echo.push_back(pt.echo);
    }
    return p;
}

} // namespace

double sse(const experiment::TimeSeries &series, const cft::DriveSpec &drive, double c, int n_min,
           int n_max) {
    return prepare(series, drive, n_min, n_max).sse(c);
}

FitResult fit_central_charge(const experiment::TimeSeries &series, const cft::DriveSpec &drive,
                             const CGrid &grid, int n_min, int n_max) {
    drive.validate();
    const auto phase = cft::classify(cft::one_cycle(drive).chiral);
    if (phase.label != cft::Phase::Heating) {
        throw PhaseError(std::string("fit_central_charge: drive is ") + cft::to_string(phase.label) +
                         ", the fit needs a heating drive");
    }
    if (!(grid.step > 0.0) || !(grid.max > grid.min) || !(grid.min > 0.0)) {
        throw DomainError("fit_central_charge: invalid c grid");
    }
    const Prepared prep = prepare(series, drive, n_min, n_max);
    if (prep.echo.size() < 2) {
        throw NumericalError("fit_central_charge: fewer than two cycles in the fit window");
    }

    FitResult out;
    out.n_min = n_min;
    out.n_max = n_max;
    out.points = static_cast<int>(prep.echo.size());
    const auto count = static_cast<std::size_t>(std::floor((grid.max - grid.min) / grid.step + 1e-9)) + 1;
    out.sse_curve.reserve(count + 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double c = grid.min + grid.step * static_cast<double>(i);
        out.sse_curve.emplace_back(c, prep.sse(c));
    }
    const auto best = std::min_element(out.sse_curve.begin(), out.sse_curve.end(),
                                       [](const auto &a, const auto &b) { return a.second < b.second; });
    const auto worst = std::max_element(out.sse_curve.begin(), out.sse_curve.end(),
                                        [](const auto &a, const auto &b) { return a.second < b.second; });
    if (worst->second - best->second <= 1e-14 * std::max(worst->second, 1e-300)) {
        throw NumericalError("fit_central_charge: SSE is flat over the grid");
    }
    const std::size_t ib = static_cast<std::size_t>(best - out.sse_curve.begin());
    const double lo = out.sse_curve[ib == 0 ? 0 : ib - 1].first;
    const double hi = out.sse_curve[std::min(ib + 1, count - 1)].first;
    double c_star = best->first;
    double s_star = best->second;
    const auto refined = boost::math::tools::brent_find_minima([&](double c) { return prep.sse(c); }, lo, hi,
                                                               std::numeric_limits<double>::digits);
    if (refined.second < s_star) {
        c_star = refined.first;
        s_star = refined.second;
        const auto pos = std::lower_bound(out.sse_curve.begin(), out.sse_curve.end(), c_star,
                                          [](const auto &e, double c) { return e.first < c; });
        if (pos == out.sse_curve.end() || pos->first != c_star) {
            out.sse_curve.insert(pos, {c_star, s_star});
        }
    }
    out.c_estimate = c_star;
    out.sse_min = s_star;

    const double h = std::max(grid.step, 1e-4);
    const double curvature = (prep.sse(c_star + h) - 2.0 * s_star + prep.sse(c_star - h)) / (h * h);
    const double sigma2 = s_star / static_cast<double>(prep.echo.size() - 1);
    out.c_uncertainty = curvature > 0.0 ? std::sqrt(2.0 * sigma2 / curvature) : std::numeric_limits<double>::infinity();
    return out;
}

} // namespace cfloquet::fit
