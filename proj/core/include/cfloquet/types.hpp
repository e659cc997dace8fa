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

#pragma once

#include <complex>

namespace cfloquet {

using Complex = std::complex<double>;

/// Amplitudes (kappa0, kappa+, kappa-) of the single-harmonic deformation
///   f(x) = kappa0 + kappa+ cos(2 pi q x / L) + kappa- sin(2 pi q x / L).
struct KappaTriplet {
    double kappa0 = 1.0;
    double kappa_plus = 0.0;
    double kappa_minus = 0.0;

    /// kappa0^2 - kappa+^2 - kappa-^2; its sign selects elliptic (> 0),
    /// parabolic (= 0) or hyperbolic (< 0) segment evolution.
    [[nodiscard]] double s_squared() const {
        return kappa0 * kappa0 - kappa_plus * kappa_plus - kappa_minus * kappa_minus;
    }

    [[nodiscard]] bool is_uniform() const { return kappa_plus == 0.0 && kappa_minus == 0.0; }

    friend bool operator==(const KappaTriplet &, const KappaTriplet &) = default;
};

} // namespace cfloquet
