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
 * Periodic spin-chain Hamiltonians as explicit lists of Pauli terms: the
 * deformed transverse-field Ising chain, the generalized Ising family with an
 * XX coupling, local energy operators, and the global Z2 parity.
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfloquet/types.hpp"

namespace cfloquet::lattice {

enum class Axis : unsigned char { X, Y, Z };

struct PauliFactor {
    int site = 0;
    Axis axis = Axis::Z;

    friend bool operator==(const PauliFactor &, const PauliFactor &) = default;
};

struct PauliTerm {
    double coefficient = 0.0;
    std::vector<PauliFactor> factors;
};

enum class ModelFamily { DeformedTFIM, GeneralizedIsing };

/// Deformation envelope sampled on a ring of N sites: bond i sits at x = i + 1/2.
struct CouplingProfile {
    KappaTriplet kappa;
    int q = 1;
    int N = 2;

    /// J_{i+1/2} = f(i + 1/2), periodic in i.
    [[nodiscard]] double bond(int i) const;
    /// g_i = (J_{i-1/2} + J_{i+1/2}) / 2.
    [[nodiscard]] double site_field(int i) const;
};

struct HamiltonianSpec {
    int N = 0;
    std::vector<PauliTerm> terms;
    ModelFamily family = ModelFamily::DeformedTFIM;
    std::map<std::string, double> parameters;
};

/// f(x) = kappa0 + kappa+ cos(2 pi q x / N) + kappa- sin(2 pi q x / N).
double envelope(const KappaTriplet &kappa, int q, int N, double x);

/// H = -sum_i J_{i+1/2}/2 Z_i Z_{i+1} - sum_i g_i/2 X_i with periodic wrap.
HamiltonianSpec build_tfim(const CouplingProfile &profile);

/// H = -sum_i [J Z_i Z_{i+1} + g X_i + Gamma X_i X_{i+1}], each coefficient
/// multiplied by the envelope at its bond (J, Gamma) or the averaged site
/// field (g) when a profile is supplied. Zero couplings are omitted.
HamiltonianSpec build_generalized_ising(double J, double g, double Gamma,
                                        const std::optional<CouplingProfile> &profile, int N);

/// h_i = -1/2 Z_i Z_{i+1} - 1/4 (X_i + X_{i+1}); indices taken mod N.
std::vector<PauliTerm> local_energy_op(int i, int N);

/// prod_i X_i.
std::vector<PauliTerm> parity_op(int N);

/// True when the two Pauli strings commute.
bool commutes(const PauliTerm &lhs, const PauliTerm &rhs);

/// Sorts factors within each term and sums coefficients of equal strings,
/// dropping terms whose merged coefficient vanishes below tol.
std::vector<PauliTerm> merge_terms(std::vector<PauliTerm> terms, double tol = 0.0);

/// Multiplies every coefficient by factor.
HamiltonianSpec scaled(HamiltonianSpec h, double factor);

/// Pauli string label such as "Z0 Z1" (factors in stored order).
std::string label(const PauliTerm &term);

/// Line-oriented text: "coeff site:axis [site:axis]" per term, 17 significant
/// digits, preceded by a "# N=<n>" header line.
std::string to_text(const HamiltonianSpec &h);
/// Parses to_text output. Throws ConfigError on malformed input.
HamiltonianSpec from_text(const std::string &text);

} // namespace cfloquet::lattice
