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

#include "cfloquet/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "cfloquet/errors.hpp"
#include "cfloquet/random.hpp"

namespace cfloquet::sim {
namespace {

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
    Complex s{};
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += std::conj(a[k]) * b[k];
    }
    return s;
}

double nrm(std::span<const Complex> a) {
    double s = 0.0;
    for (const auto &x : a) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
    for (std::size_t k = 0; k < x.size(); ++k) {
        y[k] += alpha * x[k];
    }
}

void remove_components(std::span<Complex> w, const std::vector<StateVector> &deflate) {
    for (const auto &d : deflate) {
        axpy(-dot(d.amplitudes(), w), d.amplitudes(), w);
    }
}

} // namespace

void project_parity(std::span<Complex> psi, int sector) {
    if (sector == 0) {
        return;
    }
    const std::size_t all = psi.size() - 1;
    const double s = sector > 0 ? 1.0 : -1.0;
    for (std::size_t x = 0; x < psi.size(); ++x) {
        const std::size_t y = x ^ all;
        if (x < y) {
            const Complex a = psi[x];
            const Complex b = psi[y];
            psi[x] = 0.5 * (a + s * b);
            psi[y] = 0.5 * (b + s * a);
        }
    }
}

Eigenpair lowest_eigenpair(const PauliOperator &h, const EigenOptions &options,
                           const std::vector<StateVector> &deflate) {
    const int N = h.num_qubits();
    const std::size_t dim = std::size_t{1} << N;
    // Cap Lanczos storage near 512 MiB.
    const std::size_t budget = (std::size_t{512} << 20) / (dim * sizeof(Complex));
    const int m_max = static_cast<int>(std::clamp<std::size_t>(
        std::min<std::size_t>(static_cast<std::size_t>(options.krylov_dimension), dim), 4,
        std::max<std::size_t>(budget, 4)));

    auto condition = [&](std::span<Complex> w) {
        project_parity(w, options.parity_sector);
        remove_components(w, deflate);
    };

    std::vector<Complex> start(dim);
    Rng rng(options.seed);
    for (auto &x : start) {
        x = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    }
    condition(start);
    if (nrm(start) < 1e-12) {
        throw NumericalError("lowest_eigenpair: start vector vanishes in the requested subspace");
    }

    std::vector<std::vector<Complex>> V(static_cast<std::size_t>(m_max) + 1,
                                        std::vector<Complex>(dim));
    std::vector<Complex> ritz(dim);
    std::vector<Complex> hv(dim);
    Eigenpair out;
    int matvecs = 0;
    double best_residual = 0.0;

    for (int restart = 0; restart < options.max_restarts; ++restart) {
        const double n0 = nrm(start);
        for (std::size_t k = 0; k < dim; ++k) {
            V[0][k] = start[k] / n0;
        }
        std::vector<double> alpha;
        std::vector<double> beta;
        int m = 0;
        for (; m < m_max; ++m) {
            auto &w = V[static_cast<std::size_t>(m) + 1];
            h.apply(V[static_cast<std::size_t>(m)], w);
            ++matvecs;
            condition(w);
            for (int pass = 0; pass < 2; ++pass) {
                for (int j = m; j >= 0; --j) {
                    const Complex p = dot(V[static_cast<std::size_t>(j)], w);
                    if (pass == 0 && j == m) {
                        alpha.push_back(p.real());
                    }
                    axpy(-p, V[static_cast<std::size_t>(j)], w);
                }
            }
            const double b = nrm(w);
            beta.push_back(b);
            if (b < 1e-12) {
                ++m;
                break;
            }
            for (auto &x : w) {
                x /= b;
            }
        }
        const int k_dim = std::min<int>(m, static_cast<int>(alpha.size()));
        Eigen::VectorXd diag(k_dim);
        Eigen::VectorXd sub(std::max(k_dim - 1, 0));
        for (int j = 0; j < k_dim; ++j) {
            diag(j) = alpha[static_cast<std::size_t>(j)];
            if (j + 1 < k_dim) {
                sub(j) = beta[static_cast<std::size_t>(j)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
        eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const double theta = eig.eigenvalues()(0);
        std::fill(ritz.begin(), ritz.end(), Complex{});
        for (int j = 0; j < k_dim; ++j) {
            axpy(eig.eigenvectors()(j, 0), V[static_cast<std::size_t>(j)], ritz);
        }
        condition(ritz);
        const double rn = nrm(ritz);
        for (auto &x : ritz) {
            x /= rn;
        }
        // Explicit residual of the Ritz pair.
        h.apply(ritz, hv);
        ++matvecs;
        axpy(-theta, ritz, hv);
        condition(hv);
        best_residual = nrm(hv);
        if (best_residual <= options.tol) {
            out.energy = theta;
            out.state = StateVector(N, ritz);
            out.residual = best_residual;
            out.matvecs = matvecs;
            return out;
        }
        start = ritz;
    }
    throw NumericalError("lowest_eigenpair: residual " + std::to_string(best_residual) +
                         " above tolerance " + std::to_string(options.tol) + " after " +
                         std::to_string(options.max_restarts) + " restarts");
}

GroundState ground_state(const PauliOperator &h, const EigenOptions &options) {
    GroundState out;
    Eigenpair first = lowest_eigenpair(h, options);
    out.energy = first.energy;
    out.residual = first.residual;
    out.state = first.state;
    out.ground_space.push_back(first.state);
    out.next_energy = first.energy;
    if (!options.check_degeneracy) {
        return out;
    }
    const double scale = std::max(1.0, std::abs(first.energy));
    for (;;) {
        EigenOptions next = options;
        next.seed = derive_seed(options.seed, out.ground_space.size());
        Eigenpair e = lowest_eigenpair(h, next, out.ground_space);
        out.next_energy = e.energy;
        if (e.energy - first.energy > options.degeneracy_tol * scale) {
            break;
        }
        out.degenerate = true;
        out.ground_space.push_back(e.state);
        if (out.ground_space.size() >= 64) {
            break;
        }
    }
    return out;
}

GroundState ground_state(const lattice::HamiltonianSpec &h, const EigenOptions &options) {
    return ground_state(PauliOperator(h), options);
}

} // namespace cfloquet::sim
