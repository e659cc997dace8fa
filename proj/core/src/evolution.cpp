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

#include "cfloquet/evolution.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "cfloquet/errors.hpp"

namespace cfloquet::sim {
namespace {

Operation rotation_for(const lattice::PauliTerm &term, double theta) {
    const auto &f = term.factors;
    if (f.size() == 2 && f[0].axis == lattice::Axis::Z && f[1].axis == lattice::Axis::Z) {
        return RzzOp{f[0].site, f[1].site, theta};
    }
    if (f.size() == 1 && f[0].axis == lattice::Axis::X) {
        return RxOp{f[0].site, theta};
    }
    return PauliRotationOp{term, theta};
}

void require_commuting(const std::vector<const lattice::PauliTerm *> &layer, const char *name) {
    for (std::size_t a = 0; a < layer.size(); ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            if (!lattice::commutes(*layer[a], *layer[b])) {
                throw UnsupportedStructureError(std::string("trotter: ") + name + " terms '" +
                                                lattice::label(*layer[a]) + "' and '" +
                                                lattice::label(*layer[b]) + "' do not commute");
            }
        }
    }
}

} // namespace

Circuit trotter_circuit(const lattice::HamiltonianSpec &h, double tau, int steps) {
    if (steps < 1) {
        throw DomainError("trotter: steps must be >= 1");
    }
    std::vector<const lattice::PauliTerm *> multi;
    std::vector<const lattice::PauliTerm *> single;
    double identity = 0.0;
    for (const auto &t : h.terms) {
        if (t.factors.empty()) {
            identity += t.coefficient;
        } else if (t.factors.size() == 1) {
            single.push_back(&t);
        } else {
            multi.push_back(&t);
        }
    }
    require_commuting(multi, "multi-site");
    require_commuting(single, "single-site");

    // exp(-i c dt P) is a rotation by theta = 2 c dt.
    const double dt = tau / steps;
    Circuit c{h.N, {}};
    c.ops.reserve(static_cast<std::size_t>(steps) * (2 * multi.size() + single.size()) + 1);
    for (int s = 0; s < steps; ++s) {
        for (const auto *t : multi) {
            c.ops.push_back(rotation_for(*t, t->coefficient * dt));
        }
        for (const auto *t : single) {
            c.ops.push_back(rotation_for(*t, 2.0 * t->coefficient * dt));
        }
        for (const auto *t : multi) {
            c.ops.push_back(rotation_for(*t, t->coefficient * dt));
        }
    }
    if (identity != 0.0) {
        c.ops.push_back(GlobalPhaseOp{identity * tau});
    }
    return c;
}

void trotter_segment(StateVector &state, const lattice::HamiltonianSpec &h, double tau, int steps) {
    if (h.N != state.num_qubits()) {
        throw DomainError("trotter_segment: Hamiltonian and state sizes differ");
    }
    if (tau == 0.0) {
        return;
    }
    run(state, trotter_circuit(h, tau, steps));
}

void exact_evolve(StateVector &state, const PauliOperator &h, double t,
                  const KrylovOptions &options) {
    if (h.num_qubits() != state.num_qubits()) {
        throw DomainError("exact_evolve: Hamiltonian and state sizes differ");
    }
    if (t == 0.0) {
        return;
    }
    const std::size_t dim = state.size();
    const int m_max = static_cast<int>(std::min<std::size_t>(options.max_dimension, dim));
    std::vector<std::vector<Complex>> basis(static_cast<std::size_t>(m_max) + 1,
                                            std::vector<Complex>(dim));
    std::vector<double> alpha(static_cast<std::size_t>(m_max));
    std::vector<double> beta(static_cast<std::size_t>(m_max));

    const double total = std::abs(t);
    const double direction = t > 0.0 ? 1.0 : -1.0;
    double done = 0.0;
    double step = total;
    auto psi = state.amplitudes();

    while (total - done > 1e-15 * total) {
        const double beta0 = state.norm();
        for (std::size_t k = 0; k < dim; ++k) {
            basis[0][k] = psi[k] / beta0;
        }
        int m = 0;
        bool breakdown = false;
        for (; m < m_max; ++m) {
            auto &w = basis[static_cast<std::size_t>(m) + 1];
            h.apply(basis[static_cast<std::size_t>(m)], w);
            // Modified Gram-Schmidt against the whole basis; the newest vector
            // goes first so alpha is the Rayleigh quotient.
            for (int j = m; j >= 0; --j) {
                const auto &vj = basis[static_cast<std::size_t>(j)];
                Complex proj{};
                for (std::size_t k = 0; k < dim; ++k) {
                    proj += std::conj(vj[k]) * w[k];
                }
                if (j == m) {
                    alpha[static_cast<std::size_t>(m)] = proj.real();
                }
                for (std::size_t k = 0; k < dim; ++k) {
                    w[k] -= proj * vj[k];
                }
            }
            double nrm = 0.0;
            for (const auto &x : w) {
                nrm += std::norm(x);
            }
            nrm = std::sqrt(nrm);
            beta[static_cast<std::size_t>(m)] = nrm;
            if (nrm < 1e-13) {
                breakdown = true;
                ++m;
                break;
            }
            for (auto &x : w) {
                x /= nrm;
            }
        }
        const int k_dim = m;
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
        const Eigen::MatrixXd &U = eig.eigenvectors();
        const Eigen::VectorXd &lam = eig.eigenvalues();
        const double residual_beta = breakdown ? 0.0 : beta[static_cast<std::size_t>(k_dim) - 1];

        step = std::min(step, total - done);
        Eigen::VectorXcd y(k_dim);
        for (;;) {
            const double dt = direction * step;
            for (int j = 0; j < k_dim; ++j) {
                Complex s{};
                for (int l = 0; l < k_dim; ++l) {
                    s += U(j, l) * std::polar(1.0, -dt * lam(l)) * U(0, l);
                }
                y(j) = s;
            }
            const double err = residual_beta * std::abs(y(k_dim - 1));
            if (err <= options.tol * step / total) {
                break;
            }
            step *= 0.5;
            if (step < 1e-14 * total) {
                throw NumericalError("exact_evolve: Krylov step collapsed (dimension " +
                                     std::to_string(k_dim) + ", error estimate " +
                                     std::to_string(err) + ")");
            }
        }
        for (std::size_t k = 0; k < dim; ++k) {
            Complex s{};
            for (int j = 0; j < k_dim; ++j) {
                s += y(j) * basis[static_cast<std::size_t>(j)][k];
            }
            psi[k] = beta0 * s;
        }
        done += step;
        step *= 1.5;
    }
}

void exact_evolve(StateVector &state, const lattice::HamiltonianSpec &h, double t, double tol) {
    KrylovOptions options;
    options.tol = tol;
    exact_evolve(state, PauliOperator(h), t, options);
}

} // namespace cfloquet::sim
