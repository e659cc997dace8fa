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

#include "cfloquet/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cfloquet/errors.hpp"
#include "cfloquet/pauli_operator.hpp"

namespace cfloquet::sim {
namespace {

constexpr Complex kI{0.0, 1.0};

void check_site(const StateVector &s, int i) {
    if (i < 0 || i >= s.num_qubits()) {
        throw DomainError("gate: site " + std::to_string(i) + " out of range for N=" +
                          std::to_string(s.num_qubits()));
    }
}

void check_pair(const StateVector &s, int i, int j) {
    check_site(s, i);
    check_site(s, j);
    if (i == j) {
        throw DomainError("gate: two-qubit gate needs distinct sites");
    }
}

} // namespace

bool is_two_qubit(const Operation &op) {
    return std::visit(
        [](const auto &o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, TwoQubitGate> || std::is_same_v<T, RzzOp>) {
                return true;
            } else if constexpr (std::is_same_v<T, PauliRotationOp>) {
                return o.pauli.factors.size() == 2;
            } else {
                return false;
            }
        },
        op);
}

void Circuit::append(const Circuit &other) {
    if (num_qubits == 0) {
        num_qubits = other.num_qubits;
    }
    if (other.num_qubits != num_qubits) {
        throw DomainError("circuit append: qubit count mismatch");
    }
    ops.insert(ops.end(), other.ops.begin(), other.ops.end());
}

Circuit Circuit::inverse() const {
    Circuit out{num_qubits, {}};
    out.ops.reserve(ops.size());
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        out.ops.push_back(std::visit(
            [](const auto &o) -> Operation {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, TwoQubitGate>) {
                    return TwoQubitGate{adjoint(o.matrix), o.first, o.second};
                } else if constexpr (std::is_same_v<T, GlobalPhaseOp>) {
                    return GlobalPhaseOp{-o.phi};
                } else {
                    T inv = o;
                    inv.theta = -o.theta;
                    return inv;
                }
            },
            *it));
    }
    return out;
}

std::size_t Circuit::two_qubit_count() const {
    return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), is_two_qubit));
}

Matrix4 mera_gate(double phi, double gamma) {
    const double cp = std::cos(0.5 * phi);
    const double sp = std::sin(0.5 * phi);
    const double cg = std::cos(0.5 * gamma);
    const double sg = std::sin(0.5 * gamma);
    // Pauli matrices in the 2 * b_first + b_second basis.
    // Y(x)Z: <0|Y|1> = -i, <1|Y|0> = i; Z = diag(1, -1).
    Matrix4 yz{};
    yz[0 * 4 + 2] = -kI;  // |00> <- |10>
    yz[1 * 4 + 3] = kI;   // |01> <- |11> : (-i)(-1)
    yz[2 * 4 + 0] = kI;   // |10> <- |00>
    yz[3 * 4 + 1] = -kI;  // |11> <- |01> : (i)(-1)
    Matrix4 zy{};
    zy[0 * 4 + 1] = -kI;
    zy[1 * 4 + 0] = kI;
    zy[2 * 4 + 3] = kI;
    zy[3 * 4 + 2] = -kI;
    Matrix4 xx{};
    xx[0 * 4 + 3] = 1.0;
    xx[1 * 4 + 2] = 1.0;
    xx[2 * 4 + 1] = 1.0;
    xx[3 * 4 + 0] = 1.0;
    Matrix4 out{};
    for (int k = 0; k < 16; ++k) {
        const Complex id = (k % 5 == 0) ? 1.0 : 0.0;
        out[k] = cp * cg * id - kI * sp * cg * yz[k] - kI * cp * sg * zy[k] - sp * sg * xx[k];
    }
    return out;
}

Matrix4 adjoint(const Matrix4 &m) {
    Matrix4 out{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out[r * 4 + c] = std::conj(m[c * 4 + r]);
        }
    }
    return out;
}

double unitarity_error(const Matrix4 &m) {
    double worst = 0.0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            Complex s{};
            for (int k = 0; k < 4; ++k) {
                s += std::conj(m[k * 4 + r]) * m[k * 4 + c];
            }
            worst = std::max(worst, std::abs(s - Complex(r == c ? 1.0 : 0.0)));
        }
    }
    return worst;
}

void apply_gate(StateVector &state, const TwoQubitGate &gate) {
    check_pair(state, gate.first, gate.second);
    const int lo = std::min(gate.first, gate.second);
    const int hi = std::max(gate.first, gate.second);
    const std::size_t bf = std::size_t{1} << gate.first;
    const std::size_t bs = std::size_t{1} << gate.second;
    const std::size_t blo = std::size_t{1} << lo;
    const std::size_t bhi = std::size_t{1} << hi;
    auto a = state.amplitudes();
    const Matrix4 &m = gate.matrix;
    const bool real = std::all_of(m.begin(), m.end(), [](const Complex &z) { return z.imag() == 0.0; });
    auto sweep = [&](auto &&kernel) {
        for (std::size_t outer = 0; outer < a.size(); outer += 2 * bhi) {
            for (std::size_t mid = outer; mid < outer + bhi; mid += 2 * blo) {
                for (std::size_t base = mid; base < mid + blo; ++base) {
                    kernel(a[base], a[base | bs], a[base | bf], a[base | bf | bs]);
                }
            }
        }
    };
    if (real) {
        double r[16];
        for (int k = 0; k < 16; ++k) {
            r[k] = m[static_cast<std::size_t>(k)].real();
        }
        sweep([&r](Complex &r0, Complex &r1, Complex &r2, Complex &r3) {
            const Complex v0 = r0, v1 = r1, v2 = r2, v3 = r3;
            r0 = r[0] * v0 + r[1] * v1 + r[2] * v2 + r[3] * v3;
            r1 = r[4] * v0 + r[5] * v1 + r[6] * v2 + r[7] * v3;
            r2 = r[8] * v0 + r[9] * v1 + r[10] * v2 + r[11] * v3;
            r3 = r[12] * v0 + r[13] * v1 + r[14] * v2 + r[15] * v3;
        });
        return;
    }
    sweep([&m](Complex &r0, Complex &r1, Complex &r2, Complex &r3) {
        const Complex v0 = r0, v1 = r1, v2 = r2, v3 = r3;
        r0 = m[0] * v0 + m[1] * v1 + m[2] * v2 + m[3] * v3;
        r1 = m[4] * v0 + m[5] * v1 + m[6] * v2 + m[7] * v3;
        r2 = m[8] * v0 + m[9] * v1 + m[10] * v2 + m[11] * v3;
        r3 = m[12] * v0 + m[13] * v1 + m[14] * v2 + m[15] * v3;
    });
}

void apply_rzz(StateVector &state, int i, int j, double theta) {
    check_pair(state, i, j);
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const std::size_t blo = std::size_t{1} << std::min(i, j);
    const std::size_t bhi = std::size_t{1} << std::max(i, j);
    auto a = state.amplitudes();
    // Equal bits pick up exp(-i theta/2), opposite bits exp(+i theta/2).
    auto rotate = [c](Complex *p, std::size_t n, double sx) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex v = p[k];
            p[k] = Complex(c * v.real() + sx * v.imag(), c * v.imag() - sx * v.real());
        }
    };
    for (std::size_t outer = 0; outer < a.size(); outer += 2 * bhi) {
        for (std::size_t mid = outer; mid < outer + bhi; mid += 2 * blo) {
            Complex *p = a.data() + mid;
            rotate(p, blo, s);
            rotate(p + blo, blo, -s);
            rotate(p + bhi, blo, -s);
            rotate(p + bhi + blo, blo, s);
        }
    }
}

void apply_rx(StateVector &state, int i, double theta) {
    check_site(state, i);
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const std::size_t bit = std::size_t{1} << i;
    auto a = state.amplitudes();
    for (std::size_t base = 0; base < a.size(); base += 2 * bit) {
        Complex *lo = a.data() + base;
        Complex *hi = lo + bit;
        for (std::size_t k = 0; k < bit; ++k) {
            const Complex v0 = lo[k];
            const Complex v1 = hi[k];
            // c v0 - i s v1, written out to avoid a complex multiply.
            lo[k] = Complex(c * v0.real() + s * v1.imag(), c * v0.imag() - s * v1.real());
            hi[k] = Complex(c * v1.real() + s * v0.imag(), c * v1.imag() - s * v0.real());
        }
    }
}

void apply_pauli_rotation(StateVector &state, const lattice::PauliTerm &pauli, double theta) {
    const PauliMasks m = pauli_masks(pauli, state.num_qubits());
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const Complex iy = std::pow(kI, m.y_count);
    auto a = state.amplitudes();
    if (m.flip_mask == 0) {
        for (std::size_t x = 0; x < a.size(); ++x) {
            const double sign = (std::popcount(x & m.phase_mask) & 1) ? -1.0 : 1.0;
            a[x] *= Complex(c, -s * sign);
        }
        return;
    }
    const int top = std::bit_width(m.flip_mask) - 1;
    for (std::size_t y = 0; y < a.size(); ++y) {
        if (y & (std::size_t{1} << top)) {
            continue;
        }
        const std::size_t yp = y ^ m.flip_mask;
        // (P psi)(y) = i^Y (-1)^{|yp & z|} psi(yp)
        const Complex py = iy * ((std::popcount(yp & m.phase_mask) & 1) ? -1.0 : 1.0);
        const Complex pyp = iy * ((std::popcount(y & m.phase_mask) & 1) ? -1.0 : 1.0);
        const Complex v = a[y];
        const Complex w = a[yp];
        a[y] = c * v - kI * s * py * w;
        a[yp] = c * w - kI * s * pyp * v;
    }
}

void apply_pauli(StateVector &state, const lattice::PauliTerm &pauli) {
    const PauliMasks m = pauli_masks(pauli, state.num_qubits());
    const Complex iy = std::pow(kI, m.y_count);
    auto a = state.amplitudes();
    if (m.flip_mask == 0) {
        for (std::size_t x = 0; x < a.size(); ++x) {
            a[x] *= (std::popcount(x & m.phase_mask) & 1) ? -iy : iy;
        }
        return;
    }
    const int top = std::bit_width(m.flip_mask) - 1;
    for (std::size_t y = 0; y < a.size(); ++y) {
        if (y & (std::size_t{1} << top)) {
            continue;
        }
        const std::size_t yp = y ^ m.flip_mask;
        const Complex py = (std::popcount(yp & m.phase_mask) & 1) ? -iy : iy;
        const Complex pyp = (std::popcount(y & m.phase_mask) & 1) ? -iy : iy;
        const Complex v = a[y];
        a[y] = py * a[yp];
        a[yp] = pyp * v;
    }
}

void apply(StateVector &state, const Operation &op) {
    std::visit(
        [&](const auto &o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, TwoQubitGate>) {
                apply_gate(state, o);
            } else if constexpr (std::is_same_v<T, RzzOp>) {
                apply_rzz(state, o.first, o.second, o.theta);
            } else if constexpr (std::is_same_v<T, RxOp>) {
                apply_rx(state, o.site, o.theta);
            } else if constexpr (std::is_same_v<T, PauliRotationOp>) {
                apply_pauli_rotation(state, o.pauli, o.theta);
            } else {
                const Complex ph = std::polar(1.0, -o.phi);
                for (auto &x : state.amplitudes()) {
                    x *= ph;
                }
            }
        },
        op);
}

void apply_rzz_batch(StateVector &state, std::span<const RzzOp> ops) {
    if (ops.size() < 3) {
        for (const auto &op : ops) {
            apply_rzz(state, op.first, op.second, op.theta);
        }
        return;
    }
    const int N = state.num_qubits();
    const int h = N / 2;
    // Phase angles of bonds inside the low half (sites < h) and inside the
    // high half, tabulated over that half's bits; straddling bonds run alone.
    std::vector<double> lo_angle(std::size_t{1} << h, 0.0);
    std::vector<double> hi_angle(std::size_t{1} << (N - h), 0.0);
    for (const auto &op : ops) {
        check_pair(state, op.first, op.second);
        const bool low = op.first < h && op.second < h;
        const bool high = op.first >= h && op.second >= h;
        if (!low && !high) {
            apply_rzz(state, op.first, op.second, op.theta);
            continue;
        }
        auto &table = low ? lo_angle : hi_angle;
        const int shift = low ? 0 : h;
        const int u = op.first - shift;
        const int v = op.second - shift;
        for (std::size_t x = 0; x < table.size(); ++x) {
            table[x] += (((x >> u) ^ (x >> v)) & 1) ? 0.5 * op.theta : -0.5 * op.theta;
        }
    }
    std::vector<Complex> lo_phase(lo_angle.size());
    for (std::size_t x = 0; x < lo_angle.size(); ++x) {
        lo_phase[x] = std::polar(1.0, lo_angle[x]);
    }
    std::vector<Complex> row(lo_phase.size());
    auto a = state.amplitudes();
    for (std::size_t hi = 0; hi < hi_angle.size(); ++hi) {
        const Complex ph = std::polar(1.0, hi_angle[hi]);
        for (std::size_t x = 0; x < row.size(); ++x) {
            row[x] = lo_phase[x] * ph;
        }
        Complex *p = a.data() + (hi << h);
        for (std::size_t x = 0; x < row.size(); ++x) {
            p[x] *= row[x];
        }
    }
}

namespace {

std::pair<int, int> sites_of(const Operation &op) {
    return std::visit(
        [](const auto &o) -> std::pair<int, int> {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, TwoQubitGate> || std::is_same_v<T, RzzOp>) {
                return {o.first, o.second};
            } else if constexpr (std::is_same_v<T, PauliRotationOp>) {
                return {o.pauli.factors.at(0).site, o.pauli.factors.at(1).site};
            } else {
                return {-1, -1};
            }
        },
        op);
}

// rng may be null when p == 0.
TrajectoryRecord execute(StateVector &state, const Circuit &circuit, double p, Rng *rng) {
    constexpr lattice::Axis kAxes[3] = {lattice::Axis::X, lattice::Axis::Y, lattice::Axis::Z};
    TrajectoryRecord record;
    auto fires = [&] { return p > 0.0 && rng->uniform() < p; };
    auto inject = [&](const Operation &op) {
        // k in 1..15 encodes (first, second) in {I, X, Y, Z}^2 minus II.
        const auto k = static_cast<int>(rng->below(15) + 1);
        const int pa = k / 4;
        const int pb = k % 4;
        const auto [a, b] = sites_of(op);
        lattice::PauliTerm error{1.0, {}};
        if (pa != 0) {
            error.factors.push_back({a, kAxes[pa - 1]});
        }
        if (pb != 0) {
            error.factors.push_back({b, kAxes[pb - 1]});
        }
        apply_pauli(state, error);
        ++record.injected;
        const int yz = (pa >= 2) + (pb >= 2);
        if (yz % 2 == 1) {
            ++record.parity_flips;
        }
    };
    const auto &ops = circuit.ops;
    std::vector<RzzOp> batch;
    for (std::size_t k = 0; k < ops.size();) {
        if (std::holds_alternative<RzzOp>(ops[k])) {
            // Error draws do not depend on the state, so an error-free run of
            // diagonal gates is applied as one sweep before the error lands.
            batch.clear();
            bool hit = false;
            while (k < ops.size() && std::holds_alternative<RzzOp>(ops[k])) {
                batch.push_back(std::get<RzzOp>(ops[k]));
                ++k;
                if (fires()) {
                    hit = true;
                    break;
                }
            }
            apply_rzz_batch(state, batch);
            if (hit) {
                inject(ops[k - 1]);
            }
            continue;
        }
        apply(state, ops[k]);
        if (is_two_qubit(ops[k]) && fires()) {
            inject(ops[k]);
        }
        ++k;
    }
    return record;
}

} // namespace

void run(StateVector &state, const Circuit &circuit) {
    if (circuit.num_qubits != state.num_qubits()) {
        throw DomainError("run: circuit and state qubit counts differ");
    }
    execute(state, circuit, 0.0, nullptr);
}

TrajectoryRecord run_noisy(StateVector &state, const Circuit &circuit, double p, Rng &rng) {
    if (p < 0.0 || p > 1.0) {
        throw DomainError("run_noisy: probability must lie in [0, 1]");
    }
    if (circuit.num_qubits != state.num_qubits()) {
        throw DomainError("run_noisy: circuit and state qubit counts differ");
    }
    return execute(state, circuit, p, &rng);
}

bool draw_clean_pass(const Circuit &circuit, double p, Rng &rng) {
    if (p == 0.0) {
        return true;
    }
    for (const auto &op : circuit.ops) {
        if (is_two_qubit(op) && rng.uniform() < p) {
            return false;
        }
    }
    return true;
}

NoisySampler::NoisySampler(Circuit circuit, double p, std::uint64_t seed)
    : circuit_(std::move(circuit)), p_(p), seed_(seed) {
    if (p < 0.0 || p > 1.0) {
        throw DomainError("NoisySampler: probability must lie in [0, 1]");
    }
}

TrajectoryRecord NoisySampler::run_trajectory(StateVector &state, std::uint64_t index) const {
    Rng rng(derive_seed(seed_, index));
    return run_noisy(state, circuit_, p_, rng);
}

} // namespace cfloquet::sim
