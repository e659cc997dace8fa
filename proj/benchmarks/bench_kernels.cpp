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

#include <benchmark/benchmark.h>

#include <vector>

#include "cfloquet/circuit.hpp"
#include "cfloquet/lattice.hpp"
#include "cfloquet/measurement.hpp"
#include "cfloquet/pauli_operator.hpp"
#include "cfloquet/state_vector.hpp"

using namespace cfloquet;

static void BM_ApplyGate(benchmark::State &state) {
    const int N = static_cast<int>(state.range(0));
    auto psi = sim::initial_plus_state(N);
    const sim::TwoQubitGate gate{sim::mera_gate(0.3, 0.7), 3, 4};
    for (auto _ : state) {
        sim::apply_gate(psi, gate);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << N));
}
BENCHMARK(BM_ApplyGate)->Arg(12)->Arg(16)->Arg(20);

static void BM_RzzBatch(benchmark::State &state) {
    const int N = 16;
    auto psi = sim::initial_plus_state(N);
    std::vector<sim::RzzOp> ops;
    for (int i = 0; i < N; ++i) {
        ops.push_back({i, (i + 1) % N, 0.1 * (i + 1)});
    }
    for (auto _ : state) {
        sim::apply_rzz_batch(psi, ops);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
}
BENCHMARK(BM_RzzBatch);

static void BM_RxLayer(benchmark::State &state) {
    const int N = 16;
    auto psi = sim::initial_plus_state(N);
    for (auto _ : state) {
        for (int i = 0; i < N; ++i) {
            sim::apply_rx(psi, i, 0.05 * (i + 1));
        }
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
}
BENCHMARK(BM_RxLayer);

static void BM_HamiltonianApply(benchmark::State &state) {
    const int N = static_cast<int>(state.range(0));
    const sim::PauliOperator h(lattice::build_tfim(lattice::CouplingProfile{{1.0, 1.2, -0.2}, 2, N}));
    const auto psi = sim::initial_plus_state(N);
    sim::StateVector out(N);
    for (auto _ : state) {
        h.apply(psi.amplitudes(), out.amplitudes());
        benchmark::DoNotOptimize(out.amplitudes().data());
    }
}
BENCHMARK(BM_HamiltonianApply)->Arg(12)->Arg(16);

static void BM_SampleShots(benchmark::State &state) {
    const auto psi = sim::initial_plus_state(16);
    for (auto _ : state) {
        auto batch = sim::sample_measurements(psi, sim::Basis::Z, 1000, 5);
        benchmark::DoNotOptimize(batch.outcomes.data());
    }
}
BENCHMARK(BM_SampleShots);

BENCHMARK_MAIN();
