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

#include "cfloquet/cft_oracle.hpp"
#include "cfloquet/evolution.hpp"
#include "cfloquet/experiment.hpp"
#include "cfloquet/mera.hpp"

using namespace cfloquet;

static void BM_LoschmidtSeries(benchmark::State &state) {
    const auto drive = experiment::cft_drive(experiment::RunConfig{}, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cft::loschmidt_series(drive, 100, 0.5));
    }
}
BENCHMARK(BM_LoschmidtSeries);

static void BM_EnergyDensity(benchmark::State &state) {
    const auto drive = experiment::cft_drive(experiment::RunConfig{}, 1.0);
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cft::energy_density_cft(drive, 16, 0.5, x));
        x = x > 15.0 ? 0.0 : x + 0.37;
    }
}
BENCHMARK(BM_EnergyDensity);

static void BM_TrotterCycle(benchmark::State &state) {
    const experiment::RunConfig rc;
    const auto h0 = experiment::h0_of(rc);
    const auto h1 = experiment::h1_of(rc);
    auto psi = sim::initial_plus_state(rc.N);
    for (auto _ : state) {
        sim::trotter_segment(psi, h0, rc.T0);
        sim::trotter_segment(psi, h1, rc.T1);
    }
}
BENCHMARK(BM_TrotterCycle)->Unit(benchmark::kMillisecond);

static void BM_ExactCycle(benchmark::State &state) {
    const experiment::RunConfig rc;
    const sim::PauliOperator h0(experiment::h0_of(rc));
    const sim::PauliOperator h1(experiment::h1_of(rc));
    auto psi = sim::initial_plus_state(rc.N);
    for (auto _ : state) {
        sim::exact_evolve(psi, h0, rc.T0);
        sim::exact_evolve(psi, h1, rc.T1);
    }
}
BENCHMARK(BM_ExactCycle)->Unit(benchmark::kMillisecond);

static void BM_MeraGradient(benchmark::State &state) {
    const auto layout = mera::build_layout(16);
    const sim::PauliOperator h(experiment::h0_of(experiment::RunConfig{}));
    const mera::MeraParams params(layout.gates.size(), {0.1, 0.2});
    const auto method = state.range(0) == 0 ? mera::GradientMethod::Adjoint : mera::GradientMethod::CentralDifference;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mera::energy_and_gradient(layout, params, h, method));
    }
}
BENCHMARK(BM_MeraGradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
