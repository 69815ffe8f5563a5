// SPDX-License-Identifier: Apache-2.0
//
// cvmdi - key-rate engine for continuous-variable MDI QKD over fading satellite links
// Copyright (C) 2026 cvmdi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include "cvmdi/fading.hpp"
#include "cvmdi/oracle.hpp"
#include "cvmdi/protocol.hpp"

namespace {

using namespace cvmdi;

void BM_point_key_rate(benchmark::State& state) {
    ProtocolParams p;
    for (auto _ : state) benchmark::DoNotOptimize(point_key_rate(p, 0.7, 0.6));
}
BENCHMARK(BM_point_key_rate);

void BM_mdi_conditional_cm(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(mdi_conditional_cm(60.0, 0.7, 0.6, 0.02, 0.02));
}
BENCHMARK(BM_mdi_conditional_cm);

void BM_condition_on_bell(benchmark::State& state) {
    const auto network = oracle::build_network_cm(60.0, 0.7, 0.6, 0.02, 0.02);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::condition_on_bell(network));
}
BENCHMARK(BM_condition_on_bell);

void BM_averaged_key_rate(benchmark::State& state) {
    ProtocolParams p;
    const QuadratureRule rule{static_cast<int>(state.range(0))};
    const double sigma = solve_sigma_b(2.5, 1.0, 1.0, rule);
    const FadingParams leg = weibull_params(1.0, 1.0, sigma);
    for (auto _ : state) benchmark::DoNotOptimize(averaged_key_rate(p, leg, leg, rule, true));
}
BENCHMARK(BM_averaged_key_rate)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_mean_transmissivity(benchmark::State& state) {
    const FadingParams leg = weibull_params(1.0, 1.0, 1.0);
    const QuadratureRule rule{64};
    for (auto _ : state) benchmark::DoNotOptimize(mean_transmissivity(leg, rule));
}
BENCHMARK(BM_mean_transmissivity);

void BM_eb_sampler(benchmark::State& state) {
    ProtocolParams p;
    p.v = 5.05;
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::simulate_eb_scheme(p, 0.5, 0.5, n, 7));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_eb_sampler)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
