// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include <benchmark/benchmark.h>

#include "stagradar/pipeline.hpp"

namespace {

using namespace stagradar;

// Full receive chain on a simulated three-target frame pair.
void BM_Pipeline(benchmark::State& state) {
    auto p = default_radar_params();
    p.adc_samples_per_chirp = static_cast<std::uint32_t>(state.range(0));
    p.chirps_per_tx_per_frame = static_cast<std::uint32_t>(state.range(1));
    const auto g = default_array_geometry();
    Scene scene;
    scene.targets = {{30.0, 6.0, 10.0, 1.0}, {12.0, -14.0, -25.0, 0.7}, {55.0, 0.0, 3.0, 1.0}};
    scene.snr_db = 20.0;
    const auto [a, b] = simulate_frame_pair(scene, p, g);
    PipelineConfig cfg;
    cfg.threads = static_cast<unsigned>(state.range(2));
    for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(a, b, p, g, std::nullopt, cfg));
}
BENCHMARK(BM_Pipeline)->Args({128, 32, 1})->Args({512, 128, 1})->Args({512, 128, 4})->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
    auto p = default_radar_params();
    p.adc_samples_per_chirp = static_cast<std::uint32_t>(state.range(0));
    p.chirps_per_tx_per_frame = static_cast<std::uint32_t>(state.range(1));
    const auto g = default_array_geometry();
    Scene scene;
    scene.targets = {{30.0, 6.0, 10.0, 1.0}};
    scene.snr_db = 20.0;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_frame(scene, p, g, 0));
}
BENCHMARK(BM_Simulate)->Args({128, 32})->Args({512, 128})->Unit(benchmark::kMillisecond);

}  // namespace
