// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "stagradar/angle_calib.hpp"
#include "stagradar/cube_dsp.hpp"
#include "stagradar/fft.hpp"

namespace {

using namespace stagradar;

void BM_Fft(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<std::complex<double>> buf(n);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (auto& x : buf) x = {g(rng), g(rng)};
    for (auto _ : state) {
        fft::forward(buf);
        benchmark::DoNotOptimize(buf.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Fft)->Arg(128)->Arg(256)->Arg(512)->Arg(2048);

RadarParams bench_params(std::uint32_t samples, std::uint32_t chirps) {
    auto p = default_radar_params();
    p.adc_samples_per_chirp = samples;
    p.chirps_per_tx_per_frame = chirps;
    return p;
}

void BM_RangeDopplerCube(benchmark::State& state) {
    const auto p = bench_params(static_cast<std::uint32_t>(state.range(0)), static_cast<std::uint32_t>(state.range(1)));
    const auto plan = build_frame_plan(p, 0);
    DataCube cube(p.n_rx, plan.chirp_count_total, p.adc_samples_per_chirp, 0, plan.slot_interval);
    std::mt19937 rng(2);
    std::normal_distribution<float> g;
    for (auto& s : cube.samples) s = {g(rng), g(rng)};
    for (auto _ : state) benchmark::DoNotOptimize(range_doppler_cube(cube, p, plan));
}
BENCHMARK(BM_RangeDopplerCube)->Args({128, 32})->Args({512, 128})->Unit(benchmark::kMillisecond);

void BM_Cfar(benchmark::State& state) {
    const auto nr = static_cast<std::uint32_t>(state.range(0));
    PowerMap m(128, nr);
    m.axes.n_doppler = 128;
    m.axes.n_range = nr;
    std::mt19937_64 rng(3);
    std::gamma_distribution<double> g(144.0, 1.0);
    for (auto& v : m.power) v = g(rng);
    CfarConfig cfg;
    cfg.integrated_looks = 144;
    for (auto _ : state) benchmark::DoNotOptimize(cfar_ca2d(m, cfg));
}
BENCHMARK(BM_Cfar)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_RangeAzimuthMap(benchmark::State& state) {
    const auto p = bench_params(static_cast<std::uint32_t>(state.range(0)), static_cast<std::uint32_t>(state.range(1)));
    const auto plan = build_frame_plan(p, 0);
    const auto va = build_virtual_array(default_array_geometry());
    DataCube cube(p.n_rx, plan.chirp_count_total, p.adc_samples_per_chirp, 0, plan.slot_interval);
    std::mt19937 rng(4);
    std::normal_distribution<float> g;
    for (auto& s : cube.samples) s = {g(rng), g(rng)};
    const auto rd = range_doppler_cube(cube, p, plan);
    const auto cal = CalibrationVector::identity(p.n_tx, p.n_rx);
    const auto table = VelocityTable::folded(rd.axes);
    for (auto _ : state) benchmark::DoNotOptimize(range_azimuth_map(rd, plan, va, cal, table, p.wavelength()));
}
BENCHMARK(BM_RangeAzimuthMap)->Args({128, 32})->Args({512, 128})->Unit(benchmark::kMillisecond);

}  // namespace
