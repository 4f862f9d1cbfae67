// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include "stagradar/scene_sim.hpp"

#include <cmath>
#include <random>
#include <string>

#include "stagradar/error.hpp"
#include "stagradar/parallel.hpp"

namespace stagradar {

void DataCube::check_matches(const RadarParams& params, const FramePlan& plan) const {
    if (n_rx != params.n_rx || n_chirps != plan.chirp_count_total || n_fast != params.adc_samples_per_chirp) {
        throw Error(ErrorKind::DimensionMismatch,
                    "cube dimensions (" + std::to_string(n_rx) + ", " + std::to_string(n_chirps) + ", " +
                        std::to_string(n_fast) + ") do not match radar parameters");
    }
    if (samples.size() != static_cast<std::size_t>(n_rx) * n_chirps * n_fast) {
        throw Error(ErrorKind::DimensionMismatch, "cube sample count does not match its dimensions");
    }
}

double frame_start_time(const RadarParams& params, std::uint32_t frame) {
    double t = 0.0;
    for (std::uint32_t f = 0; f < frame; ++f) t += params.chirps_per_frame() * params.pri(f);
    return t;
}

double noise_sigma(const RadarParams& params, double snr_db) {
    // Unit tone -> |X|^2 = N^2 after the range FFT; white noise of variance s^2 -> N s^2.
    return std::sqrt(params.adc_samples_per_chirp / std::pow(10.0, snr_db / 10.0));
}

namespace {

void check_targets(const Scene& scene, const RadarParams& params, double t_end) {
    const double r_max = params.max_unambiguous_range();
    for (std::size_t i = 0; i < scene.targets.size(); ++i) {
        const auto& tg = scene.targets[i];
        const std::string id = "target " + std::to_string(i);
        if (!(tg.amplitude > 0.0)) throw_invalid(id + ": amplitude must be > 0");
        if (!(tg.azimuth > -90.0 && tg.azimuth < 90.0)) throw_invalid(id + ": azimuth must lie in (-90, 90) deg");
        const double r0 = tg.range;
        const double r1 = tg.range + tg.radial_velocity * t_end;
        if (!(r0 > 0.0 && r0 < r_max && r1 > 0.0 && r1 < r_max)) {
            throw_invalid(id + ": range leaves (0, " + std::to_string(r_max) + ") m during the frame pair");
        }
    }
}

}  // namespace

DataCube simulate_frame(const Scene& scene, const RadarParams& params, const ArrayGeometry& geometry,
                        std::uint32_t frame, unsigned threads) {
    params.validate();
    geometry.validate();
    if (geometry.tx_positions.size() != params.n_tx || geometry.rx_positions.size() != params.n_rx) {
        throw_invalid("array geometry size does not match n_tx / n_rx");
    }
    const FramePlan plan = build_frame_plan(params, frame);
    const double t0 = frame_start_time(params, frame);
    check_targets(scene, params, frame_start_time(params, frame + 1));

    const std::uint32_t n_rx = params.n_rx;
    const std::uint32_t n_fast = params.adc_samples_per_chirp;
    DataCube cube(n_rx, plan.chirp_count_total, n_fast, frame, plan.slot_interval);

    const double lambda = params.wavelength();
    const double dr = range_resolution(params);
    const double sigma = scene.snr_db ? noise_sigma(params, *scene.snr_db) : 0.0;

    parallel_for(plan.chirp_count_total, threads, [&](std::size_t slot_idx) {
        const auto slot = static_cast<std::uint32_t>(slot_idx);
        const double t_s = t0 + plan.slot_start(slot);
        const std::uint32_t tx = plan.tx_order[slot];
        std::vector<std::complex<double>> acc(static_cast<std::size_t>(n_rx) * n_fast);
        std::vector<std::complex<double>> tone(n_fast);

        for (const auto& tg : scene.targets) {
            // Stop-and-hop: range advances between chirps, frozen within one.
            const double r = tg.range + tg.radial_velocity * t_s;
            const double carrier_phase = 4.0 * kPi * r / lambda;
            const double fast_step = 2.0 * kPi * (r / dr) / n_fast;  // f_R / f_s per sample
            for (std::uint32_t n = 0; n < n_fast; ++n) {
                tone[n] = std::polar(tg.amplitude, carrier_phase + fast_step * n);
            }
            const double sin_az = std::sin(tg.azimuth * kPi / 180.0);
            for (std::uint32_t rx = 0; rx < n_rx; ++rx) {
                const double spatial =
                    kPi * (geometry.tx_positions[tx] + geometry.rx_positions[rx]) * sin_az;
                const std::complex<double> steer = std::polar(1.0, spatial);
                auto* row = acc.data() + static_cast<std::size_t>(rx) * n_fast;
                for (std::uint32_t n = 0; n < n_fast; ++n) row[n] += tone[n] * steer;
            }
        }

        if (sigma > 0.0) {
            std::seed_seq seq{static_cast<std::uint32_t>(scene.rng_seed), static_cast<std::uint32_t>(scene.rng_seed >> 32),
                              frame, slot};
            std::mt19937_64 gen(seq);
            std::normal_distribution<double> normal(0.0, sigma / std::sqrt(2.0));
            for (auto& v : acc) {
                const double re = normal(gen);
                const double im = normal(gen);
                v += std::complex<double>(re, im);
            }
        }

        for (std::uint32_t rx = 0; rx < n_rx; ++rx) {
            const auto* row = acc.data() + static_cast<std::size_t>(rx) * n_fast;
            for (std::uint32_t n = 0; n < n_fast; ++n) cube.at(rx, slot, n) = std::complex<float>(row[n]);
        }
    });
    return cube;
}

std::pair<DataCube, DataCube> simulate_frame_pair(const Scene& scene, const RadarParams& params,
                                                  const ArrayGeometry& geometry, unsigned threads) {
    return {simulate_frame(scene, params, geometry, 0, threads), simulate_frame(scene, params, geometry, 1, threads)};
}

DataCube inject_channel_errors(const DataCube& cube, const FramePlan& plan,
                               std::span<const std::complex<double>> gains) {
    const std::size_t expected = static_cast<std::size_t>(cube.n_rx) * plan.n_tx;
    if (gains.size() != expected) {
        throw_invalid("expected " + std::to_string(expected) + " channel gains, got " + std::to_string(gains.size()));
    }
    if (cube.n_chirps != plan.chirp_count_total) {
        throw Error(ErrorKind::DimensionMismatch, "cube chirp count does not match frame plan");
    }
    DataCube out = cube;
    for (std::uint32_t rx = 0; rx < cube.n_rx; ++rx) {
        for (std::uint32_t c = 0; c < cube.n_chirps; ++c) {
            const auto g = gains[static_cast<std::size_t>(plan.tx_order[c]) * cube.n_rx + rx];
            for (std::uint32_t n = 0; n < cube.n_fast; ++n) {
                out.at(rx, c, n) = std::complex<float>(std::complex<double>(cube.at(rx, c, n)) * g);
            }
        }
    }
    return out;
}

}  // namespace stagradar
