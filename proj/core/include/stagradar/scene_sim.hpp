// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "stagradar/radar_config.hpp"

namespace stagradar {

/// Point scatterer. Positive radial velocity means increasing range; positive
/// azimuth points toward increasing element position.
struct PointTarget {
    double range = 0.0;            // m, at the start of the frame pair
    double radial_velocity = 0.0;  // m/s
    double azimuth = 0.0;          // degrees, (-90, 90)
    double amplitude = 1.0;        // linear voltage gain
};

struct Scene {
    std::vector<PointTarget> targets;
    /// Post-range-FFT SNR of a unit-amplitude target; nullopt is noiseless.
    std::optional<double> snr_db;
    std::uint64_t rng_seed = 0;
};

/// One frame of complex baseband samples, indexed (rx, chirp slot, fast time).
struct DataCube {
    std::uint32_t n_rx = 0;
    std::uint32_t n_chirps = 0;
    std::uint32_t n_fast = 0;
    std::uint32_t frame_index = 0;
    double pri = 0.0;
    std::vector<std::complex<float>> samples;

    DataCube() = default;
    DataCube(std::uint32_t rx, std::uint32_t chirps, std::uint32_t fast, std::uint32_t frame, double pri_s)
        : n_rx(rx), n_chirps(chirps), n_fast(fast), frame_index(frame), pri(pri_s),
          samples(static_cast<std::size_t>(rx) * chirps * fast) {}

    [[nodiscard]] std::size_t index(std::uint32_t rx, std::uint32_t chirp, std::uint32_t fast) const {
        return (static_cast<std::size_t>(rx) * n_chirps + chirp) * n_fast + fast;
    }
    std::complex<float>& at(std::uint32_t rx, std::uint32_t chirp, std::uint32_t fast) {
        return samples[index(rx, chirp, fast)];
    }
    [[nodiscard]] const std::complex<float>& at(std::uint32_t rx, std::uint32_t chirp, std::uint32_t fast) const {
        return samples[index(rx, chirp, fast)];
    }
    /// Checks the cube against the dimensions implied by params and plan.
    void check_matches(const RadarParams& params, const FramePlan& plan) const;

    bool operator==(const DataCube&) const = default;
};

/// Start time of `frame` when frames run back to back from t = 0.
double frame_start_time(const RadarParams& params, std::uint32_t frame);

/// Noise standard deviation per complex sample for a post-range-FFT SNR
/// (unit amplitude, coherent gain adc_samples_per_chirp).
double noise_sigma(const RadarParams& params, double snr_db);

/// Synthesizes a single frame; `frame` selects the PRI and the start time.
DataCube simulate_frame(const Scene& scene, const RadarParams& params, const ArrayGeometry& geometry,
                        std::uint32_t frame, unsigned threads = 1);

/// Frames 0 and 1 of a staggered pair with continuous target motion.
std::pair<DataCube, DataCube> simulate_frame_pair(const Scene& scene, const RadarParams& params,
                                                  const ArrayGeometry& geometry, unsigned threads = 1);

/// Multiplies every sample by the gain of its (active TX, RX) pairing.
/// Gains are ordered tx-major: gains[tx * n_rx + rx].
DataCube inject_channel_errors(const DataCube& cube, const FramePlan& plan,
                               std::span<const std::complex<double>> gains);

}  // namespace stagradar
