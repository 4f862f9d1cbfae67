// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "stagradar/radar_config.hpp"
#include "stagradar/scene_sim.hpp"

namespace stagradar {

enum class WindowKind { Rectangular, Hann };

/// Symmetric window of length n (Hann: 0.5 (1 - cos(2 pi i / (n - 1)))).
std::vector<double> make_window(WindowKind kind, std::size_t n);

/// Chirps of one transmitter, indexed (rx, chirp, fast time).
struct SubCube {
    std::uint32_t tx = 0;
    double time_offset = 0.0;  // s, relative to the start of each TDM cycle
    std::uint32_t n_rx = 0;
    std::uint32_t n_chirps = 0;
    std::uint32_t n_fast = 0;
    std::vector<std::complex<double>> values;

    [[nodiscard]] std::size_t index(std::uint32_t rx, std::uint32_t chirp, std::uint32_t fast) const {
        return (static_cast<std::size_t>(rx) * n_chirps + chirp) * n_fast + fast;
    }
};

/// Splits a frame into one sub-cube per TX, preserving chirp order.
std::vector<SubCube> tdm_demux(const DataCube& cube, const FramePlan& plan);

/// Inverse of tdm_demux.
DataCube interleave(std::span<const SubCube> subs, const FramePlan& plan);

/// Range-Doppler spectrum of one TX, indexed (rx, doppler bin, range bin).
/// Doppler is FFT-shifted: bin 0 is -v_max, bin n_doppler / 2 is zero velocity.
struct RangeDopplerSlice {
    std::uint32_t tx = 0;
    std::uint32_t n_rx = 0;
    std::uint32_t n_doppler = 0;
    std::uint32_t n_range = 0;
    std::vector<std::complex<double>> values;

    [[nodiscard]] std::size_t index(std::uint32_t rx, std::uint32_t doppler, std::uint32_t range) const {
        return (static_cast<std::size_t>(rx) * n_doppler + doppler) * n_range + range;
    }
    [[nodiscard]] const std::complex<double>& at(std::uint32_t rx, std::uint32_t doppler, std::uint32_t range) const {
        return values[index(rx, doppler, range)];
    }
};

/// Fast-time FFT then slow-time FFT of a sub-cube. The range FFT is zero-padded
/// to range_fft_size (0 keeps n_fast).
RangeDopplerSlice range_doppler_map(const SubCube& sub, std::span<const double> window_fast,
                                    std::span<const double> window_slow, std::uint32_t range_fft_size = 0);

struct RangeDopplerAxes {
    std::uint32_t n_range = 0;
    std::uint32_t n_doppler = 0;
    double range_bin_width = 0.0;     // m
    double velocity_bin_width = 0.0;  // m/s
    double vmax = 0.0;                // folded v_max of the frame

    [[nodiscard]] double range_of(double bin) const { return bin * range_bin_width; }
    [[nodiscard]] double velocity_of(double bin) const { return (bin - n_doppler / 2.0) * velocity_bin_width; }
};

RangeDopplerAxes make_axes(const RadarParams& params, const FramePlan& plan, std::uint32_t range_fft_size = 0);

struct RangeDopplerCube {
    std::vector<RangeDopplerSlice> slices;  // one per TX, in TX order
    RangeDopplerAxes axes;
    std::uint32_t frame_index = 0;

    [[nodiscard]] std::uint32_t n_tx() const { return static_cast<std::uint32_t>(slices.size()); }
    [[nodiscard]] const std::complex<double>& at(std::uint32_t tx, std::uint32_t rx, std::uint32_t doppler,
                                                 std::uint32_t range) const {
        return slices[tx].at(rx, doppler, range);
    }
};

struct RangeDopplerConfig {
    WindowKind window_fast = WindowKind::Hann;
    WindowKind window_slow = WindowKind::Hann;
    std::uint32_t range_oversample = 1;  // power of two
    unsigned threads = 1;
};

/// Demultiplexes and transforms a whole frame.
RangeDopplerCube range_doppler_cube(const DataCube& cube, const RadarParams& params, const FramePlan& plan,
                                    const RangeDopplerConfig& config = {});

/// Power over (doppler bin, range bin).
struct PowerMap {
    std::uint32_t n_doppler = 0;
    std::uint32_t n_range = 0;
    std::vector<double> power;
    RangeDopplerAxes axes;
    std::uint32_t frame_index = 0;

    PowerMap() = default;
    PowerMap(std::uint32_t doppler, std::uint32_t range)
        : n_doppler(doppler), n_range(range), power(static_cast<std::size_t>(doppler) * range) {}

    double& at(std::uint32_t doppler, std::uint32_t range) {
        return power[static_cast<std::size_t>(doppler) * n_range + range];
    }
    [[nodiscard]] double at(std::uint32_t doppler, std::uint32_t range) const {
        return power[static_cast<std::size_t>(doppler) * n_range + range];
    }
};

/// Sum over all (tx, rx) of |value|^2.
PowerMap noncoherent_integrate(std::span<const RangeDopplerSlice> slices);
PowerMap noncoherent_integrate(const RangeDopplerCube& cube);

struct CfarConfig {
    std::uint32_t training_range = 8;
    std::uint32_t training_doppler = 4;
    std::uint32_t guard_range = 1;
    std::uint32_t guard_doppler = 1;
    double probability_of_false_alarm = 1e-5;
    /// Number of noncoherently summed exponential looks per cell (1 = square-law
    /// single channel). Only the threshold factor depends on it.
    std::uint32_t integrated_looks = 1;

    void validate() const;
};

/// CA-CFAR scale factor for `training_cells` cells. For one look this is
/// N (pfa^(-1/N) - 1); for K looks the exact gamma-ratio tail is inverted.
double cfar_alpha(std::uint32_t training_cells, double pfa, std::uint32_t looks = 1);

struct Detection {
    std::uint32_t range_bin = 0;
    std::uint32_t doppler_bin = 0;
    double folded_velocity = 0.0;  // m/s
    double power_db = 0.0;
    std::uint32_t frame_index = 0;
};

using DetectionList = std::vector<Detection>;

/// 2-D cell-averaging CFAR with local-maximum suppression over the guard
/// window. Doppler wraps circularly; training cells beyond the range edges are
/// dropped and the threshold uses the remaining count.
DetectionList cfar_ca2d(const PowerMap& map, const CfarConfig& config);

}  // namespace stagradar
