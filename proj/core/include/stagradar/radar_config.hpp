// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace stagradar {

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

/// Waveform and timing parameters of a staggered-TDM MIMO FMCW radar.
///
/// Frames alternate between two chirp repetition intervals: even frames use
/// pri_frame_a, odd frames pri_frame_b. Everything is in SI units.
struct RadarParams {
    double carrier_frequency = 77e9;
    double bandwidth = 250e6;
    double chirp_duration = 20e-6;
    std::uint32_t adc_samples_per_chirp = 512;
    std::uint32_t chirps_per_tx_per_frame = 128;
    std::uint32_t n_tx = 9;
    std::uint32_t n_rx = 16;
    double pri_frame_a = 21.0e-6;
    double pri_frame_b = 27.2e-6;
    double noise_snr_reference = 20.0;  // dB, used when a scene does not set one

    /// Throws Error(InvalidParameter) naming the first violated invariant.
    void validate() const;

    [[nodiscard]] double wavelength() const { return kSpeedOfLight / carrier_frequency; }
    [[nodiscard]] double pri(std::uint32_t frame) const { return frame % 2 == 0 ? pri_frame_a : pri_frame_b; }
    [[nodiscard]] std::uint32_t chirps_per_frame() const { return n_tx * chirps_per_tx_per_frame; }
    /// Fast-time sample rate; the ADC window spans the chirp duration.
    [[nodiscard]] double sample_rate() const { return adc_samples_per_chirp / chirp_duration; }
    /// Largest range representable with complex sampling (N range bins).
    [[nodiscard]] double max_unambiguous_range() const;

    bool operator==(const RadarParams&) const = default;
};

/// Round-robin TDM transmit schedule for one frame.
struct FramePlan {
    std::uint32_t frame_index = 0;
    std::vector<std::uint32_t> tx_order;  // active TX per chirp slot
    double slot_interval = 0.0;           // s, one chirp slot
    double tx_revisit_interval = 0.0;     // s, n_tx * slot_interval
    std::uint32_t chirp_count_total = 0;
    std::uint32_t n_tx = 0;

    [[nodiscard]] double slot_start(std::uint32_t slot) const { return slot * slot_interval; }
    /// Offset of the first chirp of `tx` relative to the start of each TDM cycle.
    [[nodiscard]] double tx_time_offset(std::uint32_t tx) const;
};

/// Horizontal antenna positions in units of half a wavelength.
struct ArrayGeometry {
    std::vector<int> tx_positions;
    std::vector<int> rx_positions;

    void validate() const;
    bool operator==(const ArrayGeometry&) const = default;
};

struct VirtualSource {
    std::uint32_t tx = 0;
    std::uint32_t rx = 0;
    bool operator==(const VirtualSource&) const = default;
};

struct OverlappedPair {
    int position = 0;
    VirtualSource first;
    VirtualSource second;
};

/// MIMO virtual array: every (tx, rx) pair sits at tx_pos + rx_pos.
struct VirtualArray {
    std::vector<int> virtual_positions;                  // sorted, unique
    std::vector<std::vector<VirtualSource>> element_sources;  // parallel to virtual_positions
    std::vector<OverlappedPair> overlapped_pairs;
    int aperture = 0;
    std::uint32_t n_tx = 0;
    std::uint32_t n_rx = 0;

    [[nodiscard]] std::size_t source_count() const { return static_cast<std::size_t>(n_tx) * n_rx; }
};

RadarParams default_radar_params();

/// TX {0,4,...,32} and a 16-element RX layout whose pairwise sums tile a
/// complete 86-element half-wavelength ULA.
ArrayGeometry default_array_geometry();

double range_resolution(const RadarParams& params);
double folded_vmax(const RadarParams& params, std::uint32_t frame);
double beat_frequency(double range, double velocity, const RadarParams& params);

/// 3 dB beamwidth in degrees of an aperture given in half-wavelength units.
double azimuth_resolution_3db(double aperture_half_wavelengths);

/// TDM phase migration (4 pi / lambda) v dt, not wrapped.
double phase_migration(double velocity, double delay, double wavelength);

FramePlan build_frame_plan(const RadarParams& params, std::uint32_t frame);
VirtualArray build_virtual_array(const ArrayGeometry& geometry);

}  // namespace stagradar
