// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include "stagradar/radar_config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "stagradar/error.hpp"

namespace stagradar {

namespace {

bool is_power_of_two(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

void RadarParams::validate() const {
    if (!(carrier_frequency > 0.0)) throw_invalid("carrier_frequency must be > 0");
    if (!(bandwidth > 0.0)) throw_invalid("bandwidth must be > 0");
    if (!(chirp_duration > 0.0)) throw_invalid("chirp_duration must be > 0");
    if (!is_power_of_two(adc_samples_per_chirp)) throw_invalid("adc_samples_per_chirp must be a power of two");
    if (!is_power_of_two(chirps_per_tx_per_frame)) throw_invalid("chirps_per_tx_per_frame must be a power of two");
    if (n_tx < 1) throw_invalid("n_tx must be >= 1");
    if (n_rx < 1) throw_invalid("n_rx must be >= 1");
    if (!(pri_frame_a >= chirp_duration)) throw_invalid("pri_frame_a must be >= chirp_duration");
    if (!(pri_frame_b >= chirp_duration)) throw_invalid("pri_frame_b must be >= chirp_duration");
    if (pri_frame_a == pri_frame_b) throw_invalid("pri_frame_a and pri_frame_b must differ");
    if (!std::isfinite(noise_snr_reference)) throw_invalid("noise_snr_reference must be finite");
}

double RadarParams::max_unambiguous_range() const {
    return adc_samples_per_chirp * range_resolution(*this);
}

double FramePlan::tx_time_offset(std::uint32_t tx) const {
    const auto it = std::find(tx_order.begin(), tx_order.end(), tx);
    if (it == tx_order.end()) throw_invalid("tx index " + std::to_string(tx) + " not in frame plan");
    return static_cast<double>(it - tx_order.begin()) * slot_interval;
}

void ArrayGeometry::validate() const {
    if (tx_positions.empty() || rx_positions.empty()) {
        throw_invalid("array geometry needs at least one TX and one RX position");
    }
    const auto negative = [](int p) { return p < 0; };
    if (std::any_of(tx_positions.begin(), tx_positions.end(), negative) ||
        std::any_of(rx_positions.begin(), rx_positions.end(), negative)) {
        throw_invalid("array positions must be non-negative");
    }
    const auto has_duplicates = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) != v.end();
    };
    if (has_duplicates(tx_positions) || has_duplicates(rx_positions)) {
        throw_invalid("antenna positions must be distinct");
    }
}

RadarParams default_radar_params() { return RadarParams{}; }

ArrayGeometry default_array_geometry() {
    return ArrayGeometry{
        {0, 4, 8, 12, 16, 20, 24, 28, 32},
        {0, 1, 2, 3, 11, 12, 13, 14, 46, 47, 48, 49, 50, 51, 52, 53},
    };
}

double range_resolution(const RadarParams& params) {
    if (!(params.bandwidth > 0.0)) throw_invalid("bandwidth must be > 0");
    return kSpeedOfLight / (2.0 * params.bandwidth);
}

double folded_vmax(const RadarParams& params, std::uint32_t frame) {
    if (params.n_tx < 1) throw_invalid("n_tx must be >= 1");
    return params.wavelength() / (4.0 * params.n_tx * params.pri(frame));
}

double beat_frequency(double range, double velocity, const RadarParams& params) {
    if (range < 0.0) throw_invalid("range must be >= 0");
    const double f_range = 2.0 * params.bandwidth * range / (params.chirp_duration * kSpeedOfLight);
    const double f_doppler = 2.0 * params.carrier_frequency * velocity / kSpeedOfLight;
    return f_range + f_doppler;
}

double azimuth_resolution_3db(double aperture_half_wavelengths) {
    if (!(aperture_half_wavelengths > 0.0)) throw_invalid("aperture must be > 0");
    // D_x = aperture * lambda / 2, so 1.4 lambda / (pi D_x) = 2.8 / (pi * aperture).
    const double arg = 2.8 / (kPi * aperture_half_wavelengths);
    if (arg > 1.0) throw_invalid("aperture too small for the 3 dB beamwidth formula");
    return 2.0 * std::asin(arg) * 180.0 / kPi;
}

double phase_migration(double velocity, double delay, double wavelength) {
    if (!(wavelength > 0.0)) throw_invalid("wavelength must be > 0");
    return 4.0 * kPi / wavelength * velocity * delay;
}

FramePlan build_frame_plan(const RadarParams& params, std::uint32_t frame) {
    if (params.n_tx < 1) throw_invalid("n_tx must be >= 1");
    if (params.chirps_per_tx_per_frame == 0) throw_invalid("chirps_per_tx_per_frame must be > 0");
    if (params.chirps_per_tx_per_frame < 2) throw_invalid("chirps_per_tx_per_frame must be >= 2");

    FramePlan plan;
    plan.frame_index = frame;
    plan.n_tx = params.n_tx;
    plan.slot_interval = params.pri(frame);
    plan.tx_revisit_interval = params.n_tx * plan.slot_interval;
    plan.chirp_count_total = params.chirps_per_frame();
    plan.tx_order.resize(plan.chirp_count_total);
    for (std::uint32_t slot = 0; slot < plan.chirp_count_total; ++slot) {
        plan.tx_order[slot] = slot % params.n_tx;
    }
    return plan;
}

VirtualArray build_virtual_array(const ArrayGeometry& geometry) {
    geometry.validate();
    VirtualArray va;
    va.n_tx = static_cast<std::uint32_t>(geometry.tx_positions.size());
    va.n_rx = static_cast<std::uint32_t>(geometry.rx_positions.size());

    std::map<int, std::vector<VirtualSource>> by_position;
    for (std::uint32_t t = 0; t < va.n_tx; ++t) {
        for (std::uint32_t r = 0; r < va.n_rx; ++r) {
            by_position[geometry.tx_positions[t] + geometry.rx_positions[r]].push_back({t, r});
        }
    }
    for (auto& [pos, sources] : by_position) {
        va.virtual_positions.push_back(pos);
        for (std::size_t i = 0; i < sources.size(); ++i) {
            for (std::size_t j = i + 1; j < sources.size(); ++j) {
                if (sources[i].tx != sources[j].tx) va.overlapped_pairs.push_back({pos, sources[i], sources[j]});
            }
        }
        va.element_sources.push_back(std::move(sources));
    }
    va.aperture = va.virtual_positions.back() - va.virtual_positions.front();
    return va;
}

}  // namespace stagradar
