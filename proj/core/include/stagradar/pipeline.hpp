// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "stagradar/angle_calib.hpp"
#include "stagradar/cube_dsp.hpp"
#include "stagradar/radar_config.hpp"
#include "stagradar/scene_sim.hpp"

namespace stagradar {

struct PipelineConfig {
    RangeDopplerConfig range_doppler;
    CfarConfig cfar;  // integrated_looks = 0 means n_tx * n_rx
    MapConfig map;
    bool cartesian = false;
    CartesianGrid grid;
    /// false: skip the cross-frame intersection and resolve each frame-a
    /// detection from its own alias set by overlap phase alone.
    bool use_crt = true;
    std::optional<double> intersect_tolerance;  // m/s; default from the bin widths
    double range_gate_bins = 2.0;               // frame-b association gate
    unsigned threads = 1;

    PipelineConfig() { cfar.integrated_looks = 0; }
};

struct TargetReport {
    double range = 0.0;            // m, refined
    double velocity = 0.0;         // m/s, unfolded
    double azimuth = 0.0;          // deg, refined
    double power_db = 0.0;
    double folded_velocity = 0.0;  // m/s, frame a
    double residual = 0.0;         // rad, overlap phase residual of the chosen velocity
    std::uint32_t range_bin = 0;
    std::uint32_t doppler_bin = 0;
    bool matched = false;  // associated with a frame-b detection and a CRT intersection
};

struct PipelineResult {
    std::array<RangeAzimuthMap, 2> polar;
    std::optional<std::array<RangeAzimuthMap, 2>> cartesian;
    std::vector<TargetReport> targets;
    std::array<DetectionList, 2> detections;  // raw CFAR output per frame
    std::array<RangeDopplerAxes, 2> axes;
};

/// demux -> range-Doppler -> NCI -> CFAR per frame -> cross-frame CRT ->
/// overlap-phase resolve -> compensate -> angle -> maps.
/// Throws InvalidParameter when the cubes are not consecutive frames or
/// their PRIs disagree with params.
PipelineResult run_pipeline(const DataCube& cube_a, const DataCube& cube_b, const RadarParams& params,
                            const ArrayGeometry& geometry, const std::optional<CalibrationVector>& cal,
                            const PipelineConfig& config = {});

nlohmann::json detections_to_json(const PipelineResult& result);

}  // namespace stagradar
