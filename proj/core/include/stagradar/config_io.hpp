// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>

#include "stagradar/angle_calib.hpp"
#include "stagradar/formats.hpp"
#include "stagradar/radar_config.hpp"
#include "stagradar/scene_sim.hpp"

namespace stagradar {

// JSON documents use SI units; keys carry the unit as a suffix. Missing keys
// in params take the defaults; unknown keys are rejected.

nlohmann::json params_to_json(const RadarParams& params);
RadarParams params_from_json(const nlohmann::json& j);

nlohmann::json geometry_to_json(const ArrayGeometry& geometry);
ArrayGeometry geometry_from_json(const nlohmann::json& j);

/// "snr_db" may be a number or "noiseless"; when absent the scene falls back
/// to `default_snr_db`.
nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j, std::optional<double> default_snr_db = std::nullopt);

/// Complex gains stored as [re, im] pairs, tx-major.
nlohmann::json calibration_to_json(const CalibrationVector& cal);
CalibrationVector calibration_from_json(const nlohmann::json& j);

/// SHA-256 of the canonical serialization of params.
ParamsDigest params_digest(const RadarParams& params);

nlohmann::json load_json(const std::filesystem::path& path);
void save_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace stagradar
