// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "stagradar/cube_dsp.hpp"
#include "stagradar/radar_config.hpp"
#include "stagradar/scene_sim.hpp"
#include "stagradar/snapshot.hpp"

namespace stagradar {

inline constexpr double kMapFloorDb = -120.0;

/// Per-(tx, rx) complex channel gains, tx-major. Division by these gains
/// removes channel mismatch.
class CalibrationVector {
public:
    CalibrationVector(std::uint32_t n_tx, std::uint32_t n_rx, std::vector<std::complex<double>> gains,
                      double reference_range = 0.0, double reference_azimuth = 0.0);

    static CalibrationVector identity(std::uint32_t n_tx, std::uint32_t n_rx);

    [[nodiscard]] std::uint32_t n_tx() const { return n_tx_; }
    [[nodiscard]] std::uint32_t n_rx() const { return n_rx_; }
    [[nodiscard]] const std::vector<std::complex<double>>& gains() const { return gains_; }
    [[nodiscard]] const std::complex<double>& gain(std::uint32_t tx, std::uint32_t rx) const {
        return gains_[static_cast<std::size_t>(tx) * n_rx_ + rx];
    }
    [[nodiscard]] double reference_range() const { return reference_range_; }
    [[nodiscard]] double reference_azimuth() const { return reference_azimuth_; }

private:
    std::uint32_t n_tx_;
    std::uint32_t n_rx_;
    std::vector<std::complex<double>> gains_;
    double reference_range_;
    double reference_azimuth_;
};

struct ReflectorTruth {
    double range = 5.0;    // m
    double azimuth = 0.0;  // deg
};

/// Boresight-style calibration from a single dominant static reflector.
/// Throws Error(CalibrationFailed) when the reflector peak is less than
/// min_snr_db above the median of the integrated range profile.
CalibrationVector estimate_calibration(const DataCube& cube, const FramePlan& plan, const ReflectorTruth& truth,
                                       const RadarParams& params, const ArrayGeometry& geometry,
                                       double min_snr_db = 20.0);

VirtualSnapshot apply_calibration(const VirtualSnapshot& snapshot, const CalibrationVector& cal);

VirtualSnapshot assemble_snapshot(const RangeDopplerCube& cube, std::uint32_t range_bin, std::uint32_t doppler_bin,
                                  const VirtualArray& varray);

/// Power (dB) on a grid uniform in sin(azimuth) over [-1, 1).
struct AngleSpectrum {
    std::vector<double> sin_axis;
    std::vector<double> power_db;

    [[nodiscard]] double azimuth_deg(std::size_t k) const;
    /// Azimuth of the strongest bin, refined by a parabola through its neighbours.
    [[nodiscard]] double peak_azimuth_deg() const;
};

AngleSpectrum angle_spectrum(const CollapsedSnapshot& snapshot, std::size_t grid_size = 256);

/// Fractional index of a local maximum at k using a parabola through k-1, k, k+1.
double parabolic_peak(std::span<const double> values, std::size_t k);

enum class MapKind : std::uint8_t { Polar = 0, Cartesian = 1 };

/// Power grid in dB. Polar: axis 0 = range (m), axis 1 = sin(azimuth).
/// Cartesian: axis 0 = y (m, boresight), axis 1 = x (m). Axis values are
/// origin + index * step.
struct RangeAzimuthMap {
    MapKind kind = MapKind::Polar;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    double axis0_origin = 0.0;
    double axis0_step = 0.0;
    double axis1_origin = 0.0;
    double axis1_step = 0.0;
    double floor_db = kMapFloorDb;
    std::vector<double> values;

    double& at(std::uint32_t row, std::uint32_t col) { return values[static_cast<std::size_t>(row) * cols + col]; }
    [[nodiscard]] double at(std::uint32_t row, std::uint32_t col) const {
        return values[static_cast<std::size_t>(row) * cols + col];
    }
    /// (row, col) of the largest value.
    [[nodiscard]] std::pair<std::uint32_t, std::uint32_t> argmax() const;

    bool operator==(const RangeAzimuthMap&) const = default;
};

/// Compensation velocity per Doppler bin, with optional per-cell overrides.
struct VelocityTable {
    std::vector<double> per_doppler;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> per_cell;  // (range_bin, doppler_bin)

    /// Folded velocity of every Doppler bin.
    static VelocityTable folded(const RangeDopplerAxes& axes);
    [[nodiscard]] double velocity_for(std::uint32_t range_bin, std::uint32_t doppler_bin) const;
};

enum class DopplerReduction { Max, Sum };

struct MapConfig {
    std::size_t angle_grid = 256;
    DopplerReduction reduction = DopplerReduction::Max;
    unsigned threads = 1;
};

/// Calibrates, compensates and beamforms every range-Doppler cell, then
/// collapses Doppler (max or sum) into a polar range-azimuth map.
RangeAzimuthMap range_azimuth_map(const RangeDopplerCube& cube, const FramePlan& plan, const VirtualArray& varray,
                                  const CalibrationVector& cal, const VelocityTable& velocities, double wavelength,
                                  const MapConfig& config = {});

struct CartesianGrid {
    double x_extent = 150.0;  // m, centred on boresight
    double y_extent = 150.0;  // m, from the radar outward
    double cell = 0.3;        // m
    double half_fov_deg = 35.0;
};

/// Resamples a polar map with bilinear interpolation (linear power) in
/// (range, sin azimuth). Cells outside the FOV or range extent hold the floor.
RangeAzimuthMap polar_to_cartesian(const RangeAzimuthMap& polar, const CartesianGrid& grid = {});

}  // namespace stagradar
