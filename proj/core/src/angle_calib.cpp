// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include "stagradar/angle_calib.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stagradar/error.hpp"
#include "stagradar/fft.hpp"
#include "stagradar/parallel.hpp"

namespace stagradar {

namespace {

double to_db(double power) { return power > 0.0 ? std::max(10.0 * std::log10(power), kMapFloorDb) : kMapFloorDb; }

}  // namespace

CollapsedSnapshot collapse(const VirtualSnapshot& snapshot) {
    CollapsedSnapshot out;
    if (snapshot.entries.empty()) return out;
    const auto [lo, hi] = std::minmax_element(snapshot.entries.begin(), snapshot.entries.end(),
                                              [](const auto& a, const auto& b) { return a.position < b.position; });
    out.first_position = lo->position;
    const std::size_t n = static_cast<std::size_t>(hi->position - lo->position) + 1;
    out.values.assign(n, {});
    std::vector<int> count(n, 0);
    for (const auto& e : snapshot.entries) {
        const auto i = static_cast<std::size_t>(e.position - out.first_position);
        out.values[i] += e.value;
        ++count[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (count[i] > 1) out.values[i] /= static_cast<double>(count[i]);
    }
    return out;
}

CalibrationVector::CalibrationVector(std::uint32_t n_tx, std::uint32_t n_rx, std::vector<std::complex<double>> gains,
                                     double reference_range, double reference_azimuth)
    : n_tx_(n_tx), n_rx_(n_rx), gains_(std::move(gains)), reference_range_(reference_range),
      reference_azimuth_(reference_azimuth) {
    if (gains_.size() != static_cast<std::size_t>(n_tx) * n_rx) {
        throw_invalid("calibration vector needs n_tx * n_rx = " + std::to_string(n_tx * n_rx) + " gains");
    }
    for (const auto& g : gains_) {
        if (g == std::complex<double>{} || !std::isfinite(g.real()) || !std::isfinite(g.imag())) {
            throw_invalid("calibration gains must be finite and non-zero");
        }
    }
}

CalibrationVector CalibrationVector::identity(std::uint32_t n_tx, std::uint32_t n_rx) {
    return {n_tx, n_rx, std::vector<std::complex<double>>(static_cast<std::size_t>(n_tx) * n_rx, 1.0)};
}

CalibrationVector estimate_calibration(const DataCube& cube, const FramePlan& plan, const ReflectorTruth& truth,
                                       const RadarParams& params, const ArrayGeometry& geometry, double min_snr_db) {
    cube.check_matches(params, plan);
    if (geometry.tx_positions.size() != params.n_tx || geometry.rx_positions.size() != params.n_rx) {
        throw_invalid("array geometry size does not match n_tx / n_rx");
    }
    const std::uint32_t n_fast = cube.n_fast;
    const auto window = make_window(WindowKind::Hann, n_fast);
    const auto subs = tdm_demux(cube, plan);

    // Zero-Doppler range profile per (tx, rx): chirp average of the range FFT.
    std::vector<std::vector<std::complex<double>>> profile(static_cast<std::size_t>(params.n_tx) * params.n_rx,
                                                          std::vector<std::complex<double>>(n_fast));
    std::vector<std::complex<double>> buf(n_fast);
    for (const auto& s : subs) {
        for (std::uint32_t rx = 0; rx < s.n_rx; ++rx) {
            auto& prof = profile[static_cast<std::size_t>(s.tx) * params.n_rx + rx];
            for (std::uint32_t c = 0; c < s.n_chirps; ++c) {
                for (std::uint32_t n = 0; n < n_fast; ++n) buf[n] = s.values[s.index(rx, c, n)] * window[n];
                fft::forward(buf);
                for (std::uint32_t n = 0; n < n_fast; ++n) prof[n] += buf[n];
            }
            for (auto& v : prof) v /= static_cast<double>(s.n_chirps);
        }
    }

    std::vector<double> power(n_fast, 0.0);
    for (const auto& prof : profile) {
        for (std::uint32_t n = 0; n < n_fast; ++n) power[n] += std::norm(prof[n]);
    }
    const double dr = range_resolution(params);
    const long expected = std::lround(truth.range / dr);
    std::uint32_t peak = 0;
    double peak_power = -1.0;
    for (long b = expected - 2; b <= expected + 2; ++b) {
        if (b < 0 || b >= static_cast<long>(n_fast)) continue;
        if (power[static_cast<std::size_t>(b)] > peak_power) {
            peak_power = power[static_cast<std::size_t>(b)];
            peak = static_cast<std::uint32_t>(b);
        }
    }
    auto sorted = power;
    std::nth_element(sorted.begin(), sorted.begin() + n_fast / 2, sorted.end());
    const double median = sorted[n_fast / 2];
    const double snr_db = peak_power > 0.0 ? (median > 0.0 ? 10.0 * std::log10(peak_power / median) : 300.0) : -300.0;
    if (!(snr_db >= min_snr_db)) {
        throw Error(ErrorKind::CalibrationFailed, "calibration reflector peak SNR " + std::to_string(snr_db) +
                                                      " dB below the " + std::to_string(min_snr_db) + " dB threshold");
    }

    const double sin_az = std::sin(truth.azimuth * kPi / 180.0);
    std::vector<std::complex<double>> gains(profile.size());
    for (std::uint32_t tx = 0; tx < params.n_tx; ++tx) {
        for (std::uint32_t rx = 0; rx < params.n_rx; ++rx) {
            const std::size_t i = static_cast<std::size_t>(tx) * params.n_rx + rx;
            const auto ideal = std::polar(1.0, kPi * (geometry.tx_positions[tx] + geometry.rx_positions[rx]) * sin_az);
            gains[i] = profile[i][peak] / ideal;
        }
    }
    const auto ref = gains.front();
    if (ref == std::complex<double>{}) throw Error(ErrorKind::CalibrationFailed, "reference channel has zero response");
    for (auto& g : gains) {
        g /= ref;
        if (g == std::complex<double>{}) throw Error(ErrorKind::CalibrationFailed, "a channel has zero response");
    }
    return {params.n_tx, params.n_rx, std::move(gains), truth.range, truth.azimuth};
}

VirtualSnapshot apply_calibration(const VirtualSnapshot& snapshot, const CalibrationVector& cal) {
    if (snapshot.entries.size() != cal.gains().size()) {
        throw_invalid("calibration vector length " + std::to_string(cal.gains().size()) +
                      " does not match snapshot length " + std::to_string(snapshot.entries.size()));
    }
    VirtualSnapshot out = snapshot;
    for (auto& e : out.entries) {
        if (e.tx >= cal.n_tx() || e.rx >= cal.n_rx()) throw_invalid("snapshot source outside calibration vector");
        e.value /= cal.gain(e.tx, e.rx);
    }
    return out;
}

VirtualSnapshot assemble_snapshot(const RangeDopplerCube& cube, std::uint32_t range_bin, std::uint32_t doppler_bin,
                                  const VirtualArray& varray) {
    if (cube.slices.empty() || range_bin >= cube.axes.n_range || doppler_bin >= cube.axes.n_doppler) {
        throw_invalid("snapshot cell (" + std::to_string(range_bin) + ", " + std::to_string(doppler_bin) +
                      ") is outside the range-Doppler cube");
    }
    if (cube.n_tx() != varray.n_tx || cube.slices.front().n_rx != varray.n_rx) {
        throw Error(ErrorKind::DimensionMismatch, "virtual array does not match the range-Doppler cube");
    }
    VirtualSnapshot snap;
    snap.range_bin = range_bin;
    snap.doppler_bin = doppler_bin;
    snap.frame_index = cube.frame_index;
    snap.entries.reserve(varray.source_count());
    for (std::size_t p = 0; p < varray.virtual_positions.size(); ++p) {
        for (const auto& src : varray.element_sources[p]) {
            snap.entries.push_back({src.tx, src.rx, varray.virtual_positions[p],
                                    cube.at(src.tx, src.rx, doppler_bin, range_bin)});
        }
    }
    return snap;
}

double AngleSpectrum::azimuth_deg(std::size_t k) const { return std::asin(sin_axis.at(k)) * 180.0 / kPi; }

double parabolic_peak(std::span<const double> values, std::size_t k) {
    if (k == 0 || k + 1 >= values.size()) return static_cast<double>(k);
    const double a = values[k - 1];
    const double b = values[k];
    const double c = values[k + 1];
    const double denom = a - 2.0 * b + c;
    if (!(denom < 0.0)) return static_cast<double>(k);
    return static_cast<double>(k) + 0.5 * (a - c) / denom;
}

double AngleSpectrum::peak_azimuth_deg() const {
    const auto k = static_cast<std::size_t>(std::max_element(power_db.begin(), power_db.end()) - power_db.begin());
    const double frac = parabolic_peak(power_db, k);
    const double step = sin_axis.size() > 1 ? sin_axis[1] - sin_axis[0] : 0.0;
    const double u = std::clamp(sin_axis.front() + frac * step, -1.0, 1.0);
    return std::asin(u) * 180.0 / kPi;
}

AngleSpectrum angle_spectrum(const CollapsedSnapshot& snapshot, std::size_t grid_size) {
    if (grid_size < snapshot.values.size()) throw_invalid("angle grid smaller than the number of array positions");
    std::vector<std::complex<double>> buf(grid_size);
    fft::forward_padded(snapshot.values, buf);
    AngleSpectrum out;
    out.sin_axis.resize(grid_size);
    out.power_db.resize(grid_size);
    const std::size_t half = grid_size / 2;
    for (std::size_t k = 0; k < grid_size; ++k) {
        out.sin_axis[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(grid_size);
        out.power_db[k] = to_db(std::norm(buf[(k + half) % grid_size]));
    }
    return out;
}

std::pair<std::uint32_t, std::uint32_t> RangeAzimuthMap::argmax() const {
    const auto i = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    return {static_cast<std::uint32_t>(i / cols), static_cast<std::uint32_t>(i % cols)};
}

VelocityTable VelocityTable::folded(const RangeDopplerAxes& axes) {
    VelocityTable t;
    t.per_doppler.resize(axes.n_doppler);
    for (std::uint32_t d = 0; d < axes.n_doppler; ++d) t.per_doppler[d] = axes.velocity_of(d);
    return t;
}

double VelocityTable::velocity_for(std::uint32_t range_bin, std::uint32_t doppler_bin) const {
    if (!per_cell.empty()) {
        const auto it = per_cell.find({range_bin, doppler_bin});
        if (it != per_cell.end()) return it->second;
    }
    return doppler_bin < per_doppler.size() ? per_doppler[doppler_bin] : 0.0;
}

RangeAzimuthMap range_azimuth_map(const RangeDopplerCube& cube, const FramePlan& plan, const VirtualArray& varray,
                                  const CalibrationVector& cal, const VelocityTable& velocities, double wavelength,
                                  const MapConfig& config) {
    if (cube.slices.empty()) throw_invalid("empty range-Doppler cube");
    if (cube.n_tx() != varray.n_tx || cube.slices.front().n_rx != varray.n_rx || cal.n_tx() != varray.n_tx ||
        cal.n_rx() != varray.n_rx) {
        throw Error(ErrorKind::DimensionMismatch, "cube, virtual array and calibration sizes disagree");
    }
    const std::size_t grid = config.angle_grid;
    const int first_pos = varray.virtual_positions.front();
    const auto n_pos = static_cast<std::size_t>(varray.aperture) + 1;
    if (grid < n_pos) throw_invalid("angle grid smaller than the number of array positions");

    // Flattened sources with their static weight 1 / (gain * multiplicity).
    struct Source {
        std::uint32_t tx;
        std::uint32_t rx;
        std::size_t slot;
        std::complex<double> weight;
    };
    std::vector<Source> sources;
    for (std::size_t p = 0; p < varray.virtual_positions.size(); ++p) {
        const auto& srcs = varray.element_sources[p];
        for (const auto& s : srcs) {
            sources.push_back({s.tx, s.rx, static_cast<std::size_t>(varray.virtual_positions[p] - first_pos),
                               1.0 / (cal.gain(s.tx, s.rx) * static_cast<double>(srcs.size()))});
        }
    }
    const std::uint32_t n_doppler = cube.axes.n_doppler;
    const std::uint32_t n_range = cube.axes.n_range;
    const auto rotations = [&](double v) {
        std::vector<std::complex<double>> rot(plan.n_tx);
        for (std::uint32_t tx = 0; tx < plan.n_tx; ++tx) {
            rot[tx] = std::polar(1.0, -phase_migration(v, plan.tx_time_offset(tx), wavelength));
        }
        return rot;
    };
    std::vector<std::vector<std::complex<double>>> doppler_rot(n_doppler);
    for (std::uint32_t d = 0; d < n_doppler; ++d) {
        doppler_rot[d] = rotations(d < velocities.per_doppler.size() ? velocities.per_doppler[d] : 0.0);
    }

    RangeAzimuthMap map;
    map.kind = MapKind::Polar;
    map.rows = n_range;
    map.cols = static_cast<std::uint32_t>(grid);
    map.axis0_origin = 0.0;
    map.axis0_step = cube.axes.range_bin_width;
    map.axis1_origin = -1.0;
    map.axis1_step = 2.0 / static_cast<double>(grid);
    map.values.assign(static_cast<std::size_t>(map.rows) * map.cols, kMapFloorDb);

    // Per-Doppler source weights: static weight times the TX rotation.
    std::vector<std::complex<double>> weights(static_cast<std::size_t>(n_doppler) * sources.size());
    for (std::uint32_t d = 0; d < n_doppler; ++d) {
        for (std::size_t i = 0; i < sources.size(); ++i) {
            weights[d * sources.size() + i] = sources[i].weight * doppler_rot[d][sources[i].tx];
        }
    }

    // Blocks of consecutive range bins keep slice reads contiguous.
    constexpr std::uint32_t kBlock = 16;
    const std::size_t half = grid / 2;
    const std::size_t n_blocks = (n_range + kBlock - 1) / kBlock;
    parallel_for(n_blocks, config.threads, [&](std::size_t b) {
        const auto r0 = static_cast<std::uint32_t>(b * kBlock);
        const std::uint32_t nr = std::min(kBlock, n_range - r0);
        std::vector<std::complex<double>> bufs(static_cast<std::size_t>(nr) * grid);
        std::vector<double> acc(static_cast<std::size_t>(nr) * grid, 0.0);
        for (std::uint32_t d = 0; d < n_doppler; ++d) {
            std::fill(bufs.begin(), bufs.end(), std::complex<double>{});
            const auto* w = &weights[d * sources.size()];
            for (std::size_t i = 0; i < sources.size(); ++i) {
                const auto& s = sources[i];
                const auto* row = &cube.at(s.tx, s.rx, d, r0);
                for (std::uint32_t j = 0; j < nr; ++j) bufs[j * grid + s.slot] += row[j] * w[i];
            }
            if (!velocities.per_cell.empty()) {
                // Cells with their own velocity are rebuilt with their own rotation.
                for (std::uint32_t j = 0; j < nr; ++j) {
                    const auto it = velocities.per_cell.find({r0 + j, d});
                    if (it == velocities.per_cell.end()) continue;
                    const auto rot = rotations(it->second);
                    auto* buf = &bufs[j * grid];
                    std::fill(buf, buf + grid, std::complex<double>{});
                    for (const auto& s : sources) buf[s.slot] += cube.at(s.tx, s.rx, d, r0 + j) * s.weight * rot[s.tx];
                }
            }
            for (std::uint32_t j = 0; j < nr; ++j) {
                std::span<std::complex<double>> buf(&bufs[j * grid], grid);
                fft::forward(buf);
                double* a = &acc[j * grid];
                // Output k holds FFT bin (k + half) mod grid.
                for (std::size_t k = 0; k < grid; ++k) {
                    const double p = std::norm(buf[k + half < grid ? k + half : k + half - grid]);
                    if (config.reduction == DopplerReduction::Max) a[k] = std::max(a[k], p);
                    else a[k] += p;
                }
            }
        }
        for (std::uint32_t j = 0; j < nr; ++j) {
            for (std::size_t k = 0; k < grid; ++k) {
                map.at(r0 + j, static_cast<std::uint32_t>(k)) = to_db(acc[j * grid + k]);
            }
        }
    });
    return map;
}

RangeAzimuthMap polar_to_cartesian(const RangeAzimuthMap& polar, const CartesianGrid& grid) {
    if (polar.kind != MapKind::Polar) throw_invalid("polar_to_cartesian needs a polar map");
    if (!(grid.cell > 0.0)) throw_invalid("Cartesian cell size must be > 0");
    if (!(grid.x_extent > 0.0 && grid.y_extent > 0.0)) throw_invalid("Cartesian extents must be > 0");

    RangeAzimuthMap out;
    out.kind = MapKind::Cartesian;
    out.rows = static_cast<std::uint32_t>(std::lround(grid.y_extent / grid.cell));
    out.cols = static_cast<std::uint32_t>(std::lround(grid.x_extent / grid.cell));
    out.axis0_origin = 0.5 * grid.cell;
    out.axis0_step = grid.cell;
    out.axis1_origin = -0.5 * grid.x_extent + 0.5 * grid.cell;
    out.axis1_step = grid.cell;
    out.floor_db = polar.floor_db;
    out.values.assign(static_cast<std::size_t>(out.rows) * out.cols, polar.floor_db);

    const double max_sin = std::sin(grid.half_fov_deg * kPi / 180.0);
    const auto linear = [&](std::uint32_t row, std::uint32_t col) {
        const double db = polar.at(row, col);
        return db <= polar.floor_db ? 0.0 : std::pow(10.0, db / 10.0);
    };
    for (std::uint32_t iy = 0; iy < out.rows; ++iy) {
        const double y = out.axis0_origin + iy * out.axis0_step;
        for (std::uint32_t ix = 0; ix < out.cols; ++ix) {
            const double x = out.axis1_origin + ix * out.axis1_step;
            const double r = std::hypot(x, y);
            const double u = x / r;  // sin(atan2(x, y))
            if (std::abs(u) > max_sin) continue;
            const double fr = (r - polar.axis0_origin) / polar.axis0_step;
            const double fu = (u - polar.axis1_origin) / polar.axis1_step;
            if (fr < 0.0 || fr > polar.rows - 1.0 || fu < 0.0 || fu > polar.cols - 1.0) continue;
            const auto r0 = std::min(static_cast<std::uint32_t>(fr), polar.rows - 2);
            const auto u0 = std::min(static_cast<std::uint32_t>(fu), polar.cols - 2);
            const double wr = fr - r0;
            const double wu = fu - u0;
            const double p = (1 - wr) * (1 - wu) * linear(r0, u0) + (1 - wr) * wu * linear(r0, u0 + 1) +
                             wr * (1 - wu) * linear(r0 + 1, u0) + wr * wu * linear(r0 + 1, u0 + 1);
            out.at(iy, ix) = to_db(p);
        }
    }
    return out;
}

}  // namespace stagradar
