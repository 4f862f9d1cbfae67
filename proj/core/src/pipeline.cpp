// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include "stagradar/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stagradar/error.hpp"
#include "stagradar/velocity_unfold.hpp"

namespace stagradar {

namespace {

struct FrameWork {
    FramePlan plan;
    RangeDopplerCube rd;
    PowerMap nci;
    DetectionList detections;
};

FrameWork process_frame(const DataCube& cube, const RadarParams& params, const PipelineConfig& config,
                        std::uint32_t looks) {
    FrameWork w;
    w.plan = build_frame_plan(params, cube.frame_index);
    cube.check_matches(params, w.plan);
    if (std::abs(cube.pri - w.plan.slot_interval) > 1e-12 * w.plan.slot_interval) {
        throw_invalid("frame " + std::to_string(cube.frame_index) + " PRI " + std::to_string(cube.pri) +
                      " s does not match params (" + std::to_string(w.plan.slot_interval) + " s)");
    }
    auto rd_config = config.range_doppler;
    rd_config.threads = config.threads;
    w.rd = range_doppler_cube(cube, params, w.plan, rd_config);
    w.nci = noncoherent_integrate(w.rd);
    auto cfar = config.cfar;
    if (cfar.integrated_looks == 0) cfar.integrated_looks = looks;
    w.detections = cfar_ca2d(w.nci, cfar);
    return w;
}

double power_db_at(const PowerMap& m, std::uint32_t d, std::uint32_t r) {
    return 10.0 * std::log10(std::max(m.at(d, r), std::numeric_limits<double>::min()));
}

double refined_range_bin(const PowerMap& m, const Detection& det) {
    if (det.range_bin == 0 || det.range_bin + 1 >= m.n_range) return det.range_bin;
    const std::array<double, 3> v{power_db_at(m, det.doppler_bin, det.range_bin - 1),
                                  power_db_at(m, det.doppler_bin, det.range_bin),
                                  power_db_at(m, det.doppler_bin, det.range_bin + 1)};
    return det.range_bin - 1 + parabolic_peak(v, 1);
}

struct Choice {
    double velocity = 0.0;
    double score = std::numeric_limits<double>::infinity();
    double residual = 0.0;
    bool found = false;
};

void consider(Choice& best, double v, double score, double residual) {
    const bool tie = best.found && std::abs(score - best.score) <= 1e-12 * std::max(1.0, best.score);
    if (!best.found || (score < best.score && !tie) || (tie && std::abs(v) < std::abs(best.velocity))) {
        best = {v, score, residual, true};
    }
}

void mark(VelocityTable& table, std::vector<bool>& owned, const RangeDopplerAxes& axes, std::uint32_t r,
          std::uint32_t d, double v) {
    const auto nd = axes.n_doppler;
    for (int dd = -1; dd <= 1; ++dd) {
        const auto db = static_cast<std::uint32_t>((static_cast<int>(d) + dd + static_cast<int>(nd)) % nd);
        if (!owned[db]) {
            table.per_doppler[db] = v;
            owned[db] = true;
        }
        for (int dr = -1; dr <= 1; ++dr) {
            const int rr = static_cast<int>(r) + dr;
            if (rr < 0 || rr >= static_cast<int>(axes.n_range)) continue;
            table.per_cell.try_emplace({static_cast<std::uint32_t>(rr), db}, v);
        }
    }
}

}  // namespace

PipelineResult run_pipeline(const DataCube& cube_a, const DataCube& cube_b, const RadarParams& params,
                            const ArrayGeometry& geometry, const std::optional<CalibrationVector>& cal,
                            const PipelineConfig& config) {
    params.validate();
    if (cube_b.frame_index != cube_a.frame_index + 1) {
        throw_invalid("frame pair must be consecutive (got " + std::to_string(cube_a.frame_index) + ", " +
                      std::to_string(cube_b.frame_index) + ")");
    }
    const auto varray = build_virtual_array(geometry);
    if (varray.n_tx != params.n_tx || varray.n_rx != params.n_rx) {
        throw Error(ErrorKind::DimensionMismatch, "geometry does not match params TX/RX counts");
    }
    const CalibrationVector calibration = cal ? *cal : CalibrationVector::identity(params.n_tx, params.n_rx);
    if (calibration.n_tx() != params.n_tx || calibration.n_rx() != params.n_rx) {
        throw Error(ErrorKind::DimensionMismatch, "calibration vector does not match params TX/RX counts");
    }

    const std::uint32_t looks = params.n_tx * params.n_rx;
    const std::array<FrameWork, 2> frames{process_frame(cube_a, params, config, looks),
                                          process_frame(cube_b, params, config, looks)};
    const double lambda = params.wavelength();
    const auto& fa = frames[0];
    const auto& fb = frames[1];
    const double tolerance = config.intersect_tolerance.value_or(
        default_intersect_tolerance(fa.rd.axes.velocity_bin_width, fb.rd.axes.velocity_bin_width));
    const bool have_overlap = !varray.overlapped_pairs.empty();

    PipelineResult result;
    result.detections = {fa.detections, fb.detections};
    result.axes = {fa.rd.axes, fb.rd.axes};

    // Strongest first so velocity-table ownership goes to dominant targets.
    std::vector<std::size_t> order(fa.detections.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return fa.detections[x].power_db > fa.detections[y].power_db;
    });

    std::array<VelocityTable, 2> tables{VelocityTable::folded(fa.rd.axes), VelocityTable::folded(fb.rd.axes)};
    std::array<std::vector<bool>, 2> owned{std::vector<bool>(fa.rd.axes.n_doppler, false),
                                           std::vector<bool>(fb.rd.axes.n_doppler, false)};

    for (const std::size_t idx : order) {
        const auto& det = fa.detections[idx];
        const auto snap_a =
            apply_calibration(assemble_snapshot(fa.rd, det.range_bin, det.doppler_bin, varray), calibration);
        const auto set_a = crt_candidates(det.folded_velocity, fa.rd.axes.vmax, params.n_tx, cube_a.frame_index);
        const double range_a = fa.rd.axes.range_of(refined_range_bin(fa.nci, det));

        auto residual = [&](const VirtualSnapshot& s, double v, const FramePlan& plan) {
            return have_overlap ? overlap_residual(s, v, varray, plan, lambda) : 0.0;
        };

        Choice best;
        std::optional<Detection> partner;
        if (config.use_crt) {
            std::vector<const Detection*> gated;
            for (const auto& db : fb.detections) {
                const double range_b = fb.rd.axes.range_of(refined_range_bin(fb.nci, db));
                if (std::abs(range_b - range_a) <= config.range_gate_bins * fa.rd.axes.range_bin_width) {
                    gated.push_back(&db);
                }
            }
            for (const auto* db : gated) {
                const auto snap_b =
                    apply_calibration(assemble_snapshot(fb.rd, db->range_bin, db->doppler_bin, varray), calibration);
                const auto set_b =
                    crt_candidates(db->folded_velocity, fb.rd.axes.vmax, params.n_tx, cube_b.frame_index);
                for (double v : crt_intersect(set_a, set_b, tolerance)) {
                    const double ra = residual(snap_a, v, fa.plan);
                    const double score = ra + residual(snap_b, v, fb.plan);
                    const Choice before = best;
                    consider(best, v, score, ra);
                    if (!before.found || best.velocity != before.velocity || best.score != before.score) {
                        partner = *db;
                    }
                }
            }
            if (!best.found && !gated.empty()) {
                // No intersection: score the union of both alias sets.
                const auto* db = *std::max_element(gated.begin(), gated.end(), [](const auto* x, const auto* y) {
                    return x->power_db < y->power_db;
                });
                const auto snap_b =
                    apply_calibration(assemble_snapshot(fb.rd, db->range_bin, db->doppler_bin, varray), calibration);
                const auto set_b =
                    crt_candidates(db->folded_velocity, fb.rd.axes.vmax, params.n_tx, cube_b.frame_index);
                std::vector<double> pool = set_a.candidates;
                pool.insert(pool.end(), set_b.candidates.begin(), set_b.candidates.end());
                for (double v : pool) {
                    const double ra = residual(snap_a, v, fa.plan);
                    consider(best, v, ra + residual(snap_b, v, fb.plan), ra);
                }
            }
        }
        if (!best.found) {
            if (have_overlap) {
                const auto est = resolve_velocity(snap_a, set_a.candidates, varray, fa.plan, lambda);
                best = {est.velocity, est.residual, est.residual, true};
            } else {
                best = {det.folded_velocity, 0.0, 0.0, true};
            }
        }

        const auto compensated = compensate_tdm_phase(snap_a, best.velocity, fa.plan, lambda);
        const auto spectrum = angle_spectrum(collapse(compensated), config.map.angle_grid);

        TargetReport report;
        report.range = range_a;
        report.velocity = best.velocity;
        report.azimuth = spectrum.peak_azimuth_deg();
        report.power_db = det.power_db;
        report.folded_velocity = det.folded_velocity;
        report.residual = best.residual;
        report.range_bin = det.range_bin;
        report.doppler_bin = det.doppler_bin;
        report.matched = partner.has_value();
        result.targets.push_back(report);

        mark(tables[0], owned[0], fa.rd.axes, det.range_bin, det.doppler_bin, best.velocity);
        if (partner) mark(tables[1], owned[1], fb.rd.axes, partner->range_bin, partner->doppler_bin, best.velocity);
    }

    auto map_config = config.map;
    map_config.threads = config.threads;
    for (std::size_t f = 0; f < 2; ++f) {
        result.polar[f] = range_azimuth_map(frames[f].rd, frames[f].plan, varray, calibration, tables[f], lambda,
                                            map_config);
    }
    if (config.cartesian) {
        result.cartesian = std::array<RangeAzimuthMap, 2>{polar_to_cartesian(result.polar[0], config.grid),
                                                          polar_to_cartesian(result.polar[1], config.grid)};
    }
    return result;
}

nlohmann::json detections_to_json(const PipelineResult& result) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& t : result.targets) {
        list.push_back({{"range_m", t.range},
                        {"velocity_mps", t.velocity},
                        {"azimuth_deg", t.azimuth},
                        {"power_db", t.power_db},
                        {"folded_velocity_mps", t.folded_velocity},
                        {"overlap_residual_rad", t.residual},
                        {"range_bin", t.range_bin},
                        {"doppler_bin", t.doppler_bin},
                        {"crt_matched", t.matched}});
    }
    return {{"detections", list},
            {"cfar_detections", {{"frame_a", result.detections[0].size()}, {"frame_b", result.detections[1].size()}}}};
}

}  // namespace stagradar
