// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include "stagradar/demos.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "stagradar/angle_calib.hpp"
#include "stagradar/cube_dsp.hpp"
#include "stagradar/error.hpp"
#include "stagradar/pipeline.hpp"
#include "stagradar/velocity_unfold.hpp"

namespace stagradar {

namespace {

std::string fmt(double v, int precision = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    return os.str();
}

std::string fmt_list(const std::vector<double>& values, int precision = 2) {
    std::string s = "[";
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ", " : "") + fmt(values[i], precision);
    return s + "]";
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return INFINITY;
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Slot interval giving the requested folded v_max for n_tx transmitters.
double pri_for_vmax(double vmax, const RadarParams& p) { return p.wavelength() / (4.0 * p.n_tx * vmax); }

struct Cell {
    std::uint32_t range_bin = 0;
    std::uint32_t doppler_bin = 0;
};

Cell strongest_cell(const PowerMap& map) {
    const auto it = std::max_element(map.power.begin(), map.power.end());
    const auto idx = static_cast<std::uint32_t>(it - map.power.begin());
    return {idx % map.n_range, idx / map.n_range};
}

}  // namespace

bool DemoReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const DemoCheck& c) { return c.passed; });
}

std::string DemoReport::text() const {
    std::ostringstream os;
    os << "demo " << name << '\n';
    for (const auto& n : notes) os << "  " << n << '\n';
    for (const auto& c : checks) os << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.label << ": " << c.detail << '\n';
    os << "result: " << (passed() ? "PASS" : "FAIL") << '\n';
    return os.str();
}

DemoReport demo_unfold() {
    DemoReport r{"unfold", {}, {}};
    constexpr double v_true = 6.0;
    constexpr double vmax_a = 3.6;
    constexpr double vmax_b = 2.2;
    constexpr std::uint32_t n_tx = 9;

    const double folded_a = fold_velocity(v_true, vmax_a);
    const double folded_b = fold_velocity(v_true, vmax_b);
    r.checks.push_back({"folded velocities", std::abs(folded_a + 1.2) < 1e-9 && std::abs(folded_b - 1.6) < 1e-9,
                        fmt(folded_a, 4) + ", " + fmt(folded_b, 4) + " m/s"});

    const auto set_a = crt_candidates(folded_a, vmax_a, n_tx, 0);
    const auto set_b = crt_candidates(folded_b, vmax_b, n_tx, 1);
    r.notes.push_back("S_a = " + fmt_list(set_a.candidates));
    r.notes.push_back("S_b = " + fmt_list(set_b.candidates));

    const std::vector<double> exact_a{-30.0, -22.8, -15.6, -8.4, -1.2, 6.0, 13.2, 20.4, 27.6};
    const std::vector<double> exact_b{-16.0, -11.6, -7.2, -2.8, 1.6, 6.0, 10.4, 14.8, 19.2};
    const double da = max_abs_diff(set_a.candidates, exact_a);
    const double db = max_abs_diff(set_b.candidates, exact_b);
    r.checks.push_back({"exact candidate sets", da <= 1e-9 && db <= 1e-9,
                        "max |diff| " + fmt(std::max(da, db), 12) + " m/s"});

    const std::vector<double> printed_a{-30.1, -22.9, -15.6, -8.4, -1.2, 6.0, 13.2, 20.5, 27.7};
    const std::vector<double> printed_b{-15.6, -11.3, -7.0, -2.6, 1.7, 6.0, 10.4, 14.7, 19.0};
    const double pa = max_abs_diff(set_a.candidates, printed_a);
    const double pb = max_abs_diff(set_b.candidates, printed_b);
    r.checks.push_back({"reference frame-a list within 0.15 m/s", pa <= 0.15, "max |diff| " + fmt(pa, 2) + " m/s"});
    r.checks.push_back({"reference frame-b list within 0.15 m/s", pb <= 0.15,
                        "max |diff| " + fmt(pb, 2) + " m/s (reference spacing 4.33 m/s vs 2 v_max = 4.4 m/s)"});

    const auto exact_common = crt_intersect(set_a, set_b, 0.3);
    r.checks.push_back({"exact sets intersect to {6.0}",
                        exact_common.size() == 1 && std::abs(exact_common[0] - v_true) < 1e-9,
                        fmt_list(exact_common)});
    CandidateSet pub_a = set_a;
    CandidateSet pub_b = set_b;
    pub_a.candidates = printed_a;
    pub_b.candidates = printed_b;
    const auto printed_common = crt_intersect(pub_a, pub_b, 0.25);
    const bool printed_ok = printed_common.size() == 2 && std::abs(printed_common[0] + 15.6) <= 0.2 &&
                            std::abs(printed_common[1] - 6.0) <= 0.2;
    r.checks.push_back({"reference sets intersect to {-15.6, 6.0}", printed_ok, fmt_list(printed_common)});

    // End to end: simulated staggered frame pair with the same v_max values.
    RadarParams p = default_radar_params();
    p.adc_samples_per_chirp = 128;
    p.chirps_per_tx_per_frame = 64;
    p.n_tx = n_tx;
    p.pri_frame_a = pri_for_vmax(vmax_a, p);
    p.pri_frame_b = pri_for_vmax(vmax_b, p);
    const auto geometry = default_array_geometry();
    Scene scene;
    scene.targets.push_back({20.0, v_true, 10.0, 1.0});
    const auto [cube_a, cube_b] = simulate_frame_pair(scene, p, geometry);
    const auto result = run_pipeline(cube_a, cube_b, p, geometry, std::nullopt);
    if (result.targets.empty()) {
        r.checks.push_back({"pipeline resolves 6.0 m/s", false, "no detection"});
        return r;
    }
    const auto best = *std::max_element(result.targets.begin(), result.targets.end(),
                                        [](const auto& x, const auto& y) { return x.power_db < y.power_db; });
    const double half_bin = 0.5 * result.axes[0].velocity_bin_width;
    r.checks.push_back({"pipeline resolves 6.0 m/s", std::abs(best.velocity - v_true) <= half_bin,
                        fmt(best.velocity) + " m/s (half bin " + fmt(half_bin) + ")"});

    // Overlap-phase choice between the two reference intersections.
    const auto varray = build_virtual_array(geometry);
    const auto plan_a = build_frame_plan(p, 0);
    const auto rd_a = range_doppler_cube(cube_a, p, plan_a);
    const auto snap = assemble_snapshot(rd_a, best.range_bin, best.doppler_bin, varray);
    const std::array<double, 2> shortlist{-15.6, 6.0};
    const auto est = resolve_velocity(snap, shortlist, varray, plan_a, p.wavelength());
    r.checks.push_back({"overlap phase picks 6.0 from {-15.6, 6.0}", est.velocity == 6.0,
                        fmt(est.velocity, 1) + " m/s, residual " + fmt(est.residual, 4) + " rad"});
    return r;
}

DemoReport demo_compensation() {
    DemoReport r{"compensation", {}, {}};
    constexpr double azimuth = 20.0;
    constexpr double v_true = 10.0;
    RadarParams p = default_radar_params();
    p.adc_samples_per_chirp = 128;
    p.chirps_per_tx_per_frame = 32;
    p.pri_frame_a = 50e-6;
    p.pri_frame_b = 60e-6;  // unused; frame 0 only
    const auto geometry = default_array_geometry();
    const auto varray = build_virtual_array(geometry);
    r.notes.push_back("virtual ULA: " + std::to_string(varray.virtual_positions.size()) + " elements, " +
                      std::to_string(varray.overlapped_pairs.size()) + " overlapped pairs");

    Scene scene;
    scene.targets.push_back({10.0, v_true, azimuth, 1.0});
    const auto cube = simulate_frame(scene, p, geometry, 0);
    const auto plan = build_frame_plan(p, 0);
    const auto rd = range_doppler_cube(cube, p, plan);
    const auto cell = strongest_cell(noncoherent_integrate(rd));
    const auto snap = assemble_snapshot(rd, cell.range_bin, cell.doppler_bin, varray);
    constexpr std::size_t grid = 4096;

    const double raw = angle_spectrum(collapse(snap), grid).peak_azimuth_deg();
    const double comp =
        angle_spectrum(collapse(compensate_tdm_phase(snap, v_true, plan, p.wavelength())), grid).peak_azimuth_deg();
    const double folded = rd.axes.velocity_of(cell.doppler_bin);
    const double comp_folded =
        angle_spectrum(collapse(compensate_tdm_phase(snap, folded, plan, p.wavelength())), grid).peak_azimuth_deg();
    r.notes.push_back("folded velocity " + fmt(folded) + " m/s; peak when compensating with it: " +
                      fmt(comp_folded, 2) + " deg");
    r.checks.push_back({"uncompensated peak off by > 2 deg", std::abs(raw - azimuth) > 2.0, fmt(raw, 2) + " deg"});
    r.checks.push_back({"compensated peak within 0.3 deg", std::abs(comp - azimuth) <= 0.3, fmt(comp, 3) + " deg"});
    return r;
}

DemoReport demo_resolution_angle() {
    DemoReport r{"resolution-angle", {}, {}};
    const double formula = azimuth_resolution_3db(85.0);
    r.checks.push_back({"3 dB beamwidth of an 85 half-wavelength aperture", std::abs(formula - 1.2016) <= 0.01,
                        fmt(formula, 4) + " deg (reference ~1.2 deg)"});

    RadarParams p = default_radar_params();
    p.adc_samples_per_chirp = 128;
    p.chirps_per_tx_per_frame = 16;
    const auto geometry = default_array_geometry();
    const auto varray = build_virtual_array(geometry);
    Scene scene;
    scene.targets.push_back({5.0, 0.0, -0.8, 1.0});
    scene.targets.push_back({5.0, 0.0, 0.8, 1.0});
    const auto cube = simulate_frame(scene, p, geometry, 0);
    const auto plan = build_frame_plan(p, 0);
    const auto rd = range_doppler_cube(cube, p, plan);
    const auto cell = strongest_cell(noncoherent_integrate(rd));
    const auto spectrum = angle_spectrum(collapse(assemble_snapshot(rd, cell.range_bin, cell.doppler_bin, varray)),
                                         8192);

    // Local maxima near each reflector and the minimum between them.
    auto index_of = [&](double az) {
        const double u = std::sin(az * kPi / 180.0);
        return static_cast<std::size_t>(std::lround((u + 1.0) * spectrum.power_db.size() / 2.0));
    };
    const auto lo = index_of(-1.5);
    const auto mid = index_of(0.0);
    const auto hi = index_of(1.5);
    const auto& pw = spectrum.power_db;
    const auto left = std::max_element(pw.begin() + lo, pw.begin() + mid) - pw.begin();
    const auto right = std::max_element(pw.begin() + mid, pw.begin() + hi + 1) - pw.begin();
    const double saddle = *std::min_element(pw.begin() + left, pw.begin() + right + 1);
    const bool two_maxima = left > static_cast<long>(lo) && right < static_cast<long>(hi) && left < right &&
                            pw[left] > pw[left - 1] && pw[left] >= pw[left + 1] && pw[right] >= pw[right - 1] &&
                            pw[right] > pw[right + 1];
    const double depth = std::min(pw[left], pw[right]) - saddle;
    r.checks.push_back({"two local maxima", two_maxima,
                        fmt(spectrum.azimuth_deg(left), 2) + " / " + fmt(spectrum.azimuth_deg(right), 2) + " deg"});
    r.checks.push_back({"saddle >= 3 dB", depth >= 3.0, fmt(depth, 2) + " dB"});
    return r;
}

DemoReport demo_resolution_range() {
    DemoReport r{"resolution-range", {}, {}};
    RadarParams p = default_radar_params();
    p.adc_samples_per_chirp = 128;
    p.chirps_per_tx_per_frame = 16;
    r.notes.push_back("bandwidth " + fmt(p.bandwidth / 1e6, 0) + " MHz, range resolution " +
                      fmt(range_resolution(p), 3) + " m; rectangular window, 8x zero-padded range FFT");
    const auto geometry = default_array_geometry();
    Scene scene;
    scene.targets.push_back({5.0, 0.0, 0.0, 1.0});
    scene.targets.push_back({5.6, 0.0, 0.0, 1.0});
    const auto cube = simulate_frame(scene, p, geometry, 0);
    const auto plan = build_frame_plan(p, 0);
    RangeDopplerConfig config;
    config.window_fast = WindowKind::Rectangular;
    config.range_oversample = 8;
    const auto rd = range_doppler_cube(cube, p, plan, config);
    const auto nci = noncoherent_integrate(rd);
    const auto d0 = nci.n_doppler / 2;

    std::vector<double> profile(nci.n_range);
    for (std::uint32_t k = 0; k < nci.n_range; ++k) profile[k] = 10.0 * std::log10(nci.at(d0, k));
    auto bin_of = [&](double range) { return static_cast<std::size_t>(std::lround(range / rd.axes.range_bin_width)); };
    std::vector<std::size_t> maxima;
    for (std::size_t k = bin_of(4.5); k <= bin_of(6.1); ++k) {
        if (profile[k] > profile[k - 1] && profile[k] >= profile[k + 1]) maxima.push_back(k);
    }
    std::sort(maxima.begin(), maxima.end(), [&](auto x, auto y) { return profile[x] > profile[y]; });
    if (maxima.size() > 2) maxima.resize(2);
    std::sort(maxima.begin(), maxima.end());
    const bool near = maxima.size() == 2 && std::abs(rd.axes.range_of(maxima[0]) - 5.0) <= 0.15 &&
                      std::abs(rd.axes.range_of(maxima[1]) - 5.6) <= 0.15;
    std::string where;
    for (auto k : maxima) where += fmt(rd.axes.range_of(k), 3) + " m ";
    r.checks.push_back({"two range maxima near 5.0 and 5.6 m", near, where});
    if (maxima.size() == 2) {
        const double dip =
            std::min(profile[maxima[0]], profile[maxima[1]]) -
            *std::min_element(profile.begin() + maxima[0], profile.begin() + maxima[1] + 1);
        r.checks.push_back({"dip between maxima", dip > 0.0, fmt(dip, 2) + " dB"});
    }
    return r;
}

std::vector<std::string_view> demo_names() { return {"unfold", "resolution-angle", "resolution-range", "compensation"}; }

DemoReport run_demo(std::string_view name) {
    if (name == "unfold") return demo_unfold();
    if (name == "resolution-angle") return demo_resolution_angle();
    if (name == "resolution-range") return demo_resolution_range();
    if (name == "compensation") return demo_compensation();
    throw_invalid("unknown demo '" + std::string(name) + "'");
}

}  // namespace stagradar
