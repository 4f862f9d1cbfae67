// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "stagradar/angle_calib.hpp"
#include "stagradar/config_io.hpp"
#include "stagradar/cube_dsp.hpp"
#include "stagradar/demos.hpp"
#include "stagradar/fft.hpp"
#include "stagradar/formats.hpp"
#include "stagradar/pipeline.hpp"
#include "stagradar/scene_sim.hpp"
#include "stagradar/velocity_unfold.hpp"
#include "support.hpp"

namespace {

using namespace stagradar;
using stagradar::testing::cplx;
using stagradar::testing::small_params;
using stagradar::testing::Stopwatch;

struct Outcome {
    bool passed = true;
    std::vector<std::string> lines;

    void check(bool ok, const std::string& what) {
        passed = passed && ok;
        lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void note(const std::string& what) { lines.push_back("     " + what); }
};

std::string fmt(double v, int precision = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    return os.str();
}

void absorb(Outcome& out, const DemoReport& report) {
    for (const auto& n : report.notes) out.note(n);
    for (const auto& c : report.checks) out.check(c.passed, c.label + ": " + c.detail);
}

const TargetReport* strongest_near(const PipelineResult& result, double range, double gate) {
    const TargetReport* best = nullptr;
    for (const auto& t : result.targets) {
        if (std::abs(t.range - range) > gate) continue;
        if (best == nullptr || t.power_db > best->power_db) best = &t;
    }
    return best;
}

// Range of a target at the middle of frame 0.
double mid_frame_range(const PointTarget& t, const RadarParams& p) {
    return t.range + t.radial_velocity * 0.5 * p.chirps_per_frame() * p.pri(0);
}

Outcome criterion_unfold() {
    Outcome out;
    Stopwatch sw;
    const auto report = demo_unfold();
    const double t = sw.seconds();
    absorb(out, report);
    out.check(t < 1.0, "runtime " + fmt(t, 3) + " s < 1 s");
    return out;
}

Outcome criterion_compensation() {
    Outcome out;
    Stopwatch sw;
    const auto report = demo_compensation();
    const double t = sw.seconds();
    absorb(out, report);
    out.check(t < 5.0, "runtime " + fmt(t, 3) + " s < 5 s");
    return out;
}

Outcome criterion_angle_resolution() {
    Outcome out;
    absorb(out, demo_resolution_angle());
    return out;
}

Outcome criterion_range_resolution() {
    Outcome out;
    absorb(out, demo_resolution_range());
    return out;
}

struct UnfoldStats {
    int trials = 0;
    int hits = 0;
};

UnfoldStats unfold_trials(int scenes, double snr_db, bool use_crt, std::uint64_t seed) {
    const auto p = small_params(64, 32);
    const auto geometry = default_array_geometry();
    const std::uint32_t m = candidate_order(p.n_tx);
    const double vlim = 0.9 * (2 * m + 1) * std::min(folded_vmax(p, 0), folded_vmax(p, 1));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> vel(-vlim, vlim);
    std::uniform_real_distribution<double> rng_range(5.0, 30.0);
    std::uniform_real_distribution<double> az(-40.0, 40.0);

    PipelineConfig config;
    config.use_crt = use_crt;
    config.map.angle_grid = 128;
    UnfoldStats stats;
    for (int i = 0; i < scenes; ++i) {
        Scene scene;
        scene.snr_db = snr_db;
        scene.rng_seed = seed + static_cast<std::uint64_t>(i);
        scene.targets.push_back({rng_range(rng), vel(rng), az(rng), 1.0});
        const auto [a, b] = simulate_frame_pair(scene, p, geometry);
        const auto result = run_pipeline(a, b, p, geometry, std::nullopt, config);
        const auto* det = strongest_near(result, mid_frame_range(scene.targets[0], p), 1.5);
        ++stats.trials;
        const double half_bin = 0.5 * result.axes[0].velocity_bin_width;
        if (det != nullptr && std::abs(det->velocity - scene.targets[0].radial_velocity) <= half_bin) ++stats.hits;
    }
    return stats;
}

Outcome criterion_unfold_end_to_end() {
    Outcome out;
    const auto main = unfold_trials(500, 20.0, true, 1000);
    const double rate = static_cast<double>(main.hits) / main.trials;
    out.check(rate >= 0.99, "CRT + overlap, 20 dB: " + std::to_string(main.hits) + "/" + std::to_string(main.trials) +
                                " within half a Doppler bin (" + fmt(100.0 * rate, 1) + " %, need >= 99 %)");
    const auto low_crt = unfold_trials(100, 0.0, true, 5000);
    const auto low_overlap = unfold_trials(100, 0.0, false, 5000);
    out.note("0 dB, CRT + overlap: " + std::to_string(low_crt.hits) + "/" + std::to_string(low_crt.trials));
    out.note("0 dB, overlap only:  " + std::to_string(low_overlap.hits) + "/" + std::to_string(low_overlap.trials));
    return out;
}

Outcome criterion_localization() {
    Outcome out;
    const auto p = small_params(64, 32);
    const auto geometry = default_array_geometry();
    const double dr = range_resolution(p);
    const double vlim = 0.9 * 9 * std::min(folded_vmax(p, 0), folded_vmax(p, 1));
    const auto axes_a = make_axes(p, build_frame_plan(p, 0));
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> count(1, 5);
    std::uniform_real_distribution<double> rr(4.0, 30.0);
    std::uniform_real_distribution<double> vv(-vlim, vlim);
    std::uniform_real_distribution<double> aa(-40.0, 40.0);

    auto doppler_bin = [&](double v) {
        return fold_velocity(v, axes_a.vmax) / axes_a.velocity_bin_width;
    };
    auto separated = [&](const PointTarget& x, const PointTarget& y) {
        const double range_bins = std::abs(x.range - y.range) / dr;
        double dop = std::abs(doppler_bin(x.radial_velocity) - doppler_bin(y.radial_velocity));
        dop = std::min(dop, axes_a.n_doppler - dop);
        return range_bins >= 2.0 || dop >= 2.0;
    };

    constexpr int kScenes = 150;
    int targets_total = 0;
    int missed = 0;
    int range_bad = 0;
    int az_bad = 0;
    double worst_range = 0.0;
    double worst_az = 0.0;
    for (int s = 0; s < kScenes; ++s) {
        Scene scene;
        scene.snr_db = 20.0;
        scene.rng_seed = 9000 + static_cast<std::uint64_t>(s);
        const int k = count(rng);
        while (static_cast<int>(scene.targets.size()) < k) {
            PointTarget t{rr(rng), vv(rng), aa(rng), 1.0};
            if (std::all_of(scene.targets.begin(), scene.targets.end(),
                            [&](const PointTarget& o) { return separated(t, o); })) {
                scene.targets.push_back(t);
            }
        }
        const auto [a, b] = simulate_frame_pair(scene, p, geometry);
        PipelineConfig config;
        const auto result = run_pipeline(a, b, p, geometry, std::nullopt, config);
        for (const auto& t : scene.targets) {
            ++targets_total;
            const double truth_r = mid_frame_range(t, p);
            const double bin = doppler_bin(t.radial_velocity);
            const TargetReport* match = nullptr;
            double best = INFINITY;
            for (const auto& rep : result.targets) {
                double dop = std::abs(static_cast<double>(rep.doppler_bin) - axes_a.n_doppler / 2.0 - bin);
                dop = std::min(dop, axes_a.n_doppler - dop);
                const double dist = std::abs(rep.range - truth_r) / dr + dop;
                if (dop <= 1.0 && std::abs(rep.range - truth_r) <= 2.0 * dr && dist < best) {
                    best = dist;
                    match = &rep;
                }
            }
            if (match == nullptr) {
                ++missed;
                continue;
            }
            const double er = std::abs(match->range - truth_r);
            const double ea = std::abs(match->azimuth - t.azimuth);
            worst_range = std::max(worst_range, er);
            worst_az = std::max(worst_az, ea);
            if (er > 0.3) ++range_bad;
            if (ea > 0.6) ++az_bad;
        }
    }
    out.check(missed == 0, "detected " + std::to_string(targets_total - missed) + "/" + std::to_string(targets_total) +
                               " targets over " + std::to_string(kScenes) + " scenes");
    out.check(range_bad == 0, "range error <= 0.3 m (worst " + fmt(worst_range, 3) + " m)");
    out.check(az_bad == 0, "azimuth error <= 0.6 deg (worst " + fmt(worst_az, 3) + " deg)");

    // False alarms on noise-only frames.
    const auto pn = small_params(128, 64);
    const auto plan = build_frame_plan(pn, 0);
    CfarConfig cfar;
    cfar.probability_of_false_alarm = 1e-4;
    cfar.integrated_looks = pn.n_tx * pn.n_rx;
    std::size_t cells = 0;
    std::size_t alarms = 0;
    for (std::uint64_t f = 0; cells < 1'000'000; ++f) {
        Scene noise;
        noise.snr_db = 20.0;
        noise.rng_seed = 424242 + f;
        const auto cube = simulate_frame(noise, pn, geometry, 0);
        const auto map = noncoherent_integrate(range_doppler_cube(cube, pn, plan));
        alarms += cfar_ca2d(map, cfar).size();
        cells += map.power.size();
    }
    const double rate = static_cast<double>(alarms) / static_cast<double>(cells);
    const double pfa = cfar.probability_of_false_alarm;
    out.check(rate >= pfa / 3.0 && rate <= 3.0 * pfa, "false-alarm rate " + fmt(rate * 1e4, 3) + "e-4 over " +
                                                          std::to_string(cells) + " cells (configured 1e-4)");
    return out;
}

Outcome criterion_numerics() {
    Outcome out;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    auto random_vec = [&](std::size_t n) {
        std::vector<cplx> v(n);
        for (auto& x : v) x = {g(rng), g(rng)};
        return v;
    };

    double worst_parseval = 0.0;
    double worst_linear = 0.0;
    for (std::size_t n : {16u, 128u, 512u, 1000u, 1152u}) {
        auto x = random_vec(n);
        auto y = random_vec(n);
        double ex = 0.0;
        for (auto v : x) ex += std::norm(v);
        auto fx = x;
        fft::forward(fx);
        double ef = 0.0;
        for (auto v : fx) ef += std::norm(v);
        worst_parseval = std::max(worst_parseval, std::abs(ef / static_cast<double>(n) - ex) / ex);

        const cplx alpha{0.7, -1.3};
        const cplx beta{-2.1, 0.4};
        std::vector<cplx> mix(n);
        for (std::size_t i = 0; i < n; ++i) mix[i] = alpha * x[i] + beta * y[i];
        auto fy = y;
        fft::forward(fy);
        fft::forward(mix);
        double err = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            err = std::max(err, std::abs(mix[i] - (alpha * fx[i] + beta * fy[i])));
            scale = std::max(scale, std::abs(mix[i]));
        }
        worst_linear = std::max(worst_linear, err / scale);
    }
    out.check(worst_parseval <= 1e-9, "Parseval relative error " + fmt(worst_parseval * 1e15, 2) + "e-15");
    out.check(worst_linear <= 1e-12, "FFT linearity relative error " + fmt(worst_linear * 1e15, 2) + "e-15");

    const auto p = default_radar_params();
    const auto plan = build_frame_plan(p, 0);
    const auto varray = build_virtual_array(default_array_geometry());
    VirtualSnapshot snap;
    for (std::uint32_t tx = 0; tx < p.n_tx; ++tx) {
        for (std::uint32_t rx = 0; rx < p.n_rx; ++rx) snap.entries.push_back({tx, rx, 0, {g(rng), g(rng)}});
    }
    double worst_comp = 0.0;
    for (double v : {-33.0, -7.5, 0.0, 4.2, 19.9}) {
        const auto back = compensate_tdm_phase(compensate_tdm_phase(snap, v, plan, p.wavelength()), -v, plan,
                                               p.wavelength());
        for (std::size_t i = 0; i < snap.entries.size(); ++i) {
            worst_comp = std::max(worst_comp, std::abs(back.entries[i].value - snap.entries[i].value) /
                                                  std::abs(snap.entries[i].value));
        }
    }
    out.check(worst_comp <= 1e-12, "compensate/uncompensate identity " + fmt(worst_comp * 1e15, 2) + "e-15");

    // Calibration round trip.
    const auto ps = small_params(128, 16);
    const auto geometry = default_array_geometry();
    const auto plan_s = build_frame_plan(ps, 0);
    std::uniform_real_distribution<double> amp(0.5, 1.5);
    std::uniform_real_distribution<double> ph(-kPi, kPi);
    std::vector<cplx> gains(static_cast<std::size_t>(ps.n_tx) * ps.n_rx);
    for (auto& v : gains) v = std::polar(amp(rng), ph(rng));
    Scene reflector;
    reflector.targets.push_back({5.0, 0.0, 0.0, 1.0});
    const auto cube = inject_channel_errors(simulate_frame(reflector, ps, geometry, 0), plan_s, gains);
    const auto cal = estimate_calibration(cube, plan_s, {}, ps, geometry);
    double worst_cal = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        const auto expected = gains[i] / gains[0];
        worst_cal = std::max(worst_cal, std::abs(cal.gains()[i] - expected) / std::abs(expected));
    }
    out.check(worst_cal <= 1e-6, "calibration round trip relative error " + fmt(worst_cal * 1e9, 2) + "e-9");

    // Simulator superposition (noiseless) and determinism.
    Scene s1;
    s1.targets.push_back({12.0, 3.0, -10.0, 1.0});
    Scene s2;
    s2.targets.push_back({20.0, -8.0, 25.0, 0.5});
    Scene both;
    both.targets = {s1.targets[0], s2.targets[0]};
    const auto c1 = simulate_frame(s1, ps, geometry, 1);
    const auto c2 = simulate_frame(s2, ps, geometry, 1);
    const auto c12 = simulate_frame(both, ps, geometry, 1);
    double worst_sup = 0.0;
    for (std::size_t i = 0; i < c12.samples.size(); ++i) {
        const auto sum = std::complex<double>(c1.samples[i]) + std::complex<double>(c2.samples[i]);
        worst_sup = std::max(worst_sup, std::abs(std::complex<double>(c12.samples[i]) - sum));
    }
    out.check(worst_sup <= 1e-5, "superposition max abs error " + fmt(worst_sup * 1e7, 2) + "e-7 (float32 samples)");

    Scene noisy = both;
    noisy.snr_db = 10.0;
    noisy.rng_seed = 99;
    const bool same_seed = simulate_frame(noisy, ps, geometry, 0) == simulate_frame(noisy, ps, geometry, 0, 3);
    noisy.rng_seed = 100;
    const bool differs = !(simulate_frame(noisy, ps, geometry, 0) == c12);
    out.check(same_seed && differs, "simulator determinism: same seed bit-identical across thread counts");
    return out;
}

Outcome criterion_performance() {
    Outcome out;
    const auto p = default_radar_params();
    const auto geometry = default_array_geometry();
    Scene scene;
    scene.snr_db = 20.0;
    scene.rng_seed = 3;
    scene.targets = {{30.0, 6.0, 10.0, 1.0}, {55.0, -14.0, -20.0, 0.8}, {12.0, 0.0, 0.0, 1.0}};
    const auto [a, b] = simulate_frame_pair(scene, p, geometry, 0);
    const auto dir = std::filesystem::temp_directory_path() / ("stagradar_accept_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto digest = params_digest(p);
    write_cube(a, digest, dir / "f0.rdc");
    write_cube(b, digest, dir / "f1.rdc");

    auto process = [&](unsigned threads) {
        const auto fa = read_cube(dir / "f0.rdc");
        const auto fb = read_cube(dir / "f1.rdc");
        PipelineConfig config;
        config.threads = threads;
        auto result = run_pipeline(fa.cube, fb.cube, p, geometry, std::nullopt, config);
        write_maps(result.polar, dir / "m.ram");
        save_json(detections_to_json(result), dir / "d.json");
        return result;
    };
    Stopwatch sw;
    const auto single = process(1);
    const double t = sw.seconds();
    out.check(t < 5.0, "single-threaded process of a 9x16x128x512 frame pair: " + fmt(t, 2) + " s < 5 s");
    const auto parallel = process(4);
    const bool identical = single.polar[0] == parallel.polar[0] && single.polar[1] == parallel.polar[1] &&
                           detections_to_json(single) == detections_to_json(parallel);
    out.check(identical, "4-thread maps and detections bit-identical to single-threaded");
    std::filesystem::remove_all(dir);
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "CRT worked example", criterion_unfold},
        {2, "TDM phase compensation", criterion_compensation},
        {3, "angular resolution", criterion_angle_resolution},
        {4, "range resolution", criterion_range_resolution},
        {5, "velocity unfolding end to end", criterion_unfold_end_to_end},
        {6, "round-trip localization and false-alarm rate", criterion_localization},
        {7, "numerical invariants", criterion_numerics},
        {8, "performance envelope", criterion_performance},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        Stopwatch sw;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " ("
                  << fmt(sw.seconds(), 2) << " s)\n";
        for (const auto& line : o.lines) std::cout << "        " << line << '\n';
        std::cout.flush();
        if (!o.passed) ++failed;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << '\n';
    return failed == 0 ? 0 : 1;
}
