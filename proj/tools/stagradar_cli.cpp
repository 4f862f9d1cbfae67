// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stagradar/angle_calib.hpp"
#include "stagradar/config_io.hpp"
#include "stagradar/demos.hpp"
#include "stagradar/error.hpp"
#include "stagradar/formats.hpp"
#include "stagradar/pipeline.hpp"
#include "stagradar/scene_sim.hpp"

namespace {

using namespace stagradar;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDemo = 3;

RadarParams load_params(const std::string& path) {
    return path.empty() ? default_radar_params() : params_from_json(load_json(path));
}

ArrayGeometry load_geometry(const std::string& path) {
    return path.empty() ? default_array_geometry() : geometry_from_json(load_json(path));
}

struct SimulateArgs {
    std::string scene, params, geometry, out_a, out_b;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

int run_simulate(const SimulateArgs& a) {
    const auto params = load_params(a.params);
    const auto geometry = load_geometry(a.geometry);
    auto scene = scene_from_json(load_json(a.scene), params.noise_snr_reference);
    if (a.seed) scene.rng_seed = *a.seed;
    const auto [cube_a, cube_b] = simulate_frame_pair(scene, params, geometry, a.threads);
    const auto digest = params_digest(params);
    write_cube(cube_a, digest, a.out_a);
    write_cube(cube_b, digest, a.out_b);
    return kExitOk;
}

struct ProcessArgs {
    std::string in_a, in_b, params, geometry, cal, out_map, out_det;
    bool cartesian = false;
    bool no_crt = false;
    unsigned threads = 1;
};

int run_process(const ProcessArgs& a) {
    const auto params = load_params(a.params);
    const auto geometry = load_geometry(a.geometry);
    std::optional<CalibrationVector> cal;
    if (!a.cal.empty()) cal = calibration_from_json(load_json(a.cal));
    const auto file_a = read_cube(a.in_a);
    const auto file_b = read_cube(a.in_b);
    const auto digest = params_digest(params);
    for (const auto* f : {&file_a, &file_b}) {
        if (f->header.params_digest != digest) {
            std::cerr << "warning: cube frame " << f->header.frame_index
                      << " was produced with different params (digest mismatch)\n";
        }
    }
    PipelineConfig config;
    config.cartesian = a.cartesian;
    config.use_crt = !a.no_crt;
    config.threads = a.threads;
    const auto result = run_pipeline(file_a.cube, file_b.cube, params, geometry, cal, config);
    std::vector<RangeAzimuthMap> maps(result.polar.begin(), result.polar.end());
    if (result.cartesian) maps.insert(maps.end(), result.cartesian->begin(), result.cartesian->end());
    write_maps(maps, a.out_map);
    save_json(detections_to_json(result), a.out_det);
    return kExitOk;
}

struct CalibrateArgs {
    std::string in, params, geometry, out;
    double range = 5.0;
    double azimuth = 0.0;
    double min_snr = 20.0;
};

int run_calibrate(const CalibrateArgs& a) {
    const auto params = load_params(a.params);
    const auto geometry = load_geometry(a.geometry);
    const auto file = read_cube(a.in);
    if (file.header.params_digest != params_digest(params)) {
        std::cerr << "warning: cube was produced with different params (digest mismatch)\n";
    }
    const auto plan = build_frame_plan(params, file.cube.frame_index);
    const auto cal =
        estimate_calibration(file.cube, plan, ReflectorTruth{a.range, a.azimuth}, params, geometry, a.min_snr);
    save_json(calibration_to_json(cal), a.out);
    return kExitOk;
}

int run_export(const std::string& in, const std::string& out, std::size_t index) {
    const auto maps = read_maps(in);
    if (index >= maps.size()) {
        throw Error(ErrorKind::InvalidParameter,
                    "map index " + std::to_string(index) + " out of range (" + std::to_string(maps.size()) + " maps)");
    }
    write_pgm(maps[index], out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stagradar: staggered-PRF TDM-MIMO radar simulation and processing"};
    app.require_subcommand(1);
    int exit_code = kExitOk;

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate a staggered frame pair from a scene");
    simulate->add_option("--scene", sim.scene, "Scene JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--params", sim.params, "Radar params JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--geometry", sim.geometry, "Array geometry JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--seed", sim.seed, "Noise seed (overrides the scene's)");
    simulate->add_option("--out-a", sim.out_a, "Frame-a cube (RDC1)")->required();
    simulate->add_option("--out-b", sim.out_b, "Frame-b cube (RDC1)")->required();
    simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
    simulate->callback([&] { exit_code = run_simulate(sim); });

    ProcessArgs proc;
    auto* process = app.add_subcommand("process", "Run the receive pipeline on a frame pair");
    process->add_option("--in-a", proc.in_a, "Frame-a cube")->required()->check(CLI::ExistingFile);
    process->add_option("--in-b", proc.in_b, "Frame-b cube")->required()->check(CLI::ExistingFile);
    process->add_option("--params", proc.params, "Radar params JSON")->required()->check(CLI::ExistingFile);
    process->add_option("--geometry", proc.geometry, "Array geometry JSON")->required()->check(CLI::ExistingFile);
    process->add_option("--cal", proc.cal, "Calibration JSON")->check(CLI::ExistingFile);
    process->add_option("--out-map", proc.out_map, "Range-azimuth maps (RAM1)")->required();
    process->add_option("--out-det", proc.out_det, "Detections JSON")->required();
    process->add_flag("--cartesian", proc.cartesian, "Also write Cartesian maps");
    process->add_flag("--no-crt", proc.no_crt, "Resolve velocity by overlap phase only");
    process->add_option("--threads", proc.threads, "Worker threads (0 = all cores)");
    process->callback([&] { exit_code = run_process(proc); });

    CalibrateArgs calib;
    auto* calibrate = app.add_subcommand("calibrate", "Estimate channel gains from a corner-reflector cube");
    calibrate->add_option("--in", calib.in, "Cube (RDC1)")->required()->check(CLI::ExistingFile);
    calibrate->add_option("--range", calib.range, "Reflector range, m")->capture_default_str();
    calibrate->add_option("--azimuth", calib.azimuth, "Reflector azimuth, deg")->capture_default_str();
    calibrate->add_option("--params", calib.params, "Radar params JSON (default built-in)")
        ->check(CLI::ExistingFile);
    calibrate->add_option("--geometry", calib.geometry, "Array geometry JSON (default built-in)")
        ->check(CLI::ExistingFile);
    calibrate->add_option("--min-snr", calib.min_snr, "Minimum reflector SNR, dB")->capture_default_str();
    calibrate->add_option("--out", calib.out, "Calibration JSON")->required();
    calibrate->callback([&] { exit_code = run_calibrate(calib); });

    std::string demo_name;
    auto* demo = app.add_subcommand("demo", "Run a self-contained reproduction");
    std::vector<std::string> names;
    for (auto n : demo_names()) names.emplace_back(n);
    demo->add_option("name", demo_name, "Demo name")->required()->check(CLI::IsMember(names));
    demo->callback([&] {
        const auto report = run_demo(demo_name);
        std::cout << report.text();
        exit_code = report.passed() ? kExitOk : kExitDemo;
    });

    std::string pgm_in, pgm_out;
    std::size_t pgm_index = 0;
    auto* export_pgm = app.add_subcommand("export-pgm", "Write one map as a 16-bit PGM");
    export_pgm->add_option("--in", pgm_in, "Maps (RAM1)")->required()->check(CLI::ExistingFile);
    export_pgm->add_option("--out", pgm_out, "PGM output")->required();
    export_pgm->add_option("--index", pgm_index, "Map record index")->capture_default_str();
    export_pgm->callback([&] { exit_code = run_export(pgm_in, pgm_out, pgm_index); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return exit_code;
}
