// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include "stagradar/config_io.hpp"

#include <openssl/sha.h>

#include <fstream>
#include <set>
#include <string>

#include "stagradar/error.hpp"

namespace stagradar {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, what + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) throw Error(ErrorKind::Parse, "unknown key '" + key + "' in " + what);
    }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
T read_req(const json& j, const char* key, const std::string& what) {
    if (!j.contains(key)) throw Error(ErrorKind::Parse, std::string("missing key '") + key + "' in " + what);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

json params_to_json(const RadarParams& p) {
    return json{
        {"carrier_frequency_hz", p.carrier_frequency},
        {"bandwidth_hz", p.bandwidth},
        {"chirp_duration_s", p.chirp_duration},
        {"adc_samples_per_chirp", p.adc_samples_per_chirp},
        {"chirps_per_tx_per_frame", p.chirps_per_tx_per_frame},
        {"n_tx", p.n_tx},
        {"n_rx", p.n_rx},
        {"pri_frame_a_s", p.pri_frame_a},
        {"pri_frame_b_s", p.pri_frame_b},
        {"noise_snr_reference_db", p.noise_snr_reference},
    };
}

RadarParams params_from_json(const json& j) {
    reject_unknown(j,
                   {"carrier_frequency_hz", "bandwidth_hz", "chirp_duration_s", "adc_samples_per_chirp",
                    "chirps_per_tx_per_frame", "n_tx", "n_rx", "pri_frame_a_s", "pri_frame_b_s",
                    "noise_snr_reference_db"},
                   "radar params");
    RadarParams p;
    read_opt(j, "carrier_frequency_hz", p.carrier_frequency);
    read_opt(j, "bandwidth_hz", p.bandwidth);
    read_opt(j, "chirp_duration_s", p.chirp_duration);
    read_opt(j, "adc_samples_per_chirp", p.adc_samples_per_chirp);
    read_opt(j, "chirps_per_tx_per_frame", p.chirps_per_tx_per_frame);
    read_opt(j, "n_tx", p.n_tx);
    read_opt(j, "n_rx", p.n_rx);
    read_opt(j, "pri_frame_a_s", p.pri_frame_a);
    read_opt(j, "pri_frame_b_s", p.pri_frame_b);
    read_opt(j, "noise_snr_reference_db", p.noise_snr_reference);
    p.validate();
    return p;
}

json geometry_to_json(const ArrayGeometry& g) {
    return json{{"tx_positions_half_wavelength", g.tx_positions}, {"rx_positions_half_wavelength", g.rx_positions}};
}

ArrayGeometry geometry_from_json(const json& j) {
    const std::string what = "array geometry";
    reject_unknown(j, {"tx_positions_half_wavelength", "rx_positions_half_wavelength"}, what);
    ArrayGeometry g;
    g.tx_positions = read_req<std::vector<int>>(j, "tx_positions_half_wavelength", what);
    g.rx_positions = read_req<std::vector<int>>(j, "rx_positions_half_wavelength", what);
    g.validate();
    return g;
}

json scene_to_json(const Scene& s) {
    json targets = json::array();
    for (const auto& t : s.targets) {
        targets.push_back({{"range_m", t.range},
                           {"velocity_mps", t.radial_velocity},
                           {"azimuth_deg", t.azimuth},
                           {"amplitude", t.amplitude}});
    }
    json j{{"targets", targets}, {"seed", s.rng_seed}};
    j["snr_db"] = s.snr_db ? json(*s.snr_db) : json("noiseless");
    return j;
}

Scene scene_from_json(const json& j, std::optional<double> default_snr_db) {
    const std::string what = "scene";
    reject_unknown(j, {"targets", "snr_db", "seed"}, what);
    Scene s;
    s.snr_db = default_snr_db;
    if (j.contains("snr_db")) {
        const auto& v = j.at("snr_db");
        if (v.is_string() && v.get<std::string>() == "noiseless") s.snr_db.reset();
        else if (v.is_number()) s.snr_db = v.get<double>();
        else throw Error(ErrorKind::Parse, "snr_db must be a number or \"noiseless\"");
    }
    read_opt(j, "seed", s.rng_seed);
    if (j.contains("targets")) {
        if (!j.at("targets").is_array()) throw Error(ErrorKind::Parse, "scene targets must be an array");
        for (const auto& t : j.at("targets")) {
            reject_unknown(t, {"range_m", "velocity_mps", "azimuth_deg", "amplitude"}, "target");
            PointTarget pt;
            pt.range = read_req<double>(t, "range_m", "target");
            read_opt(t, "velocity_mps", pt.radial_velocity);
            read_opt(t, "azimuth_deg", pt.azimuth);
            read_opt(t, "amplitude", pt.amplitude);
            s.targets.push_back(pt);
        }
    }
    return s;
}

json calibration_to_json(const CalibrationVector& cal) {
    json gains = json::array();
    for (const auto& g : cal.gains()) gains.push_back({g.real(), g.imag()});
    return json{{"n_tx", cal.n_tx()},
                {"n_rx", cal.n_rx()},
                {"reference", {{"range_m", cal.reference_range()}, {"azimuth_deg", cal.reference_azimuth()}}},
                {"gains", gains}};
}

CalibrationVector calibration_from_json(const json& j) {
    const std::string what = "calibration";
    reject_unknown(j, {"n_tx", "n_rx", "reference", "gains"}, what);
    const auto n_tx = read_req<std::uint32_t>(j, "n_tx", what);
    const auto n_rx = read_req<std::uint32_t>(j, "n_rx", what);
    double ref_range = 0.0;
    double ref_az = 0.0;
    if (j.contains("reference")) {
        read_opt(j.at("reference"), "range_m", ref_range);
        read_opt(j.at("reference"), "azimuth_deg", ref_az);
    }
    const auto raw = read_req<std::vector<std::array<double, 2>>>(j, "gains", what);
    std::vector<std::complex<double>> gains;
    gains.reserve(raw.size());
    for (const auto& g : raw) gains.emplace_back(g[0], g[1]);
    return {n_tx, n_rx, std::move(gains), ref_range, ref_az};
}

ParamsDigest params_digest(const RadarParams& params) {
    const std::string canonical = params_to_json(params).dump();
    ParamsDigest digest{};
    SHA256(reinterpret_cast<const unsigned char*>(canonical.data()), canonical.size(), digest.data());
    return digest;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
}

void save_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace stagradar
