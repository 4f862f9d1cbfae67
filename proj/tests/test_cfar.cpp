// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "stagradar/cube_dsp.hpp"
#include "stagradar/error.hpp"

using namespace stagradar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// P(X > t Z), X ~ Gamma(K), Z ~ Gamma(NK), through the Beta(K, NK) law of
// X / (X + Z): integrate the beta density over (t / (1 + t), 1) by Simpson.
double tail_by_beta_integral(double t, double n, double k) {
    const double nk = n * k;
    const double x0 = t / (1.0 + t);
    const double log_norm = std::lgamma(k + nk) - std::lgamma(k) - std::lgamma(nk);
    const auto density = [&](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return std::exp(log_norm + (k - 1.0) * std::log(x) + (nk - 1.0) * std::log1p(-x));
    };
    const int steps = 200000;
    const double h = (1.0 - x0) / steps;
    double sum = density(x0) + density(1.0);
    for (int i = 1; i < steps; ++i) sum += density(x0 + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

PowerMap gamma_noise_map(std::mt19937_64& rng, std::uint32_t nd, std::uint32_t nr, double looks) {
    PowerMap m(nd, nr);
    std::gamma_distribution<double> g(looks, 1.0);
    for (auto& v : m.power) v = g(rng);
    m.axes.n_doppler = nd;
    m.axes.n_range = nr;
    m.axes.range_bin_width = 0.6;
    m.axes.velocity_bin_width = 0.1;
    return m;
}

}  // namespace

TEST_CASE("single-look CFAR factor") {
    // N (pfa^(-1/N) - 1)
    CHECK_THAT(cfar_alpha(200, 1e-5, 1), WithinRel(200.0 * (std::pow(1e-5, -1.0 / 200.0) - 1.0), 1e-12));
    CHECK_THAT(cfar_alpha(16, 1e-3, 1), WithinRel(16.0 * (std::pow(1e-3, -1.0 / 16.0) - 1.0), 1e-12));
    // Large N approaches -ln(pfa).
    CHECK_THAT(cfar_alpha(1000000, 1e-6, 1), WithinRel(-std::log(1e-6), 1e-4));
}

TEST_CASE("multi-look CFAR factor inverts the gamma-ratio tail") {
    for (auto [n, k, pfa] : {std::tuple{200u, 144u, 1e-5}, std::tuple{40u, 4u, 1e-3}, std::tuple{8u, 2u, 1e-2}}) {
        const double alpha = cfar_alpha(n, pfa, k);
        CHECK_THAT(tail_by_beta_integral(alpha / n, n, k), WithinRel(pfa, 1e-5));
    }
    // K = 1 through the general path agrees with the closed form.
    CHECK_THAT(tail_by_beta_integral(cfar_alpha(50, 1e-4, 1) / 50.0, 50, 1), WithinRel(1e-4, 1e-5));
    CHECK_THROWS_AS(cfar_alpha(0, 1e-3, 1), Error);
    CHECK_THROWS_AS(cfar_alpha(10, 0.0, 1), Error);
    CHECK_THROWS_AS(cfar_alpha(10, 1e-3, 0), Error);
}

TEST_CASE("false-alarm rate on independent noise matches pfa") {
    std::mt19937_64 rng(21);
    for (std::uint32_t looks : {1u, 16u}) {
        CfarConfig cfg;
        cfg.probability_of_false_alarm = 1e-3;
        cfg.integrated_looks = looks;
        std::size_t cells = 0;
        std::size_t alarms = 0;
        for (int i = 0; i < 200; ++i) {
            const auto m = gamma_noise_map(rng, 64, 64, looks);
            alarms += cfar_ca2d(m, cfg).size();
            cells += m.power.size();
        }
        const double rate = static_cast<double>(alarms) / static_cast<double>(cells);
        INFO("looks " << looks << " rate " << rate);
        CHECK(rate > 0.8e-3);
        CHECK(rate < 1.2e-3);
    }
}

TEST_CASE("expected false alarms on an empty 512 x 128 map") {
    // pfa x cells = 1e-4 x 65536 = 6.55
    std::mt19937_64 rng(22);
    CfarConfig cfg;
    cfg.probability_of_false_alarm = 1e-4;
    cfg.integrated_looks = 144;
    double total = 0.0;
    constexpr int kMaps = 40;
    for (int i = 0; i < kMaps; ++i) total += static_cast<double>(cfar_ca2d(gamma_noise_map(rng, 128, 512, 144), cfg).size());
    const double mean = total / kMaps;
    INFO("mean false alarms per map " << mean);
    CHECK(mean > 5.0);
    CHECK(mean < 8.0);
}

TEST_CASE("strong cells are detected, including at the map edges") {
    std::mt19937_64 rng(23);
    auto m = gamma_noise_map(rng, 32, 64, 1);
    m.at(10, 30) = 1e4;
    m.at(0, 20) = 1e4;   // Doppler wraps
    m.at(20, 0) = 1e4;   // range edge, fewer training cells
    m.at(25, 63) = 1e4;
    CfarConfig cfg;
    cfg.probability_of_false_alarm = 1e-6;
    const auto dets = cfar_ca2d(m, cfg);
    const auto has = [&](std::uint32_t d, std::uint32_t r) {
        return std::any_of(dets.begin(), dets.end(),
                           [&](const Detection& x) { return x.doppler_bin == d && x.range_bin == r; });
    };
    CHECK(has(10, 30));
    CHECK(has(0, 20));
    CHECK(has(20, 0));
    CHECK(has(25, 63));
    for (const auto& d : dets) {
        if (d.doppler_bin == 10 && d.range_bin == 30) {
            CHECK_THAT(d.folded_velocity, WithinAbs((10.0 - 16.0) * 0.1, 1e-12));
            CHECK_THAT(d.power_db, WithinAbs(40.0, 1e-9));
        }
    }
}

TEST_CASE("a spread peak yields one detection at its maximum") {
    PowerMap m(32, 64);
    std::fill(m.power.begin(), m.power.end(), 1.0);
    m.axes.n_doppler = 32;
    m.axes.n_range = 64;
    for (int dd = -1; dd <= 1; ++dd) {
        for (int dr = -1; dr <= 1; ++dr) m.at(static_cast<std::uint32_t>(16 + dd), static_cast<std::uint32_t>(30 + dr)) = 500.0;
    }
    m.at(16, 30) = 1000.0;
    CfarConfig cfg;
    const auto dets = cfar_ca2d(m, cfg);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].doppler_bin == 16);
    CHECK(dets[0].range_bin == 30);
}

TEST_CASE("CFAR configuration checks") {
    PowerMap m(8, 8);
    CfarConfig cfg;
    CHECK_THROWS_AS(cfar_ca2d(m, cfg), Error);  // window larger than the map
    cfg.training_range = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.probability_of_false_alarm = 1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.integrated_looks = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}
