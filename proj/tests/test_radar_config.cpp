// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "stagradar/error.hpp"
#include "stagradar/radar_config.hpp"

using namespace stagradar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("wavelength and range resolution") {
    const auto p = default_radar_params();
    CHECK_THAT(p.wavelength(), WithinRel(2.998e8 / 77e9, 1e-12));
    CHECK_THAT(p.wavelength(), WithinAbs(3.8935e-3, 1e-7));
    // c / 2B at 250 MHz.
    CHECK_THAT(range_resolution(p), WithinRel(0.5996, 1e-12));
    RadarParams wide = p;
    wide.bandwidth = 4e9;
    CHECK_THAT(range_resolution(wide), WithinRel(0.03747, 1e-3));
    CHECK_THAT(p.max_unambiguous_range(), WithinRel(512 * 0.5996, 1e-12));
}

TEST_CASE("folded v_max of both staggered frames") {
    const auto p = default_radar_params();
    const double lambda = 2.998e8 / 77e9;
    CHECK_THAT(folded_vmax(p, 0), WithinRel(lambda / (4.0 * 9 * 21.0e-6), 1e-12));
    CHECK_THAT(folded_vmax(p, 1), WithinRel(lambda / (4.0 * 9 * 27.2e-6), 1e-12));
    CHECK_THAT(folded_vmax(p, 0), WithinAbs(5.15, 0.005));
    CHECK_THAT(folded_vmax(p, 1), WithinAbs(3.976, 0.005));
    // Frames alternate a, b, a, ...
    CHECK(folded_vmax(p, 2) == folded_vmax(p, 0));
    CHECK(folded_vmax(p, 3) == folded_vmax(p, 1));
}

TEST_CASE("beat frequency") {
    const auto p = default_radar_params();
    CHECK_THAT(beat_frequency(10.0, 0.0, p), WithinRel(2.0 * 250e6 * 10.0 / (20e-6 * 2.998e8), 1e-12));
    CHECK(beat_frequency(0.0, 0.0, p) == 0.0);
    const double fd = beat_frequency(0.0, 5.0, p);
    CHECK_THAT(fd, WithinRel(2.0 * 5.0 / p.wavelength(), 1e-12));
    CHECK_THROWS_AS(beat_frequency(-1.0, 0.0, p), Error);
}

TEST_CASE("azimuth resolution formula") {
    CHECK_THAT(azimuth_resolution_3db(85.0), WithinAbs(1.2016, 0.001));
    // Monotone: bigger aperture, finer beam.
    CHECK(azimuth_resolution_3db(170.0) < azimuth_resolution_3db(85.0));
    CHECK_THROWS_AS(azimuth_resolution_3db(0.5), Error);
    CHECK_THROWS_AS(azimuth_resolution_3db(0.0), Error);
}

TEST_CASE("phase migration") {
    const double lambda = 3.8935e-3;
    CHECK_THAT(phase_migration(10.0, 50e-6, lambda), WithinRel(4.0 * 3.14159265358979 * 10.0 * 50e-6 / lambda, 1e-12));
    CHECK(phase_migration(0.0, 1.0, lambda) == 0.0);
    CHECK(phase_migration(3.0, -2e-6, lambda) == -phase_migration(3.0, 2e-6, lambda));
}

TEST_CASE("parameter validation") {
    auto p = default_radar_params();
    REQUIRE_NOTHROW(p.validate());
    auto bad = p;
    bad.bandwidth = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = p;
    bad.pri_frame_a = 10e-6;  // shorter than the chirp
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = p;
    bad.pri_frame_b = bad.pri_frame_a;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = p;
    bad.n_tx = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
    try {
        bad.validate();
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidParameter);
    }
}

TEST_CASE("frame plan is round robin") {
    const auto p = default_radar_params();
    for (std::uint32_t frame : {0u, 1u, 4u}) {
        const auto plan = build_frame_plan(p, frame);
        CHECK(plan.frame_index == frame);
        CHECK(plan.chirp_count_total == 1152);
        CHECK(plan.n_tx == 9);
        CHECK(plan.slot_interval == p.pri(frame));
        CHECK_THAT(plan.tx_revisit_interval, WithinRel(9 * p.pri(frame), 1e-12));
        REQUIRE(plan.tx_order.size() == 1152);
        std::vector<int> per_tx(9, 0);
        for (std::uint32_t s = 0; s < plan.tx_order.size(); ++s) {
            CHECK(plan.tx_order[s] == s % 9);
            ++per_tx[plan.tx_order[s]];
        }
        CHECK(std::all_of(per_tx.begin(), per_tx.end(), [](int c) { return c == 128; }));
        for (std::uint32_t tx = 0; tx < 9; ++tx) CHECK_THAT(plan.tx_time_offset(tx), WithinRel(tx * p.pri(frame), 1e-12));
        CHECK(plan.slot_start(10) == 10 * plan.slot_interval);
    }
    auto tiny = p;
    tiny.chirps_per_tx_per_frame = 1;
    CHECK_THROWS_AS(build_frame_plan(tiny, 0), Error);
}

TEST_CASE("default virtual array") {
    const auto g = default_array_geometry();
    REQUIRE(g.tx_positions.size() == 9);
    REQUIRE(g.rx_positions.size() == 16);
    const auto va = build_virtual_array(g);
    REQUIRE(va.virtual_positions.size() == 86);
    for (int i = 0; i < 86; ++i) CHECK(va.virtual_positions[static_cast<std::size_t>(i)] == i);
    CHECK(va.aperture == 85);
    CHECK(va.source_count() == 144);
    CHECK(va.overlapped_pairs.size() == 58);
    std::size_t total = 0;
    for (const auto& srcs : va.element_sources) {
        CHECK(srcs.size() <= 2);
        total += srcs.size();
    }
    CHECK(total == 144);
    for (const auto& pair : va.overlapped_pairs) {
        CHECK(pair.first.tx != pair.second.tx);
        CHECK(g.tx_positions[pair.first.tx] + g.rx_positions[pair.first.rx] == pair.position);
        CHECK(g.tx_positions[pair.second.tx] + g.rx_positions[pair.second.rx] == pair.position);
    }
}

// Brute-force oracle: enumerate every (tx, rx) pair and count co-located
// pairs with distinct transmitters.
TEST_CASE("virtual array matches brute-force enumeration on random geometries") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pos(0, 40);
    std::uniform_int_distribution<int> count(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        ArrayGeometry g;
        std::set<int> tx;
        std::set<int> rx;
        const int ntx = count(rng);
        const int nrx = count(rng);
        while (static_cast<int>(tx.size()) < ntx) tx.insert(pos(rng));
        while (static_cast<int>(rx.size()) < nrx) rx.insert(pos(rng));
        g.tx_positions.assign(tx.begin(), tx.end());
        g.rx_positions.assign(rx.begin(), rx.end());
        std::shuffle(g.tx_positions.begin(), g.tx_positions.end(), rng);

        std::map<int, std::vector<std::pair<int, int>>> by_pos;
        for (int t = 0; t < ntx; ++t) {
            for (int r = 0; r < nrx; ++r) {
                by_pos[g.tx_positions[static_cast<std::size_t>(t)] + g.rx_positions[static_cast<std::size_t>(r)]]
                    .emplace_back(t, r);
            }
        }
        std::size_t pairs = 0;
        for (const auto& [p, srcs] : by_pos) {
            for (std::size_t i = 0; i < srcs.size(); ++i) {
                for (std::size_t j = i + 1; j < srcs.size(); ++j) pairs += srcs[i].first != srcs[j].first;
            }
        }
        const auto va = build_virtual_array(g);
        CHECK(va.virtual_positions.size() == by_pos.size());
        CHECK(va.overlapped_pairs.size() == pairs);
        CHECK(va.aperture == by_pos.rbegin()->first - by_pos.begin()->first);
        CHECK(std::is_sorted(va.virtual_positions.begin(), va.virtual_positions.end()));
    }
}

TEST_CASE("geometry validation") {
    ArrayGeometry g{{0, 4}, {}};
    CHECK_THROWS_AS(g.validate(), Error);
    ArrayGeometry dup{{0, 0}, {0, 1}};
    CHECK_THROWS_AS(dup.validate(), Error);
}
