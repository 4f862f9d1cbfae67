// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "stagradar/angle_calib.hpp"
#include "stagradar/scene_sim.hpp"

namespace stagradar {

using ParamsDigest = std::array<std::uint8_t, 32>;

inline constexpr std::uint16_t kCubeFormatVersion = 1;
inline constexpr std::size_t kCubeHeaderSize = 4 + 2 + 4 * 4 + 8 + 32;
inline constexpr std::size_t kMapHeaderSize = 4 + 1 + 4 * 2 + 8 * 5;

/// RDC1 header. Everything little-endian; samples follow as interleaved
/// float32 (re, im) in (rx, chirp, fast) order.
struct CubeFileHeader {
    std::uint16_t version = kCubeFormatVersion;
    std::uint32_t n_rx = 0;
    std::uint32_t n_chirps = 0;
    std::uint32_t n_fast = 0;
    std::uint32_t frame_index = 0;
    double pri = 0.0;
    ParamsDigest params_digest{};
};

struct CubeFile {
    CubeFileHeader header;
    DataCube cube;
};

void write_cube(const DataCube& cube, const ParamsDigest& digest, const std::filesystem::path& path);

/// Throws Error(Parse) naming the byte offset of bad magic, version or
/// truncation; no partial cube is returned.
CubeFile read_cube(const std::filesystem::path& path);

/// RAM1 records: a file holds one or more maps back to back, each with its own
/// header (magic, kind u8, rows u32, cols u32, axis0 origin/step, axis1
/// origin/step, floor dB as f64) followed by rows * cols float64 dB values.
void write_maps(std::span<const RangeAzimuthMap> maps, const std::filesystem::path& path);
std::vector<RangeAzimuthMap> read_maps(const std::filesystem::path& path);

/// Binary 16-bit PGM, row 0 first, dB clipped to [floor, peak].
void write_pgm(const RangeAzimuthMap& map, const std::filesystem::path& path);

}  // namespace stagradar
