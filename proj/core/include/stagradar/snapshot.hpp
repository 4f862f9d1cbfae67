// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace stagradar {

struct SnapshotEntry {
    std::uint32_t tx = 0;
    std::uint32_t rx = 0;
    int position = 0;  // virtual position, half-wavelength units
    std::complex<double> value;
};

/// Complex response of every physical (tx, rx) pair at one range-Doppler cell,
/// ordered by virtual position. Co-located sources stay separate.
struct VirtualSnapshot {
    std::vector<SnapshotEntry> entries;
    std::uint32_t range_bin = 0;
    std::uint32_t doppler_bin = 0;
    std::uint32_t frame_index = 0;
};

/// Snapshot reduced to one value per ULA position (co-located values averaged);
/// positions absent from the geometry hold zero.
struct CollapsedSnapshot {
    int first_position = 0;
    std::vector<std::complex<double>> values;
};

CollapsedSnapshot collapse(const VirtualSnapshot& snapshot);

}  // namespace stagradar
