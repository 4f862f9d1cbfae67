// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stagradar/radar_config.hpp"
#include "stagradar/snapshot.hpp"

namespace stagradar {

/// Alias candidates {folded + 2 k vmax : k = -M..M} of one frame's detection.
struct CandidateSet {
    std::uint32_t frame_index = 0;
    double folded_velocity = 0.0;
    double vmax = 0.0;
    std::uint32_t order = 0;  // M
    std::vector<double> candidates;  // sorted ascending
};

struct VelocityEstimate {
    double velocity = 0.0;
    double residual = 0.0;  // mean |phase difference| over overlapped pairs, rad
};

/// Reduces v into [-vmax, vmax) by multiples of 2 vmax.
double fold_velocity(double v_true, double vmax);

/// M = n_tx / 2 for even n_tx, (n_tx - 1) / 2 for odd.
std::uint32_t candidate_order(std::uint32_t n_tx);

CandidateSet crt_candidates(double folded, double vmax, std::uint32_t n_tx, std::uint32_t frame_index = 0);

/// Midpoints of every cross pair within `tolerance`, sorted and deduplicated.
/// An empty result is valid.
std::vector<double> crt_intersect(const CandidateSet& a, const CandidateSet& b, double tolerance);

/// Default intersection tolerance: the worst-case disagreement of two
/// bin-quantized measurements, i.e. the sum of both half Doppler bin widths.
double default_intersect_tolerance(double bin_width_a, double bin_width_b);

/// exp(-j (4 pi / lambda) v t_k) applied to every value of TX k, where t_k is
/// that TX's offset inside the TDM cycle.
VirtualSnapshot compensate_tdm_phase(const VirtualSnapshot& snapshot, double velocity, const FramePlan& plan,
                                     double wavelength);

/// Mean absolute phase disagreement between co-located sources of different
/// TXs after compensating with `velocity`.
double overlap_residual(const VirtualSnapshot& snapshot, double velocity, const VirtualArray& varray,
                        const FramePlan& plan, double wavelength);

/// Picks the candidate with the smallest overlap residual (ties: smallest |v|).
VelocityEstimate resolve_velocity(const VirtualSnapshot& snapshot, std::span<const double> candidates,
                                  const VirtualArray& varray, const FramePlan& plan, double wavelength);

}  // namespace stagradar
