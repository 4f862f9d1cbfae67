// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include "stagradar/velocity_unfold.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "stagradar/error.hpp"

namespace stagradar {

double fold_velocity(double v_true, double vmax) {
    if (!(vmax > 0.0)) throw_invalid("vmax must be > 0");
    const double span = 2.0 * vmax;
    double v = v_true - span * std::floor((v_true + vmax) / span);
    if (v >= vmax) v -= span;  // rounding at the upper edge
    return v;
}

std::uint32_t candidate_order(std::uint32_t n_tx) {
    if (n_tx < 1) throw_invalid("n_tx must be >= 1");
    return n_tx % 2 == 0 ? n_tx / 2 : (n_tx - 1) / 2;
}

CandidateSet crt_candidates(double folded, double vmax, std::uint32_t n_tx, std::uint32_t frame_index) {
    if (!(vmax > 0.0)) throw_invalid("vmax must be > 0");
    CandidateSet set;
    set.frame_index = frame_index;
    set.folded_velocity = folded;
    set.vmax = vmax;
    set.order = candidate_order(n_tx);
    const int m = static_cast<int>(set.order);
    for (int k = -m; k <= m; ++k) set.candidates.push_back(folded + 2.0 * k * vmax);
    return set;
}

std::vector<double> crt_intersect(const CandidateSet& a, const CandidateSet& b, double tolerance) {
    if (!(tolerance > 0.0)) throw_invalid("intersection tolerance must be > 0");
    std::vector<double> out;
    for (double va : a.candidates) {
        for (double vb : b.candidates) {
            if (std::abs(va - vb) <= tolerance) out.push_back(0.5 * (va + vb));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::abs(x - y) <= 1e-9; }),
              out.end());
    return out;
}

double default_intersect_tolerance(double bin_width_a, double bin_width_b) {
    return 0.5 * (bin_width_a + bin_width_b);
}

namespace {

std::vector<std::complex<double>> tx_phasors(double velocity, const FramePlan& plan, double wavelength) {
    std::vector<std::complex<double>> rot(plan.n_tx);
    for (std::uint32_t tx = 0; tx < plan.n_tx; ++tx) {
        rot[tx] = std::polar(1.0, -phase_migration(velocity, plan.tx_time_offset(tx), wavelength));
    }
    return rot;
}

}  // namespace

VirtualSnapshot compensate_tdm_phase(const VirtualSnapshot& snapshot, double velocity, const FramePlan& plan,
                                     double wavelength) {
    if (!std::isfinite(velocity)) throw_invalid("compensation velocity must be finite");
    const auto rot = tx_phasors(velocity, plan, wavelength);
    VirtualSnapshot out = snapshot;
    for (auto& e : out.entries) {
        if (e.tx >= rot.size()) throw_invalid("snapshot TX index outside frame plan");
        e.value *= rot[e.tx];
    }
    return out;
}

double overlap_residual(const VirtualSnapshot& snapshot, double velocity, const VirtualArray& varray,
                        const FramePlan& plan, double wavelength) {
    if (varray.overlapped_pairs.empty()) {
        throw Error(ErrorKind::UnsupportedGeometry, "virtual array has no overlapped elements from distinct TXs");
    }
    std::vector<const SnapshotEntry*> lookup(varray.source_count(), nullptr);
    for (const auto& e : snapshot.entries) {
        if (e.tx < varray.n_tx && e.rx < varray.n_rx) lookup[static_cast<std::size_t>(e.tx) * varray.n_rx + e.rx] = &e;
    }
    const auto rot = tx_phasors(velocity, plan, wavelength);
    double total = 0.0;
    for (const auto& pair : varray.overlapped_pairs) {
        const auto* a = lookup[static_cast<std::size_t>(pair.first.tx) * varray.n_rx + pair.first.rx];
        const auto* b = lookup[static_cast<std::size_t>(pair.second.tx) * varray.n_rx + pair.second.rx];
        if (a == nullptr || b == nullptr) throw_invalid("snapshot is missing an overlapped source");
        const auto ca = a->value * rot[a->tx];
        const auto cb = b->value * rot[b->tx];
        total += std::abs(std::arg(ca * std::conj(cb)));
    }
    return total / static_cast<double>(varray.overlapped_pairs.size());
}

VelocityEstimate resolve_velocity(const VirtualSnapshot& snapshot, std::span<const double> candidates,
                                  const VirtualArray& varray, const FramePlan& plan, double wavelength) {
    if (candidates.empty()) throw_invalid("resolve_velocity needs at least one candidate");
    if (varray.overlapped_pairs.empty()) {
        throw Error(ErrorKind::UnsupportedGeometry, "virtual array has no overlapped elements from distinct TXs");
    }
    if (candidates.size() == 1) {
        return {candidates.front(), overlap_residual(snapshot, candidates.front(), varray, plan, wavelength)};
    }
    VelocityEstimate best{candidates.front(),
                          overlap_residual(snapshot, candidates.front(), varray, plan, wavelength)};
    for (double v : candidates.subspan(1)) {
        const double res = overlap_residual(snapshot, v, varray, plan, wavelength);
        const bool tie = std::abs(res - best.residual) <= 1e-12 * std::max(1.0, best.residual);
        if (res < best.residual && !tie) {
            best = {v, res};
        } else if (tie && std::abs(v) < std::abs(best.velocity)) {
            best = {v, res};
        }
    }
    return best;
}

}  // namespace stagradar
