// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include "stagradar/cube_dsp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "stagradar/error.hpp"
#include "stagradar/fft.hpp"
#include "stagradar/parallel.hpp"

namespace stagradar {

std::vector<double> make_window(WindowKind kind, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (kind == WindowKind::Hann && n > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1)));
        }
    }
    return w;
}

std::vector<SubCube> tdm_demux(const DataCube& cube, const FramePlan& plan) {
    if (cube.n_chirps != plan.chirp_count_total || plan.tx_order.size() != cube.n_chirps) {
        throw Error(ErrorKind::DimensionMismatch, "cube chirp count " + std::to_string(cube.n_chirps) +
                                                      " does not match frame plan (" +
                                                      std::to_string(plan.chirp_count_total) + ")");
    }
    if (plan.n_tx == 0 || cube.n_chirps % plan.n_tx != 0) {
        throw Error(ErrorKind::DimensionMismatch, "chirp count is not a multiple of n_tx");
    }
    const std::uint32_t per_tx = cube.n_chirps / plan.n_tx;
    std::vector<SubCube> subs(plan.n_tx);
    for (std::uint32_t tx = 0; tx < plan.n_tx; ++tx) {
        auto& s = subs[tx];
        s.tx = tx;
        s.time_offset = plan.tx_time_offset(tx);
        s.n_rx = cube.n_rx;
        s.n_chirps = per_tx;
        s.n_fast = cube.n_fast;
        s.values.resize(static_cast<std::size_t>(s.n_rx) * per_tx * s.n_fast);
    }
    std::vector<std::uint32_t> next(plan.n_tx, 0);
    for (std::uint32_t c = 0; c < cube.n_chirps; ++c) {
        const std::uint32_t tx = plan.tx_order[c];
        auto& s = subs[tx];
        const std::uint32_t k = next[tx]++;
        if (k >= per_tx) throw Error(ErrorKind::DimensionMismatch, "frame plan gives a TX too many chirps");
        for (std::uint32_t rx = 0; rx < cube.n_rx; ++rx) {
            const auto* in = &cube.at(rx, c, 0);
            auto* out = &s.values[s.index(rx, k, 0)];
            for (std::uint32_t n = 0; n < cube.n_fast; ++n) out[n] = std::complex<double>(in[n]);
        }
    }
    return subs;
}

DataCube interleave(std::span<const SubCube> subs, const FramePlan& plan) {
    if (subs.size() != plan.n_tx || subs.empty()) {
        throw Error(ErrorKind::DimensionMismatch, "interleave needs one sub-cube per TX");
    }
    const auto& first = subs.front();
    DataCube cube(first.n_rx, plan.chirp_count_total, first.n_fast, plan.frame_index, plan.slot_interval);
    std::vector<std::uint32_t> next(plan.n_tx, 0);
    for (std::uint32_t c = 0; c < plan.chirp_count_total; ++c) {
        const std::uint32_t tx = plan.tx_order[c];
        const auto& s = subs[tx];
        const std::uint32_t k = next[tx]++;
        if (k >= s.n_chirps || s.n_rx != cube.n_rx || s.n_fast != cube.n_fast) {
            throw Error(ErrorKind::DimensionMismatch, "sub-cube dimensions inconsistent with frame plan");
        }
        for (std::uint32_t rx = 0; rx < cube.n_rx; ++rx) {
            for (std::uint32_t n = 0; n < cube.n_fast; ++n) {
                cube.at(rx, c, n) = std::complex<float>(s.values[s.index(rx, k, n)]);
            }
        }
    }
    return cube;
}

RangeDopplerSlice range_doppler_map(const SubCube& sub, std::span<const double> window_fast,
                                    std::span<const double> window_slow, std::uint32_t range_fft_size) {
    if (window_fast.size() != sub.n_fast || window_slow.size() != sub.n_chirps) {
        throw Error(ErrorKind::DimensionMismatch, "window lengths must match the sub-cube dimensions");
    }
    const std::uint32_t n_range = range_fft_size == 0 ? sub.n_fast : range_fft_size;
    if (n_range < sub.n_fast) throw_invalid("range FFT size must be >= fast-time sample count");

    RangeDopplerSlice out;
    out.tx = sub.tx;
    out.n_rx = sub.n_rx;
    out.n_doppler = sub.n_chirps;
    out.n_range = n_range;
    out.values.resize(static_cast<std::size_t>(out.n_rx) * out.n_doppler * out.n_range);

    const std::uint32_t nd = sub.n_chirps;
    // Scratch holds range spectra indexed (chirp, range) for one RX.
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(nd) * n_range);
    // Doppler FFTs run over blocks of adjacent range bins so that both the
    // gather and the scatter touch contiguous memory.
    constexpr std::uint32_t kBlock = 8;
    std::vector<std::complex<double>> columns(static_cast<std::size_t>(kBlock) * nd);

    for (std::uint32_t rx = 0; rx < sub.n_rx; ++rx) {
        for (std::uint32_t c = 0; c < nd; ++c) {
            auto* row = &scratch[static_cast<std::size_t>(c) * n_range];
            const auto* in = &sub.values[sub.index(rx, c, 0)];
            for (std::uint32_t n = 0; n < sub.n_fast; ++n) row[n] = in[n] * window_fast[n];
            std::fill(row + sub.n_fast, row + n_range, std::complex<double>{});
            fft::forward({row, n_range});
        }
        for (std::uint32_t r0 = 0; r0 < n_range; r0 += kBlock) {
            const std::uint32_t nb = std::min(kBlock, n_range - r0);
            for (std::uint32_t c = 0; c < nd; ++c) {
                const auto* row = &scratch[static_cast<std::size_t>(c) * n_range + r0];
                for (std::uint32_t j = 0; j < nb; ++j) columns[static_cast<std::size_t>(j) * nd + c] = row[j] * window_slow[c];
            }
            for (std::uint32_t j = 0; j < nb; ++j) fft::forward({&columns[static_cast<std::size_t>(j) * nd], nd});
            for (std::uint32_t d = 0; d < nd; ++d) {
                const std::uint32_t src = d + nd / 2 < nd ? d + nd / 2 : d + nd / 2 - nd;
                auto* dst = &out.values[out.index(rx, d, r0)];
                for (std::uint32_t j = 0; j < nb; ++j) dst[j] = columns[static_cast<std::size_t>(j) * nd + src];
            }
        }
    }
    return out;
}

RangeDopplerAxes make_axes(const RadarParams& params, const FramePlan& plan, std::uint32_t range_fft_size) {
    RangeDopplerAxes axes;
    axes.n_range = range_fft_size == 0 ? params.adc_samples_per_chirp : range_fft_size;
    axes.n_doppler = params.chirps_per_tx_per_frame;
    axes.range_bin_width = range_resolution(params) * params.adc_samples_per_chirp / axes.n_range;
    axes.velocity_bin_width = params.wavelength() / (2.0 * plan.tx_revisit_interval * axes.n_doppler);
    axes.vmax = folded_vmax(params, plan.frame_index);
    return axes;
}

RangeDopplerCube range_doppler_cube(const DataCube& cube, const RadarParams& params, const FramePlan& plan,
                                    const RangeDopplerConfig& config) {
    cube.check_matches(params, plan);
    const std::uint32_t os = config.range_oversample;
    if (os == 0 || (os & (os - 1)) != 0) throw_invalid("range_oversample must be a power of two");
    const std::uint32_t n_range = params.adc_samples_per_chirp * os;

    const auto wf = make_window(config.window_fast, params.adc_samples_per_chirp);
    const auto ws = make_window(config.window_slow, params.chirps_per_tx_per_frame);

    RangeDopplerCube out;
    out.axes = make_axes(params, plan, n_range);
    out.frame_index = plan.frame_index;
    out.slices.resize(plan.n_tx);

    auto subs = tdm_demux(cube, plan);
    parallel_for(subs.size(), config.threads, [&](std::size_t tx) {
        out.slices[tx] = range_doppler_map(subs[tx], wf, ws, n_range);
        subs[tx].values = {};
    });
    return out;
}

PowerMap noncoherent_integrate(std::span<const RangeDopplerSlice> slices) {
    if (slices.empty()) return {};
    const auto& first = slices.front();
    PowerMap map(first.n_doppler, first.n_range);
    for (const auto& s : slices) {
        if (s.n_doppler != first.n_doppler || s.n_range != first.n_range) {
            throw Error(ErrorKind::DimensionMismatch, "range-Doppler slices differ in size");
        }
        for (std::uint32_t rx = 0; rx < s.n_rx; ++rx) {
            for (std::uint32_t d = 0; d < s.n_doppler; ++d) {
                for (std::uint32_t r = 0; r < s.n_range; ++r) map.at(d, r) += std::norm(s.at(rx, d, r));
            }
        }
    }
    return map;
}

PowerMap noncoherent_integrate(const RangeDopplerCube& cube) {
    PowerMap map = noncoherent_integrate(std::span<const RangeDopplerSlice>(cube.slices));
    map.axes = cube.axes;
    map.frame_index = cube.frame_index;
    return map;
}

void CfarConfig::validate() const {
    if (training_range == 0 || training_doppler == 0) throw_invalid("CFAR training cells must be > 0 in each dimension");
    if (!(probability_of_false_alarm > 0.0 && probability_of_false_alarm < 1.0)) {
        throw_invalid("CFAR probability of false alarm must lie in (0, 1)");
    }
    if (integrated_looks == 0) throw_invalid("CFAR integrated_looks must be >= 1");
}

namespace {

// P(X > t Z) for X ~ Gamma(K), Z ~ Gamma(N K).
double gamma_ratio_tail(double t, std::uint32_t n, std::uint32_t k) {
    const double nk = static_cast<double>(n) * k;
    const double log1pt = std::log1p(t);
    const double logt = std::log(t);
    double sum = 0.0;
    for (std::uint32_t i = 0; i < k; ++i) {
        const double log_term = std::lgamma(nk + i) - std::lgamma(nk) - std::lgamma(i + 1.0) + i * logt - (nk + i) * log1pt;
        sum += std::exp(log_term);
    }
    return sum;
}

}  // namespace

double cfar_alpha(std::uint32_t training_cells, double pfa, std::uint32_t looks) {
    if (training_cells == 0) throw_invalid("CFAR needs at least one training cell");
    if (!(pfa > 0.0 && pfa < 1.0)) throw_invalid("pfa must lie in (0, 1)");
    if (looks == 0) throw_invalid("looks must be >= 1");
    const double n = training_cells;
    if (looks == 1) return n * (std::pow(pfa, -1.0 / n) - 1.0);

    double lo = 0.0;
    double hi = 1.0;
    while (gamma_ratio_tail(hi, training_cells, looks) > pfa) hi *= 2.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (gamma_ratio_tail(mid, training_cells, looks) > pfa) lo = mid;
        else hi = mid;
    }
    return n * 0.5 * (lo + hi);
}

DetectionList cfar_ca2d(const PowerMap& map, const CfarConfig& config) {
    config.validate();
    const std::uint32_t wr = config.training_range + config.guard_range;
    const std::uint32_t wd = config.training_doppler + config.guard_doppler;
    if (2 * wr + 1 > map.n_range || 2 * wd + 1 > map.n_doppler) {
        throw_invalid("CFAR window larger than the power map");
    }
    const auto nd = static_cast<int>(map.n_doppler);
    const auto nr = static_cast<int>(map.n_range);

    // Per-row range prefix sums; prefix[d][r] = sum of row d over [0, r).
    std::vector<double> prefix(static_cast<std::size_t>(nd) * (nr + 1), 0.0);
    for (int d = 0; d < nd; ++d) {
        double* row = prefix.data() + static_cast<std::size_t>(d) * (nr + 1);
        for (int r = 0; r < nr; ++r) row[r + 1] = row[r] + map.at(d, r);
    }
    const auto row_sum = [&](int d, int r0, int r1) {  // inclusive, clamped
        r0 = std::max(r0, 0);
        r1 = std::min(r1, nr - 1);
        const double* row = prefix.data() + static_cast<std::size_t>(d) * (nr + 1);
        return row[r1 + 1] - row[r0];
    };
    const auto wrap = [nd](int d) { return ((d % nd) + nd) % nd; };

    std::map<std::uint32_t, double> alpha_cache;
    const auto alpha_for = [&](std::uint32_t cells) {
        auto it = alpha_cache.find(cells);
        if (it != alpha_cache.end()) return it->second;
        const double a = cfar_alpha(cells, config.probability_of_false_alarm, config.integrated_looks);
        alpha_cache.emplace(cells, a);
        return a;
    };

    const int gr = static_cast<int>(config.guard_range);
    const int gd = static_cast<int>(config.guard_doppler);
    const int sr = std::max(gr, 1);
    const int sd = std::max(gd, 1);

    DetectionList out;
    for (int d = 0; d < nd; ++d) {
        for (int r = 0; r < nr; ++r) {
            const double cut = map.at(d, r);
            const int outer_cols = std::min(r + static_cast<int>(wr), nr - 1) - std::max(r - static_cast<int>(wr), 0) + 1;
            const int inner_cols = std::min(r + gr, nr - 1) - std::max(r - gr, 0) + 1;
            double outer = 0.0;
            double inner = 0.0;
            for (int dd = -static_cast<int>(wd); dd <= static_cast<int>(wd); ++dd) {
                const int row = wrap(d + dd);
                outer += row_sum(row, r - static_cast<int>(wr), r + static_cast<int>(wr));
                if (std::abs(dd) <= gd) inner += row_sum(row, r - gr, r + gr);
            }
            const auto cells = static_cast<std::uint32_t>(outer_cols * (2 * wd + 1) - inner_cols * (2 * gd + 1));
            const double mean = (outer - inner) / cells;
            if (!(cut > alpha_for(cells) * mean)) continue;

            bool is_peak = true;
            for (int dd = -sd; dd <= sd && is_peak; ++dd) {
                for (int dr = -sr; dr <= sr; ++dr) {
                    if (dd == 0 && dr == 0) continue;
                    const int rr = r + dr;
                    if (rr < 0 || rr >= nr) continue;
                    const int row = wrap(d + dd);
                    const double other = map.at(static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(rr));
                    const bool earlier = row * nr + rr < d * nr + r;
                    if (other > cut || (other == cut && earlier)) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (!is_peak) continue;

            Detection det;
            det.range_bin = static_cast<std::uint32_t>(r);
            det.doppler_bin = static_cast<std::uint32_t>(d);
            det.folded_velocity = map.axes.velocity_of(d);
            det.power_db = 10.0 * std::log10(cut);
            det.frame_index = map.frame_index;
            out.push_back(det);
        }
    }
    return out;
}

}  // namespace stagradar
