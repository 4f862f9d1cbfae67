// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <vector>

#include "stagradar/radar_config.hpp"

namespace stagradar::testing {

using cplx = std::complex<double>;

// Direct O(N^2) DFT, the oracle for every FFT-based result.
inline std::vector<cplx> naive_dft(const std::vector<cplx>& x, std::size_t n_out = 0) {
    const std::size_t n = n_out == 0 ? x.size() : n_out;
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        long double re = 0.0L;
        long double im = 0.0L;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const long double a = -2.0L * 3.14159265358979323846264338327950288L * static_cast<long double>(k * i % n) /
                                  static_cast<long double>(n);
            re += x[i].real() * std::cos(a) - x[i].imag() * std::sin(a);
            im += x[i].real() * std::sin(a) + x[i].imag() * std::cos(a);
        }
        out[k] = {static_cast<double>(re), static_cast<double>(im)};
    }
    return out;
}

// Reduced-size radar so simulations stay fast; physics constants unchanged.
inline RadarParams small_params(std::uint32_t samples = 64, std::uint32_t chirps_per_tx = 32) {
    RadarParams p = default_radar_params();
    p.adc_samples_per_chirp = samples;
    p.chirps_per_tx_per_frame = chirps_per_tx;
    return p;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace stagradar::testing
