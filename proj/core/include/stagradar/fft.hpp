// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace stagradar::fft {

using cplx = std::complex<double>;

/// Unnormalized forward DFT, X[k] = sum_n x[n] exp(-j 2 pi k n / N), in place.
/// Plans are cached per length; execution is safe from multiple threads.
void forward(std::span<cplx> data);

/// Zero-pads (or truncates) `input` to out.size() and transforms into `out`.
void forward_padded(std::span<const cplx> input, std::span<cplx> out);

}  // namespace stagradar::fft
