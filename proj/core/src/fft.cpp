// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#include "stagradar/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace stagradar::fft {

namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct Plan {
    fftw_plan plan = nullptr;
    int alignment = 0;  // fftw_alignment_of the planning buffer
};

// The FFTW planner is not thread-safe; execution of an existing plan is.
// Plans are made on FFTW-allocated (SIMD-aligned) memory with FFTW_ESTIMATE,
// so the chosen algorithm, and therefore every output bit, is reproducible.
Plan plan_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::pair<PlanHandle, int>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return {it->second.first.get(), it->second.second};
    auto* buf = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    const int alignment = fftw_alignment_of(reinterpret_cast<double*>(buf));
    fftw_free(buf);
    cache.emplace(n, std::make_pair(PlanHandle(p), alignment));
    return {p, alignment};
}

struct AlignedDeleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

}  // namespace

void forward(std::span<cplx> data) {
    if (data.empty()) return;
    const auto plan = plan_for(data.size());
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    if (fftw_alignment_of(reinterpret_cast<double*>(buf)) == plan.alignment) {
        fftw_execute_dft(plan.plan, buf, buf);
        return;
    }
    // Misaligned input runs the same plan on an aligned copy.
    thread_local std::unique_ptr<fftw_complex, AlignedDeleter> scratch;
    thread_local std::size_t scratch_size = 0;
    if (scratch_size < data.size()) {
        scratch.reset(fftw_alloc_complex(data.size()));
        scratch_size = data.size();
    }
    std::memcpy(scratch.get(), buf, data.size() * sizeof(fftw_complex));
    fftw_execute_dft(plan.plan, scratch.get(), scratch.get());
    std::memcpy(buf, scratch.get(), data.size() * sizeof(fftw_complex));
}

void forward_padded(std::span<const cplx> input, std::span<cplx> out) {
    const std::size_t n = std::min(input.size(), out.size());
    std::copy_n(input.begin(), n, out.begin());
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(n), out.end(), cplx{});
    forward(out);
}

}  // namespace stagradar::fft
