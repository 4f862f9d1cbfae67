// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stagradar {

struct DemoCheck {
    std::string label;
    bool passed = false;
    std::string detail;
};

/// Self-contained reproduction of one experiment; `passed()` is true when
/// every check holds.
struct DemoReport {
    std::string name;
    std::vector<DemoCheck> checks;
    std::vector<std::string> notes;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] std::string text() const;
};

/// Staggered-PRF velocity unfolding of a 6 m/s target (v_max 3.6 / 2.2 m/s).
DemoReport demo_unfold();
/// 20 deg, 10 m/s target with 50 us slots: angle peak with and without
/// TDM phase compensation.
DemoReport demo_compensation();
/// Two reflectors 1.6 deg apart at 5 m.
DemoReport demo_resolution_angle();
/// Two reflectors 0.6 m apart at equal azimuth.
DemoReport demo_resolution_range();

std::vector<std::string_view> demo_names();
/// Throws Error(InvalidParameter) for an unknown name.
DemoReport run_demo(std::string_view name);

}  // namespace stagradar
