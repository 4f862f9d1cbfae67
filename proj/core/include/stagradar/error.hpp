// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stagradar Authors

#pragma once

#include <stdexcept>
#include <string>

namespace stagradar {

enum class ErrorKind {
    InvalidParameter,
    DimensionMismatch,
    UnsupportedGeometry,
    CalibrationFailed,
    Parse,
    Io,
};

/// Exception type thrown by every stagradar module. The kind lets callers
/// (the CLI in particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
    throw Error(ErrorKind::InvalidParameter, what);
}

}  // namespace stagradar
