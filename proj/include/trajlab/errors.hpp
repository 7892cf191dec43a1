#pragma once

#include <stdexcept>
#include <string>

namespace trajlab {

/// File-system level failure (missing file, unwritable directory, ...).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent data (bad CSV row, dims mismatch, non-finite values).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical breakdown inside the physics stepper.
struct SimulationError : std::runtime_error {
    explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace trajlab
