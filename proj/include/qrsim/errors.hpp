#pragma once

#include <stdexcept>
#include <string>

namespace qrsim {

/// Invalid configuration or input data. Maps to CLI exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (non-convergence, ill-conditioning). Maps to CLI exit code 2.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem / stream failure. Maps to CLI exit code 3.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qrsim
