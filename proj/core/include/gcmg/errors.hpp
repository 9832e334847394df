#pragma once

#include <stdexcept>
#include <string>

namespace gcmg {

/// Invalid configuration (bad parameter combinations, capacity limits).
/// CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad or insufficient input data, I/O failures, degenerate numerics.
/// CLI maps this to exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gcmg
