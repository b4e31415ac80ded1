#pragma once

#include <stdexcept>
#include <string>

namespace airsea {

/// Invalid configuration, malformed input files, bad flag values.
/// CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numeric failure: quadrature or optimizer did not reach its tolerance.
/// CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace airsea
