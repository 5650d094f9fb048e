#pragma once

#include <stdexcept>
#include <string>

namespace incde {

/// Invalid parameters, malformed configuration files, bad shapes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, failed convergence, diverging integration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace incde
