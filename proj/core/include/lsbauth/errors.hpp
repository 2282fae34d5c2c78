#pragma once

#include <stdexcept>
#include <string>

namespace lsbauth {

/// Malformed or inconsistent user configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A plant/controller model that fails validation (CLI exit code 3).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metric whose defining bound or series does not converge.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lsbauth
