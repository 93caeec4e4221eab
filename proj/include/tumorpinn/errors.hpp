#pragma once

#include <stdexcept>
#include <string>

namespace tumorpinn {

/// Invalid architecture, weights, counts or config keys.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN/Inf encountered during evaluation, or a solver step that cannot proceed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Observation data that violates its contract (labels, missing times, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loss or residual called with a data kind / parameter mode it does not accept.
class ModeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation is undefined for the given argument (e.g. relative error against 0).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tumorpinn
