#pragma once

#include <stdexcept>
#include <string>

namespace vabench {

/// Malformed or inconsistent input data (CSV files, catalogs, site labels).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration passed to a computation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical precondition failed (rank deficiency, degenerate denominator).
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace vabench
