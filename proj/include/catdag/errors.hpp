#pragma once

#include <stdexcept>
#include <string>

namespace catdag {

/// Malformed or unusable input data (CSV, edge lists, traces). CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (iteration counts, hyperparameters, flags). CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A causal query that cannot be answered (unknown variable, y == v, bad level).
class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace catdag
