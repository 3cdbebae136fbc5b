#pragma once

#include <stdexcept>
#include <string>

namespace doekit {

/// Invalid argument values (bad sizes, out-of-range coordinates, unknown names).
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Ill-conditioned or inconsistent input data (duplicate points, degenerate outputs).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure that survived all recovery attempts (e.g. factorization).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace doekit
