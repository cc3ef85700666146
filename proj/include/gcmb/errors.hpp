#pragma once

#include <stdexcept>
#include <string>

namespace gcmb {

/// Invalid user or file supplied configuration (bad order, bad dimension, malformed file).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Matrix shape or finiteness violation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, int column)
      : std::runtime_error(what), column_(column) {}
  /// Zero-based index of the first column found linearly dependent on its predecessors.
  int column() const noexcept { return column_; }

 private:
  int column_;
};

/// Smallest singular value too close to zero for the beamformed decoder.
class DegenerateChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Effective R matrix is not real, so the real/imaginary split does not apply.
class UnsupportedDimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gcmb
