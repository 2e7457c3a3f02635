#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qpse {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Two states or a state and a potential refer to different projection matrices.
class ProjectionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A state or potential has modes outside the lattice box K_N^n it is being placed into.
class TruncationError : public Error {
 public:
  TruncationError(std::string what, std::vector<std::vector<int>> modes)
      : Error(std::move(what)), modes_(std::move(modes)) {}

  /// The offending lattice indices (possibly capped for very large supports).
  const std::vector<std::vector<int>>& modes() const noexcept { return modes_; }

 private:
  std::vector<std::vector<int>> modes_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qpse
