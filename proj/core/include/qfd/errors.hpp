#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qfd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural invariant (hermiticity, skew-symmetry, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computed value is not finite.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The request would exceed a hard size cap (factorial or exponential cost).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Not enough usable data to fit a decay law.
class FitError : public Error {
 public:
  using Error::Error;
};

/// A disorder sample estimator threw; carries the failing sample index.
class SampleError : public Error {
 public:
  SampleError(std::size_t index, const std::string& what)
      : Error("sample " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace qfd
