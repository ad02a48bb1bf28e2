#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dwig {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something that violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Enumeration or evaluation request above a hard size cap.
class SizeLimitError : public InvalidArgument {
 public:
  SizeLimitError(const std::string& what, long long cap)
      : InvalidArgument(what + " (cap = " + std::to_string(cap) + ")"), cap_(cap) {}
  long long cap() const noexcept { return cap_; }

 private:
  long long cap_;
};

/// A 1-D correlation sequence or kernel is not normalized as required.
class NormalizationError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Malformed or incomplete input document.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Base for failures of numerical procedures on otherwise valid input.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A computed quantity violates an identity it must satisfy exactly
/// (e.g. residual imaginary part of a real Fourier sum).
class NumericalConsistencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, std::complex<double> z, double residual)
      : NumericError(what), z_(z), residual_(residual) {}
  std::complex<double> z() const noexcept { return z_; }
  double residual() const noexcept { return residual_; }

 private:
  std::complex<double> z_;
  double residual_;
};

/// Some points of a batch failed; the successful part is not returned.
class PartialResultError : public NumericError {
 public:
  PartialResultError(const std::string& what, std::vector<double> failed)
      : NumericError(what), failed_(std::move(failed)) {}
  const std::vector<double>& failed_points() const noexcept { return failed_; }

 private:
  std::vector<double> failed_;
};

}  // namespace dwig
