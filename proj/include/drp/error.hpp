#pragma once

#include <stdexcept>
#include <string>

namespace drp {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied parameters (maps to CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: singular system, blow-up, lost front (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(const std::string& what, double condition_estimate)
      : NumericalError(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& what, long long step)
      : NumericalError(what), step_(step) {}
  long long step() const { return step_; }

 private:
  long long step_;
};

class LostFrontError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A coefficient table carries derivative terms outside the expected truncation.
class TruncationMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace drp
