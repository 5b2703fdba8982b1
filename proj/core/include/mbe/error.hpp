#pragma once

#include <stdexcept>
#include <string>

namespace mbe {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A kernel or field is not resolved by the grid (spectral tail too large).
class Unresolved : public Error {
 public:
  Unresolved(const std::string& what, double tail_fraction)
      : Error(what), tail_fraction_(tail_fraction) {}
  double tail_fraction() const noexcept { return tail_fraction_; }

 private:
  double tail_fraction_;
};

/// Picard iteration inside a step failed to reach tolerance.
class StepSizeTooLarge : public Error {
 public:
  StepSizeTooLarge(const std::string& what, double last_ratio)
      : Error(what), last_ratio_(last_ratio) {}
  double last_contraction_ratio() const noexcept { return last_ratio_; }

 private:
  double last_ratio_;
};

/// A non-finite value appeared during time stepping.
class BlowUp : public Error {
 public:
  BlowUp(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace mbe
