#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the operation's domain (bad index, bad parameter).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computation produced a non-finite or otherwise unusable number.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling ran out of attempts.
class SamplingError : public Error {
 public:
  SamplingError(const std::string& what, std::size_t attempts)
      : Error(what), attempts_(attempts) {}
  std::size_t attempts() const { return attempts_; }

 private:
  std::size_t attempts_;
};

/// The thresholded chain has more than one closed communicating class, so
/// no unique stationary distribution exists at this alpha.
class NotIrreducible : public Error {
 public:
  NotIrreducible(const std::string& what, std::size_t closed_classes)
      : Error(what), closed_classes_(closed_classes) {}
  std::size_t closed_classes() const { return closed_classes_; }

 private:
  std::size_t closed_classes_;
};

/// The linear solve did not meet its residual tolerance.
class SolverFailure : public NumericError {
 public:
  using NumericError::NumericError;
};

/// An alpha sweep could not produce a distribution.
class SweepError : public Error {
 public:
  using Error::Error;
};

/// Too many Monte-Carlo samples had to be skipped.
class ExcessiveSkips : public Error {
 public:
  ExcessiveSkips(const std::string& what, std::size_t skipped)
      : Error(what), skipped_(skipped) {}
  std::size_t skipped() const { return skipped_; }

 private:
  std::size_t skipped_;
};

}  // namespace arc
