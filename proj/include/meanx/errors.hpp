#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace meanx {

/// Base of every error raised by the library.
class MeanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input coordinate lies outside the mean's interval.
class DomainError : public MeanError {
 public:
  using MeanError::MeanError;
};

/// The vector length does not match the arity a mean accepts.
class ArityError : public MeanError {
 public:
  using MeanError::MeanError;
};

/// Overflow, underflow to an invalid value, or NaN in generator space.
class NumericalError : public MeanError {
 public:
  using MeanError::MeanError;
};

/// An index vector refers to a coordinate outside 1..p.
class IndexError : public MeanError {
 public:
  using MeanError::MeanError;
};

/// A mean flag required by an operation (strictness, for instance) is absent.
class PreconditionError : public MeanError {
 public:
  using MeanError::MeanError;
};

class NotIrreducible : public MeanError {
 public:
  using MeanError::MeanError;
};

class NotErgodic : public MeanError {
 public:
  using MeanError::MeanError;
};

/// Iteration hit max_iter with the gap still above tolerance.
///
/// The last iterate bracket [lo, hi] always contains the invariant value for
/// monotone means, so callers may still use it as an interval estimate.
class NotConverged : public MeanError {
 public:
  NotConverged(const std::string& what, double lo, double hi, std::size_t level,
               std::size_t iterations)
      : MeanError(what), lo_(lo), hi_(hi), level_(level), iterations_(iterations) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  /// Arity at which the iteration failed.
  std::size_t level() const noexcept { return level_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double lo_;
  double hi_;
  std::size_t level_;
  std::size_t iterations_;
};

/// The bivariate-call budget or arity cap of the iterative extension was exceeded.
class ResourceLimit : public MeanError {
 public:
  using MeanError::MeanError;
};

/// Malformed descriptor or family text.
class ParseError : public MeanError {
 public:
  using MeanError::MeanError;
};

}  // namespace meanx
