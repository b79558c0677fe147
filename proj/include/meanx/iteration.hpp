#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace meanx {

/// One iterate of the outermost fixed-point loop, reported to a trace sink.
struct TraceEvent {
  std::size_t iteration;
  std::span<const double> iterate;
  double gap;
};

/// Stopping rule and resource limits for the invariant-mean iteration.
///
/// Iteration stops once max(x) - min(x) <= rel_tol * max(1, |midpoint|) or
/// the gap falls below abs_tol. Inner levels of the iterative extension of a
/// power or Gini base stop once the spread is near sqrt(rel_tol) and return
/// the coordinate average, which agrees with the limit to about rel_tol.
struct IterationConfig {
  double rel_tol = 1e-13;
  double abs_tol = 1e-300;
  std::size_t max_iter = 10000;
  /// Largest arity the iterative extension will attempt.
  std::size_t max_arity = 8;
  /// Bivariate evaluations allowed per top-level extension call.
  std::uint64_t call_budget = 100'000'000;
  /// Reuse results for permuted sub-vectors within one evaluation.
  bool memoize = true;
  /// Called once per outer iterate (top level only) when set.
  std::function<void(const TraceEvent&)> trace;

  /// Throws std::invalid_argument on rel_tol <= 0 or max_iter == 0.
  void validate() const;

  double tolerance_for(double midpoint) const;
};

struct ExtensionResult {
  double value = 0.0;
  std::size_t iterations = 0;
  /// max - min of the last iterate.
  double final_gap = 0.0;
  bool converged = false;
  /// Evaluations of the underlying means (bivariate calls for the iterative extension).
  std::uint64_t base_calls = 0;
  std::vector<std::string> warnings;
};

}  // namespace meanx
