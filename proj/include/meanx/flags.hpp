#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "meanx/iteration.hpp"
#include "meanx/mean.hpp"

namespace meanx {

/// Outcome of the randomized check of one flag.
struct FlagCheck {
  std::string flag;
  bool declared = false;
  /// No counterexample turned up.
  bool holds = true;
  std::size_t samples = 0;
  /// Largest violation seen, in units of the comparison scale.
  double max_residual = 0.0;
  /// Witness points; y is set for two-point properties (monotonicity, symmetry).
  std::vector<double> x;
  std::vector<double> y;
  std::string note;

  bool consistent() const noexcept { return !declared || holds; }
};

struct FlagReport {
  std::string mean;
  std::vector<FlagCheck> checks;

  /// Every declared flag survived sampling.
  bool ok() const noexcept;
  const FlagCheck& check(const std::string& flag) const;
};

/// Samples each of the four properties, declared or not, and records the
/// first counterexample found. Evaluation errors count as counterexamples.
/// `tolerance` is relative to max(1, max |x_i|).
FlagReport verify_flags(const MeanDescriptor& mean, std::size_t samples, std::uint64_t seed,
                        double tolerance = 1e-9, const IterationConfig& cfg = {});

/// The descriptors exercised by the flag and extension suites.
std::vector<MeanDescriptor> shipped_means();

}  // namespace meanx
