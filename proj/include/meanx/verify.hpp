#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meanx/envelopes.hpp"
#include "meanx/generator.hpp"
#include "meanx/iteration.hpp"
#include "meanx/mean.hpp"

namespace meanx {

enum class Suite { flags, extension, conjugacy, envelope };

std::string to_string(Suite suite);
/// ParseError on an unknown name.
Suite parse_suite(const std::string& text);

struct SuiteOptions {
  std::size_t samples = 50;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  /// Generator for the conjugacy suite; power:2 when empty.
  std::optional<GeneratorDescriptor> gen;
  FamilyWindow window;
  IterationConfig cfg;
};

struct PropertyResult {
  std::string name;
  std::size_t samples = 0;
  double max_residual = 0.0;
  bool passed = true;
  std::vector<double> witness;
  std::string note;
};

struct SuiteReport {
  Suite suite = Suite::flags;
  std::string mean;
  std::vector<PropertyResult> properties;

  bool passed() const noexcept;
};

/// Runs one property set against `mean` with streams derived from options.seed.
///
/// flags: the four declared flags. extension: symmetry, bounds, monotonicity,
/// homogeneity, invariance and (for power and quasiarithmetic bases) the
/// quasiarithmetic fixed point of M^e at arities 3 and 4, plus convexity for
/// convex power bases. conjugacy: (M^e)^[phi] against (M^[phi])^e.
/// envelope: the local sandwich, the envelope ordering of M^e and the
/// transfer checks. Residuals are relative to max(1, max |x_i|).
SuiteReport verify_suite(const MeanDescriptor& mean, Suite suite, const SuiteOptions& options = {});

}  // namespace meanx
