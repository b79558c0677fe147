#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "meanx/generator.hpp"
#include "meanx/incidence_graph.hpp"
#include "meanx/iteration.hpp"
#include "meanx/mean.hpp"

namespace meanx {

/// A d-averaging mapping M = (M_1, ..., M_p) paired with index vectors alpha,
/// which together define the mean-type mapping M_alpha : I^p -> I^p.
class AveragingMapping {
 public:
  /// Throws ArityError when means[i] cannot take |alpha_i| arguments and
  /// std::invalid_argument when the means do not share one interval.
  AveragingMapping(std::vector<MeanDescriptor> means, IndexFamily family);

  /// (M, ..., M) over the family alpha_i = {1..k+1} \ {i}; M_alpha is then the
  /// barycentric operator of the k-variable mean M.
  static AveragingMapping barycentric(const MeanDescriptor& mean, std::size_t k);

  const std::vector<MeanDescriptor>& means() const noexcept { return means_; }
  const IndexFamily& family() const noexcept { return family_; }
  std::size_t dimension() const noexcept { return family_.dimension(); }
  const Interval& domain() const noexcept { return means_.front().domain(); }

 private:
  std::vector<MeanDescriptor> means_;
  IndexFamily family_;
};

/// M(x_{alpha_1}, ..., x_{alpha_d}) for x in I^p; alpha is 1-based.
double extended_eval(const MeanDescriptor& mean, std::size_t p, std::span<const std::size_t> alpha,
                     const PointVector& x, const IterationConfig& cfg = {});

/// Component i is extended_eval(means[i], p, alpha_i, x).
PointVector apply_mapping(const AveragingMapping& mapping, const PointVector& x,
                          const IterationConfig& cfg = {});

/// (M(x^{v1}), ..., M(x^{v(k+1)})) for a k-variable mean M and x of length k+1.
PointVector barycentric_apply(const MeanDescriptor& mean, const PointVector& x,
                              const IterationConfig& cfg = {});

/// Power-iterates the mapping from x until the iterate's spread is within
/// tolerance; the value is the midpoint of the final bracket.
///
/// Requires every mean to be flagged strict (PreconditionError) and the
/// incidence graph to be ergodic (NotErgodic). Throws NotConverged carrying
/// the last bracket when max_iter is reached.
ExtensionResult invariant_mean(const AveragingMapping& mapping, const PointVector& x,
                               const IterationConfig& cfg = {});

/// The beta-invariant extension of a p-variable mean evaluated at x in I^{p+1}.
/// A mean not flagged symmetric is accepted with a warning in the result.
ExtensionResult beta_extension_eval(const MeanDescriptor& mean, const PointVector& x,
                                    const IterationConfig& cfg = {});

/// The iterative extension M^e of the bivariate restriction of `mean`.
///
/// n = 1 returns x_1 and n = 2 returns M(x) without iterating. For n > 2 the
/// n-ary value iterates the barycentric operator whose components are
/// (n-1)-ary iterative extensions. Throws ResourceLimit when n exceeds
/// cfg.max_arity or the bivariate-call budget runs out, and NotConverged
/// (with the failing arity) at any level.
ExtensionResult iterative_extension_eval(const MeanDescriptor& mean, const PointVector& x,
                                         const IterationConfig& cfg = {});

/// |(M^e)^[phi](x) - (M^[phi])^e(x)|.
double extension_conjugacy_check(const MeanDescriptor& mean, const GeneratorDescriptor& gen,
                                 const PointVector& x, const IterationConfig& cfg = {});

/// Value-only form of iterative_extension_eval used by eval_mean for Extended means.
double iterative_extension_value(const MeanDescriptor& mean, std::span<const double> x,
                                 const IterationConfig& cfg);

}  // namespace meanx
