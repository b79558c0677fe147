#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meanx/interval.hpp"
#include "meanx/iteration.hpp"
#include "meanx/mean.hpp"

namespace meanx {

// Envelopes here range over power means P_r only, so a lower estimate never
// exceeds the envelope over all quasiarithmetic means and an upper estimate
// never falls below it.

/// Search window over the exponent r.
struct FamilyWindow {
  double r_min = -20.0;
  double r_max = 20.0;
  std::size_t grid = 81;
  double refine_tol = 1e-6;

  /// Throws std::invalid_argument unless r_min < r_max, grid >= 3 and refine_tol > 0.
  void validate() const;
};

enum class Side { lower, upper };

enum class EnvelopeKind { local_lower, local_upper, global_lower, global_upper };

std::string to_string(EnvelopeKind kind);
/// Inverse of to_string; ParseError on anything else.
EnvelopeKind parse_envelope_kind(const std::string& text);

struct MembershipOptions {
  /// Random points per arity, on top of a grid of two-level points (u, v, ..., v)
  /// with 64 levels at arity 2 and 8 otherwise.
  std::size_t samples = 64;
  std::uint64_t seed = 0;
  /// Largest arity tested by the global kinds.
  std::size_t p_max = 4;
};

struct EnvelopeEstimate {
  EnvelopeKind kind = EnvelopeKind::local_lower;
  double value = 0.0;
  /// Exponent of the extremal passing power mean; empty when the family is empty.
  std::optional<double> witness_r;
  bool family_empty = false;
  /// The witness sits on the window edge, so the true envelope may lie further out.
  bool boundary_clamped = false;
};

/// Sampled membership of P_r in the lower family (P_r <= M) or the upper
/// family (P_r >= M). Values of M at the sample points are computed once per
/// arity and reused.
class MembershipOracle {
 public:
  /// Throws DomainError when M's domain has no positive part.
  MembershipOracle(MeanDescriptor mean, MembershipOptions options, IterationConfig cfg = {});

  struct Point {
    std::vector<double> x;
    double value;
  };

  /// Every sampled point of every listed arity passes, and so does `extra`
  /// when given.
  bool member(Side side, double r, const std::vector<std::size_t>& arities,
              const Point* extra = nullptr) const;
  /// Largest of (P_r - M) / max(1, |M|) (lower) or (M - P_r) / max(1, |M|)
  /// (upper) over the same points; member() allows up to 10 rel_tol.
  double violation(Side side, double r, const std::vector<std::size_t>& arities,
                   const Point* extra = nullptr) const;

  /// Arities 2..max(p_max, at_least) that M accepts.
  std::vector<std::size_t> global_arities(std::size_t at_least = 0) const;

  const MeanDescriptor& mean() const noexcept { return mean_; }
  const IterationConfig& config() const noexcept { return cfg_; }

  /// The grid and random points of one arity with M evaluated at each.
  /// Not safe to call from several threads at once.
  const std::vector<Point>& points(std::size_t arity) const;

 private:
  MeanDescriptor mean_;
  MembershipOptions options_;
  IterationConfig cfg_;
  Interval domain_;
  mutable std::map<std::size_t, std::vector<Point>> cache_;
};

/// Lower kinds: sup of P_r(x) over passing r; upper kinds: inf. Local kinds
/// test the arity of x, global kinds arities 2..p_max (and the arity of x).
/// The grid pass finds the extreme passing grid exponent and bisection then
/// narrows the membership boundary to refine_tol, keeping the passing side.
/// With no passing r the value falls back to min(x) (lower) or max(x) (upper).
EnvelopeEstimate envelope_estimate(const MeanDescriptor& mean, const PointVector& x,
                                   EnvelopeKind kind, const FamilyWindow& window = {},
                                   const MembershipOptions& options = {},
                                   const IterationConfig& cfg = {});

/// Same, reusing the sample cache of `oracle`; x is checked alongside the samples.
EnvelopeEstimate envelope_estimate(const MembershipOracle& oracle, const PointVector& x,
                                   EnvelopeKind kind, const FamilyWindow& window = {});

/// Sampled check of P_r against M at one arity or at all arities 2..p_max.
bool power_family_membership(const MeanDescriptor& mean, Side side, double r,
                             std::optional<std::size_t> arity,
                             const MembershipOptions& options = {},
                             const IterationConfig& cfg = {});

struct OrderingReport {
  double global_lower = 0.0;
  double local_lower = 0.0;
  double mean = 0.0;
  double local_upper = 0.0;
  double global_upper = 0.0;
  /// Largest step down along the chain, over max(1, |mean|).
  double max_violation = 0.0;
  bool holds = false;
};

/// Checks global_lower <= local_lower <= M^e(x) <= local_upper <= global_upper
/// within 10 rel_tol, all envelopes taken of M^e. M is used as its bivariate
/// restriction.
OrderingReport envelope_ordering_check(const MeanDescriptor& mean, const PointVector& x,
                                       const FamilyWindow& window = {},
                                       const MembershipOptions& options = {},
                                       const IterationConfig& cfg = {});

struct TransferReport {
  /// Grid exponents where membership of P_r in the global lower family of M^e
  /// and in the bivariate lower family of M were compared.
  std::size_t membership_checked = 0;
  std::size_t membership_mismatches = 0;
  /// Mismatches whose violation is below 1e-9: sampling noise at the boundary.
  std::size_t membership_boundary = 0;
  std::vector<double> mismatch_r;

  /// Boundary exponents of the global lower envelope of M^e and the bivariate
  /// local lower envelope of M; empty when the family is empty.
  std::optional<double> global_boundary_r;
  std::optional<double> local_boundary_r;
  bool boundaries_agree = false;

  /// global lower of M^e <= (local lower of M)^e <= M^e at sampled points of arity 3.
  std::size_t chain_checked = 0;
  std::size_t chain_violations = 0;
  double max_chain_violation = 0.0;
  std::vector<double> chain_witness;

  bool passed() const noexcept {
    return membership_mismatches == membership_boundary && boundaries_agree &&
           chain_violations == 0;
  }
};

TransferReport transfer_theorem_check(const MeanDescriptor& mean, const FamilyWindow& window,
                                      std::size_t samples, std::uint64_t seed,
                                      const IterationConfig& cfg = {});

}  // namespace meanx
