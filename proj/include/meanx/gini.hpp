#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "meanx/iteration.hpp"

namespace meanx {

struct GiniParams {
  double r = 0.0;
  double s = 0.0;
  friend bool operator==(const GiniParams&, const GiniParams&) = default;
};

/// min(p, q) when both are >= 0, max(p, q) when both are <= 0, otherwise 0.
double m_func(double p, double q);
/// (|p| - |q|) / (p - q), or sign(p) when p == q (sign(0) = 0).
double mu_func(double p, double q);

/// min(a) <= min(b) and max(a) <= max(b): G_a <= G_b at every arity.
bool in_delta_inf(GiniParams a, GiniParams b);
/// Sum, m and mu of a are each <= those of b: G_a <= G_b for two variables.
bool in_delta_2(GiniParams a, GiniParams b);
/// r * s <= 0, the parameters for which G_{r,s} is monotone.
bool in_mon_g(GiniParams a);

struct RegionReport {
  GiniParams a;
  GiniParams b;
  bool in_delta_inf = false;
  bool in_delta_2 = false;
  bool mon_g_first = false;
  bool mon_g_second = false;
  double m_first = 0.0;
  double m_second = 0.0;
  double mu_first = 0.0;
  double mu_second = 0.0;
  /// Conditions whose two sides agree to within 1e-12, so that rounding
  /// could flip the verdict: any of "min", "max", "sum", "m", "mu".
  std::vector<std::string> boundary;
};

RegionReport region_report(GiniParams a, GiniParams b);

enum class Verdict {
  /// In Delta_2 and every sampled comparison of the extensions held.
  holds,
  /// In Delta_2 but some sample violated the ordering.
  violated,
  /// Not in Delta_2 and a strict reversal of the ordering was found.
  counterexample,
  /// Not in Delta_2 and the search found no reversal.
  inconclusive,
};

std::string to_string(Verdict v);

struct VerdictReport {
  Verdict verdict = Verdict::inconclusive;
  bool in_delta_2 = false;
  /// One of the pairs lies outside Mon_G; the outcome is then only exploratory.
  bool exploratory = false;
  std::size_t comparisons = 0;
  /// Largest G_a^e(x) - G_b^e(x), divided by max(1, |G_b^e(x)|).
  double max_excess = -std::numeric_limits<double>::infinity();
  std::vector<double> witness;
  double witness_first = 0.0;
  double witness_second = 0.0;

  /// The outcome agrees with the comparison theorem (inconclusive counts as agreeing).
  bool consistent() const noexcept { return verdict != Verdict::violated; }
};

/// Compares the iterative extensions of G_a and G_b.
///
/// Inside Delta_2: `trials` random vectors at each arity 2, 3 and 4 must satisfy
/// G_a^e(x) <= G_b^e(x) + 10 rel_tol max(1, |G_b^e(x)|). Outside: a 64-point
/// log grid per coordinate plus 1000 random points look for a strict reversal
/// at arity 2, then at arity 3 (with x_1 = 1 by homogeneity). Random points
/// reach ratios of 1e250 at arity 2, since reversals driven by mu only show up
/// far out in the tails.
VerdictReport corollary_check(GiniParams a, GiniParams b, std::size_t trials, std::uint64_t seed,
                              const IterationConfig& cfg = {});

}  // namespace meanx
