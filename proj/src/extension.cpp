#include "meanx/extension.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "meanx/errors.hpp"
#include "meanx/format.hpp"

namespace meanx {

namespace {

// Largest arity whose sub-vectors are memoized; keys are fixed-size arrays.
constexpr std::size_t kMemoMaxArity = 8;
// Below this arity a cache lookup costs more than recomputing.
constexpr std::size_t kMemoMinArity = 4;
// Mantissa bits kept when rounding memo keys (about 14 significant digits).
constexpr int kMemoMantissaBits = 47;
// Inner-level early exit: applies to power and Gini bases with parameters up
// to this size, at a relative spread of kTailScale * sqrt(rel_tol) / (1 + |r|).
constexpr double kTailMaxExponent = 30.0;
constexpr double kTailScale = 0.3;

std::uint64_t quantize(double v) {
  if (v == 0.0) return 0;
  int e = 0;
  const double m = std::frexp(v, &e);
  const auto q = static_cast<std::int64_t>(std::llround(std::ldexp(m, kMemoMantissaBits)));
  constexpr std::uint64_t mask = (std::uint64_t{1} << 49) - 1;
  return (static_cast<std::uint64_t>(q) & mask) |
         (static_cast<std::uint64_t>(e + 1100) << 49);
}

using MemoKey = std::array<std::uint64_t, kMemoMaxArity + 1>;

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::uint64_t v : k) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

void require_domain(const MeanDescriptor& mean, std::span<const double> x) {
  const Interval& dom = mean.domain();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!dom.contains(x[i])) {
      throw DomainError("entry " + std::to_string(i + 1) + " = " + format_real(x[i]) +
                        " lies outside " + dom.to_string());
    }
  }
}

// Evaluates M^e by nested barycentric iteration with one call budget and one
// memo table for the whole top-level evaluation.
class IterativeExtension {
 public:
  IterativeExtension(const MeanDescriptor& base, const IterationConfig& cfg)
      : base_(base),
        cfg_(cfg),
        memoize_(cfg.memoize && base.flags().symmetric),
        power_(base.as<PowerMean>()),
        gini_(base.as<GiniMean>()),
        tail_gap_(tail_gap(base, cfg)) {}

  ExtensionResult run(std::span<const double> x) {
    ExtensionResult out;
    out.value = level(x, /*top=*/true);
    out.iterations = top_iterations_;
    out.final_gap = top_gap_;
    out.converged = true;
    out.base_calls = calls_;
    return out;
  }

 private:
  double bivariate(double a, double b) {
    if (++calls_ > cfg_.call_budget) {
      throw ResourceLimit("iterative extension exceeded the bivariate-call budget of " +
                          std::to_string(cfg_.call_budget));
    }
    if (power_ == nullptr && gini_ == nullptr) {
      const std::array<double, 2> pair{a, b};
      return eval_mean(base_, std::span<const double>(pair), cfg_);
    }
    // Inputs are already inside the (convex) domain, so only the kernel runs.
    if (a == b) return a;
    const double v = power_ != nullptr ? kernels::power_mean2(power_->r, a, b)
                                       : kernels::gini_mean2(gini_->r, gini_->s, a, b);
    if (!std::isfinite(v)) throw NumericalError("bivariate mean produced a non-finite value");
    return std::clamp(v, std::min(a, b), std::max(a, b));
  }

  double level(std::span<const double> x, bool top) {
    const std::size_t n = x.size();
    if (n == 1) return x[0];
    if (n == 2) {
      if (top) top_gap_ = std::abs(x[1] - x[0]);
      return bivariate(x[0], x[1]);
    }

    const bool use_memo = memoize_ && !top && n >= kMemoMinArity && n <= kMemoMaxArity;
    MemoKey key{};
    if (use_memo) {
      std::array<double, kMemoMaxArity> sorted{};
      std::copy(x.begin(), x.end(), sorted.begin());
      std::sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n));
      key[0] = n;
      for (std::size_t i = 0; i < n; ++i) key[i + 1] = quantize(sorted[i]);
      if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    }

    std::vector<double> storage;
    std::array<double, 3 * kMemoMaxArity> local{};
    std::span<double> cur;
    std::span<double> next;
    std::span<double> sub;
    if (n <= kMemoMaxArity) {
      cur = std::span(local.data(), n);
      next = std::span(local.data() + n, n);
      sub = std::span(local.data() + 2 * n, n - 1);
    } else {
      storage.resize(3 * n);
      cur = std::span(storage.data(), n);
      next = std::span(storage.data() + n, n);
      sub = std::span(storage.data() + 2 * n, n - 1);
    }
    std::copy(x.begin(), x.end(), cur.begin());

    for (std::size_t it = 0;; ++it) {
      const auto [lo_it, hi_it] = std::minmax_element(cur.begin(), cur.end());
      const double lo = *lo_it;
      const double hi = *hi_it;
      const double mid = lo + (hi - lo) / 2;
      const double gap = hi - lo;
      if (top && cfg_.trace) cfg_.trace(TraceEvent{it, cur, gap});
      if (!top && gap <= tail_gap_ * std::max(1.0, std::abs(mid))) {
        double sum = 0.0;
        for (double v : cur) sum += v;
        const double value = std::clamp(sum / static_cast<double>(n), lo, hi);
        if (use_memo) memo_.emplace(key, value);
        return value;
      }
      if (gap <= cfg_.tolerance_for(mid)) {
        if (top) {
          top_iterations_ = it;
          top_gap_ = gap;
        }
        if (use_memo) memo_.emplace(key, mid);
        return mid;
      }
      if (it >= cfg_.max_iter) {
        throw NotConverged("iterative extension did not converge at arity " + std::to_string(n) +
                               " within " + std::to_string(cfg_.max_iter) + " iterations",
                           lo, hi, n, it);
      }
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i != j) sub[k++] = cur[i];
        }
        next[j] = level(sub, false);
      }
      std::copy(next.begin(), next.end(), cur.begin());
    }
  }

  // Near the diagonal a smooth symmetric mean is the arithmetic mean up to a
  // term quadratic in the spread, and the barycentric step preserves the sum
  // to the same order. Inner levels of a power or Gini base therefore stop at
  // a spread of about sqrt(rel_tol) and return the coordinate average, which
  // is within rel_tol of the limit. Zero disables the shortcut.
  static double tail_gap(const MeanDescriptor& base, const IterationConfig& cfg) {
    double largest = 0.0;
    if (const auto* p = base.as<PowerMean>()) {
      largest = std::abs(p->r);
    } else if (const auto* g = base.as<GiniMean>()) {
      largest = std::max(std::abs(g->r), std::abs(g->s));
    } else {
      return 0.0;
    }
    if (largest > kTailMaxExponent) return 0.0;
    return kTailScale * std::sqrt(cfg.rel_tol) / (1.0 + largest);
  }

  const MeanDescriptor& base_;
  const IterationConfig& cfg_;
  bool memoize_;
  const PowerMean* power_;
  const GiniMean* gini_;
  double tail_gap_;
  std::uint64_t calls_ = 0;
  std::size_t top_iterations_ = 0;
  double top_gap_ = 0.0;
  std::unordered_map<MemoKey, double, MemoKeyHash> memo_;
};

void require_extendable(const MeanDescriptor& mean, ExtensionResult* warn_into) {
  if (!mean.flags().strict) {
    throw PreconditionError("the extension needs a mean flagged strict");
  }
  if (!mean.flags().symmetric && warn_into != nullptr) {
    warn_into->warnings.emplace_back(
        "mean is not flagged symmetric; the extension is unique but may be asymmetric");
  }
}

}  // namespace

void IterationConfig::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  if (!(abs_tol >= 0.0)) throw std::invalid_argument("abs_tol must be non-negative");
  if (max_iter == 0) throw std::invalid_argument("max_iter must be at least 1");
  if (max_arity < 2) throw std::invalid_argument("max_arity must be at least 2");
}

double IterationConfig::tolerance_for(double midpoint) const {
  return std::max(rel_tol * std::max(1.0, std::abs(midpoint)), abs_tol);
}

AveragingMapping::AveragingMapping(std::vector<MeanDescriptor> means, IndexFamily family)
    : means_(std::move(means)), family_(std::move(family)) {
  if (means_.size() != family_.dimension()) {
    throw std::invalid_argument("AveragingMapping: need one mean per index vector");
  }
  for (std::size_t i = 0; i < means_.size(); ++i) {
    if (!means_[i].accepts_arity(family_.alpha(i).size())) {
      throw ArityError("AveragingMapping: mean " + std::to_string(i + 1) + " cannot take " +
                       std::to_string(family_.alpha(i).size()) + " arguments");
    }
    if (!(means_[i].domain() == means_.front().domain())) {
      throw std::invalid_argument("AveragingMapping: means must share one interval");
    }
  }
}

AveragingMapping AveragingMapping::barycentric(const MeanDescriptor& mean, std::size_t k) {
  return {std::vector<MeanDescriptor>(k + 1, mean), IndexFamily::barycentric(k)};
}

double extended_eval(const MeanDescriptor& mean, std::size_t p, std::span<const std::size_t> alpha,
                     const PointVector& x, const IterationConfig& cfg) {
  if (x.size() != p) {
    throw ArityError("extended_eval: expected a vector of length " + std::to_string(p));
  }
  if (!mean.accepts_arity(alpha.size())) {
    throw ArityError("extended_eval: mean cannot take " + std::to_string(alpha.size()) +
                     " arguments");
  }
  std::vector<double> picked;
  picked.reserve(alpha.size());
  for (std::size_t idx : alpha) {
    if (idx < 1 || idx > p) throw IndexError("extended_eval: index " + std::to_string(idx) + " outside 1.." + std::to_string(p));
    picked.push_back(x[idx - 1]);
  }
  return eval_mean(mean, std::span<const double>(picked), cfg);
}

PointVector apply_mapping(const AveragingMapping& mapping, const PointVector& x,
                          const IterationConfig& cfg) {
  const std::size_t p = mapping.dimension();
  if (x.size() != p) throw ArityError("apply_mapping: expected a vector of length " + std::to_string(p));
  std::vector<double> out(p);
  for (std::size_t i = 0; i < p; ++i) {
    out[i] = extended_eval(mapping.means()[i], p, mapping.family().alpha(i), x, cfg);
  }
  return PointVector(std::move(out));
}

PointVector barycentric_apply(const MeanDescriptor& mean, const PointVector& x,
                              const IterationConfig& cfg) {
  if (x.size() < 2) throw ArityError("barycentric_apply needs at least two coordinates");
  const std::size_t k = x.size() - 1;
  if (!mean.accepts_arity(k)) {
    throw ArityError("barycentric_apply: a vector of length " + std::to_string(x.size()) +
                     " needs a " + std::to_string(k) + "-variable mean");
  }
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = eval_mean(mean, x.without(j), cfg);
  return PointVector(std::move(out));
}

ExtensionResult invariant_mean(const AveragingMapping& mapping, const PointVector& x,
                               const IterationConfig& cfg) {
  cfg.validate();
  for (std::size_t i = 0; i < mapping.means().size(); ++i) {
    if (!mapping.means()[i].flags().strict) {
      throw PreconditionError("invariant_mean: mean " + std::to_string(i + 1) +
                              " is not flagged strict");
    }
  }
  const auto report = is_ergodic(mapping.family());
  if (!report.ergodic) {
    throw NotErgodic(report.irreducible
                         ? "incidence graph has period " + std::to_string(report.period)
                         : std::string("incidence graph is not irreducible"));
  }
  if (x.size() != mapping.dimension()) {
    throw ArityError("invariant_mean: expected a vector of length " +
                     std::to_string(mapping.dimension()));
  }
  require_domain(mapping.means().front(), x.span());

  ExtensionResult out;
  PointVector cur = x;
  for (std::size_t it = 0;; ++it) {
    const double lo = cur.min();
    const double hi = cur.max();
    const double mid = lo + (hi - lo) / 2;
    const double gap = hi - lo;
    if (cfg.trace) cfg.trace(TraceEvent{it, cur.span(), gap});
    if (gap <= cfg.tolerance_for(mid)) {
      out.value = mid;
      out.iterations = it;
      out.final_gap = gap;
      out.converged = true;
      return out;
    }
    if (it >= cfg.max_iter) {
      throw NotConverged("invariant_mean did not converge within " + std::to_string(cfg.max_iter) +
                             " iterations",
                         lo, hi, cur.size(), it);
    }
    cur = apply_mapping(mapping, cur, cfg);
    out.base_calls += mapping.dimension();
  }
}

ExtensionResult beta_extension_eval(const MeanDescriptor& mean, const PointVector& x,
                                    const IterationConfig& cfg) {
  if (x.size() < 2) throw ArityError("beta extension needs at least two coordinates");
  const std::size_t k = x.size() - 1;
  if (!mean.accepts_arity(k)) {
    throw ArityError("beta extension of a " + std::to_string(mean.arity().value_or(0)) +
                     "-variable mean is evaluated on vectors of length arity + 1");
  }
  ExtensionResult warnings;
  require_extendable(mean, &warnings);
  auto out = invariant_mean(AveragingMapping::barycentric(mean, k), x, cfg);
  out.warnings = std::move(warnings.warnings);
  return out;
}

ExtensionResult iterative_extension_eval(const MeanDescriptor& mean, const PointVector& x,
                                         const IterationConfig& cfg) {
  cfg.validate();
  if (!mean.accepts_arity(2)) throw ArityError("iterative extension needs a bivariate mean");
  ExtensionResult warnings;
  require_extendable(mean, &warnings);
  if (x.size() > cfg.max_arity) {
    throw ResourceLimit("arity " + std::to_string(x.size()) + " exceeds the configured cap of " +
                        std::to_string(cfg.max_arity));
  }
  require_domain(mean, x.span());
  auto out = IterativeExtension(mean, cfg).run(x.span());
  out.warnings = std::move(warnings.warnings);
  return out;
}

double iterative_extension_value(const MeanDescriptor& mean, std::span<const double> x,
                                 const IterationConfig& cfg) {
  if (x.size() > cfg.max_arity) {
    throw ResourceLimit("arity " + std::to_string(x.size()) + " exceeds the configured cap of " +
                        std::to_string(cfg.max_arity));
  }
  require_extendable(mean, nullptr);
  IterationConfig inner = cfg;
  inner.trace = nullptr;
  return IterativeExtension(mean, inner).run(x).value;
}

double extension_conjugacy_check(const MeanDescriptor& mean, const GeneratorDescriptor& gen,
                                 const PointVector& x, const IterationConfig& cfg) {
  // (M^e)^[phi]: phi^{-1}(M^e(phi(x))).
  const auto conj_of_ext = MeanDescriptor::conjugate(MeanDescriptor::extended(mean), gen);
  // (M^[phi])^e.
  const auto ext_of_conj = MeanDescriptor::extended(MeanDescriptor::conjugate(mean, gen));
  return std::abs(eval_mean(conj_of_ext, x, cfg) - eval_mean(ext_of_conj, x, cfg));
}

}  // namespace meanx
