#include "meanx/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "meanx/errors.hpp"
#include "meanx/extension.hpp"
#include "meanx/random.hpp"
#include "meanx/sampling.hpp"

namespace meanx {

namespace {

// Levels of the two-level grid (u, v, ..., v); pairs are cheap, so arity 2
// gets a much finer grid.
constexpr std::size_t kGridLevels = 8;
constexpr std::size_t kPairGridLevels = 64;
// Mismatches in the transfer check whose violation stays below this are
// attributed to sampling at the membership boundary.
constexpr double kBoundaryViolation = 1e-9;

double power_at(double r, std::span<const double> x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) return *lo;
  return std::clamp(kernels::power_mean(r, x), *lo, *hi);
}

double excess(Side side, double r, const MembershipOracle::Point& p) {
  const double pr = power_at(r, p.x);
  const double d = side == Side::lower ? pr - p.value : p.value - pr;
  return d / std::max(1.0, std::abs(p.value));
}

double slack(const IterationConfig& cfg) { return 10.0 * cfg.rel_tol; }

struct Boundary {
  std::optional<double> r;
  bool clamped = false;
};

// Extreme passing exponent: the largest for the lower side, the smallest for
// the upper side. Passing sets are down-sets (lower) or up-sets (upper) in r
// because r -> P_r(x) is increasing.
template <class Pass>
Boundary find_boundary(Side side, const FamilyWindow& window, Pass pass) {
  window.validate();
  const std::size_t n = window.grid;
  const double step = (window.r_max - window.r_min) / static_cast<double>(n - 1);
  auto grid_r = [&](std::size_t i) {
    return i + 1 == n ? window.r_max : window.r_min + step * static_cast<double>(i);
  };
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = side == Side::lower ? n - 1 - k : k;
    if (pass(grid_r(i))) {
      best = i;
      break;
    }
  }
  Boundary out;
  if (!best) return out;
  const bool at_edge = side == Side::lower ? *best + 1 == n : *best == 0;
  double good = grid_r(*best);
  if (at_edge) {
    out.r = good;
    out.clamped = true;
    return out;
  }
  double bad = grid_r(side == Side::lower ? *best + 1 : *best - 1);
  while (std::abs(bad - good) > window.refine_tol) {
    const double mid = good + (bad - good) / 2;
    if (mid == good || mid == bad) break;
    (pass(mid) ? good : bad) = mid;
  }
  out.r = good;
  return out;
}

MeanDescriptor extension_of(const MeanDescriptor& mean) {
  if (mean.as<ExtendedMean>() != nullptr) return mean;
  return MeanDescriptor::extended(mean);
}

MeanDescriptor bivariate_base(const MeanDescriptor& mean) {
  if (const auto* e = mean.as<ExtendedMean>()) return e->base;
  return mean;
}

Interval positive_part(const Interval& dom) {
  const double lo = std::max(dom.lo(), 0.0);
  if (!(lo < dom.hi())) {
    throw DomainError("envelopes need a domain with positive points, got " + dom.to_string());
  }
  return Interval(lo, dom.hi(), lo == 0.0);
}

}  // namespace

void FamilyWindow::validate() const {
  if (!(r_min < r_max)) throw std::invalid_argument("window needs r_min < r_max");
  if (grid < 3) throw std::invalid_argument("window needs a grid of at least 3 exponents");
  if (!(refine_tol > 0.0)) throw std::invalid_argument("window needs refine_tol > 0");
}

std::string to_string(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::local_lower:
      return "local_lower";
    case EnvelopeKind::local_upper:
      return "local_upper";
    case EnvelopeKind::global_lower:
      return "global_lower";
    case EnvelopeKind::global_upper:
      return "global_upper";
  }
  return "unknown";
}

EnvelopeKind parse_envelope_kind(const std::string& text) {
  for (auto k : {EnvelopeKind::local_lower, EnvelopeKind::local_upper, EnvelopeKind::global_lower,
                 EnvelopeKind::global_upper}) {
    if (to_string(k) == text) return k;
  }
  throw ParseError("unknown envelope kind \"" + text + "\"");
}

MembershipOracle::MembershipOracle(MeanDescriptor mean, MembershipOptions options,
                                   IterationConfig cfg)
    : mean_(std::move(mean)),
      options_(options),
      cfg_(std::move(cfg)),
      domain_(positive_part(mean_.domain())) {
  cfg_.validate();
}

const std::vector<MembershipOracle::Point>& MembershipOracle::points(std::size_t arity) const {
  if (const auto it = cache_.find(arity); it != cache_.end()) return it->second;
  std::vector<Point> pts;
  const auto levels = sample_grid(domain_, arity == 2 ? kPairGridLevels : kGridLevels);
  for (double u : levels) {
    for (double v : levels) {
      if (u == v) continue;
      std::vector<double> x(arity, v);
      x[0] = u;
      pts.push_back({std::move(x), 0.0});
    }
  }
  RandomStream rng = RandomStream(options_.seed).derive("membership").derive(arity);
  for (std::size_t k = 0; k < options_.samples; ++k) {
    pts.push_back({sample_vector(domain_, arity, rng), 0.0});
  }
  for (auto& p : pts) p.value = eval_mean(mean_, std::span<const double>(p.x), cfg_);
  return cache_.emplace(arity, std::move(pts)).first->second;
}

double MembershipOracle::violation(Side side, double r, const std::vector<std::size_t>& arities,
                                   const Point* extra) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t a : arities) {
    for (const auto& p : points(a)) worst = std::max(worst, excess(side, r, p));
  }
  if (extra != nullptr) worst = std::max(worst, excess(side, r, *extra));
  return worst;
}

bool MembershipOracle::member(Side side, double r, const std::vector<std::size_t>& arities,
                              const Point* extra) const {
  for (std::size_t a : arities) {
    for (const auto& p : points(a)) {
      if (excess(side, r, p) > slack(cfg_)) return false;
    }
  }
  return extra == nullptr || excess(side, r, *extra) <= slack(cfg_);
}

std::vector<std::size_t> MembershipOracle::global_arities(std::size_t at_least) const {
  std::vector<std::size_t> out;
  const std::size_t top = std::max(options_.p_max, at_least);
  for (std::size_t a = 2; a <= top; ++a) {
    if (mean_.accepts_arity(a)) out.push_back(a);
  }
  return out;
}

EnvelopeEstimate envelope_estimate(const MembershipOracle& oracle, const PointVector& x,
                                   EnvelopeKind kind, const FamilyWindow& window) {
  window.validate();
  EnvelopeEstimate est;
  est.kind = kind;
  const std::size_t n = x.size();
  if (n == 1) {
    est.value = x[0];
    return est;
  }
  const bool lower = kind == EnvelopeKind::local_lower || kind == EnvelopeKind::global_lower;
  const bool local = kind == EnvelopeKind::local_lower || kind == EnvelopeKind::local_upper;
  const Side side = lower ? Side::lower : Side::upper;
  const std::vector<std::size_t> arities =
      local ? std::vector<std::size_t>{n} : oracle.global_arities(n);

  const MembershipOracle::Point target{x.values(),
                                       eval_mean(oracle.mean(), x.span(), oracle.config())};
  const Boundary b = find_boundary(
      side, window, [&](double r) { return oracle.member(side, r, arities, &target); });
  if (!b.r) {
    est.family_empty = true;
    est.value = lower ? x.min() : x.max();
    return est;
  }
  est.witness_r = b.r;
  est.boundary_clamped = b.clamped;
  est.value = power_at(*b.r, x.span());
  return est;
}

EnvelopeEstimate envelope_estimate(const MeanDescriptor& mean, const PointVector& x,
                                   EnvelopeKind kind, const FamilyWindow& window,
                                   const MembershipOptions& options, const IterationConfig& cfg) {
  const MembershipOracle oracle(mean, options, cfg);
  return envelope_estimate(oracle, x, kind, window);
}

bool power_family_membership(const MeanDescriptor& mean, Side side, double r,
                             std::optional<std::size_t> arity, const MembershipOptions& options,
                             const IterationConfig& cfg) {
  const MembershipOracle oracle(mean, options, cfg);
  const auto arities = arity ? std::vector<std::size_t>{*arity} : oracle.global_arities();
  return oracle.member(side, r, arities);
}

OrderingReport envelope_ordering_check(const MeanDescriptor& mean, const PointVector& x,
                                       const FamilyWindow& window,
                                       const MembershipOptions& options,
                                       const IterationConfig& cfg) {
  const MembershipOracle oracle(extension_of(mean), options, cfg);
  OrderingReport rep;
  rep.global_lower = envelope_estimate(oracle, x, EnvelopeKind::global_lower, window).value;
  rep.local_lower = envelope_estimate(oracle, x, EnvelopeKind::local_lower, window).value;
  rep.mean = eval_mean(oracle.mean(), x.span(), cfg);
  rep.local_upper = envelope_estimate(oracle, x, EnvelopeKind::local_upper, window).value;
  rep.global_upper = envelope_estimate(oracle, x, EnvelopeKind::global_upper, window).value;
  const double chain[] = {rep.global_lower, rep.local_lower, rep.mean, rep.local_upper,
                          rep.global_upper};
  const double scale = std::max(1.0, std::abs(rep.mean));
  for (std::size_t i = 0; i + 1 < std::size(chain); ++i) {
    rep.max_violation = std::max(rep.max_violation, (chain[i] - chain[i + 1]) / scale);
  }
  rep.holds = rep.max_violation <= slack(cfg);
  return rep;
}

TransferReport transfer_theorem_check(const MeanDescriptor& mean, const FamilyWindow& window,
                                      std::size_t samples, std::uint64_t seed,
                                      const IterationConfig& cfg) {
  window.validate();
  const MeanDescriptor ext = extension_of(bivariate_base(mean));
  MembershipOptions options;
  options.samples = samples;
  options.seed = seed;
  // Arity 2 of M^e is M itself, so one oracle serves both families.
  const MembershipOracle oracle(ext, options, cfg);
  const std::vector<std::size_t> pair{2};
  const auto global = oracle.global_arities();
  TransferReport rep;

  const double step = (window.r_max - window.r_min) / static_cast<double>(window.grid - 1);
  for (std::size_t i = 0; i < window.grid; ++i) {
    const double r = window.r_min + step * static_cast<double>(i);
    const double vg = oracle.violation(Side::lower, r, global);
    const double vl = oracle.violation(Side::lower, r, pair);
    const bool in_global = vg <= slack(cfg);
    const bool in_local = vl <= slack(cfg);
    ++rep.membership_checked;
    if (in_global != in_local) {
      ++rep.membership_mismatches;
      rep.mismatch_r.push_back(r);
      if (std::max(vg, vl) <= kBoundaryViolation) ++rep.membership_boundary;
    }
  }

  const Boundary bg = find_boundary(Side::lower, window,
                                    [&](double r) { return oracle.member(Side::lower, r, global); });
  const Boundary bl = find_boundary(Side::lower, window,
                                    [&](double r) { return oracle.member(Side::lower, r, pair); });
  rep.global_boundary_r = bg.r;
  rep.local_boundary_r = bl.r;
  rep.boundaries_agree = bg.r.has_value() == bl.r.has_value() &&
                         (!bg.r || std::abs(*bg.r - *bl.r) <= 2.0 * window.refine_tol);

  RandomStream rng = RandomStream(seed).derive("chain");
  const Interval domain = positive_part(ext.domain());
  for (std::size_t k = 0; k < samples; ++k) {
    const PointVector x(sample_vector(domain, 3, rng));
    const double global_lower = bg.r ? power_at(*bg.r, x.span()) : x.min();
    // The extension of the bivariate envelope, computed by the engine.
    const double extended_local =
        bl.r ? iterative_extension_eval(MeanDescriptor::power(*bl.r), x, cfg).value : x.min();
    const double value = eval_mean(ext, x, cfg);
    const double scale = std::max(1.0, std::abs(value));
    const double v = std::max(global_lower - extended_local, extended_local - value) / scale;
    ++rep.chain_checked;
    if (v > rep.max_chain_violation) {
      rep.max_chain_violation = v;
      if (v > slack(cfg)) rep.chain_witness = x.values();
    }
    if (v > slack(cfg)) ++rep.chain_violations;
  }
  return rep;
}

}  // namespace meanx
