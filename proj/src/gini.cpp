#include "meanx/gini.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "meanx/extension.hpp"
#include "meanx/mean.hpp"
#include "meanx/parallel.hpp"
#include "meanx/random.hpp"

namespace meanx {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr std::size_t kSearchGrid = 64;
constexpr std::size_t kSearchRandom = 1000;
constexpr double kSearchLo = 1e-4;
constexpr double kSearchHi = 1e4;
// log10 of the largest number of decades between random search coordinates.
constexpr double kWideDecadesLog2 = 2.4;
constexpr double kWideDecadesLog3 = 1.0;
constexpr double kSampleLo = 0.05;
constexpr double kSampleHi = 20.0;

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

bool near(double lhs, double rhs) {
  return std::abs(lhs - rhs) <= kBoundaryTol * std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
}

struct Comparison {
  double first;
  double second;
  double excess;
};

class Comparer {
 public:
  Comparer(GiniParams a, GiniParams b, const IterationConfig& cfg)
      : first_(MeanDescriptor::extended(MeanDescriptor::gini(a.r, a.s))),
        second_(MeanDescriptor::extended(MeanDescriptor::gini(b.r, b.s))),
        cfg_(cfg) {}

  Comparison operator()(std::span<const double> x) const {
    const double u = eval_mean(first_, x, cfg_);
    const double v = eval_mean(second_, x, cfg_);
    return {u, v, (u - v) / std::max(1.0, std::abs(v))};
  }

 private:
  MeanDescriptor first_;
  MeanDescriptor second_;
  const IterationConfig& cfg_;
};

void record(VerdictReport& rep, const Comparison& c, std::span<const double> x) {
  ++rep.comparisons;
  if (c.excess > rep.max_excess) {
    rep.max_excess = c.excess;
    rep.witness.assign(x.begin(), x.end());
    rep.witness_first = c.first;
    rep.witness_second = c.second;
  }
}

std::vector<double> log_grid() {
  std::vector<double> g(kSearchGrid);
  const double step = std::log(kSearchHi / kSearchLo) / static_cast<double>(kSearchGrid - 1);
  for (std::size_t i = 0; i < kSearchGrid; ++i) {
    g[i] = kSearchLo * std::exp(step * static_cast<double>(i));
  }
  return g;
}

// Candidate points for the reversal search at the given arity. At arity 3 the
// first coordinate is pinned to 1; Gini means are homogeneous.
std::vector<std::vector<double>> search_points(std::size_t arity, RandomStream rng) {
  const auto grid = log_grid();
  std::vector<std::vector<double>> pts;
  if (arity == 2) {
    for (double u : grid) {
      for (double v : grid) pts.push_back({u, v});
    }
  } else {
    for (double u : grid) {
      for (double v : grid) pts.push_back({1.0, u, v});
    }
  }
  // Random points with x_1 = 1 and log10 of each other ratio spread over
  // +-[1e-3, 10^top] decades, so that both nearly equal entries and the far
  // tails (where the mu condition bites) get sampled.
  const double top = arity == 2 ? kWideDecadesLog2 : kWideDecadesLog3;
  for (std::size_t k = 0; k < kSearchRandom; ++k) {
    std::vector<double> x(arity, 1.0);
    for (std::size_t i = 1; i < arity; ++i) {
      const double decades = std::pow(10.0, rng.uniform(-3.0, top));
      x[i] = std::pow(10.0, rng.uniform(0.0, 1.0) < 0.5 ? -decades : decades);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace

double m_func(double p, double q) {
  if (p >= 0.0 && q >= 0.0) return std::min(p, q);
  if (p <= 0.0 && q <= 0.0) return std::max(p, q);
  return 0.0;
}

double mu_func(double p, double q) {
  if (p == q) return sign(p);
  return (std::abs(p) - std::abs(q)) / (p - q);
}

bool in_delta_inf(GiniParams a, GiniParams b) {
  return std::min(a.r, a.s) <= std::min(b.r, b.s) && std::max(a.r, a.s) <= std::max(b.r, b.s);
}

bool in_delta_2(GiniParams a, GiniParams b) {
  return a.r + a.s <= b.r + b.s && m_func(a.r, a.s) <= m_func(b.r, b.s) &&
         mu_func(a.r, a.s) <= mu_func(b.r, b.s);
}

bool in_mon_g(GiniParams a) { return a.r * a.s <= 0.0; }

RegionReport region_report(GiniParams a, GiniParams b) {
  RegionReport rep;
  rep.a = a;
  rep.b = b;
  rep.in_delta_inf = in_delta_inf(a, b);
  rep.in_delta_2 = in_delta_2(a, b);
  rep.mon_g_first = in_mon_g(a);
  rep.mon_g_second = in_mon_g(b);
  rep.m_first = m_func(a.r, a.s);
  rep.m_second = m_func(b.r, b.s);
  rep.mu_first = mu_func(a.r, a.s);
  rep.mu_second = mu_func(b.r, b.s);
  const std::array<std::pair<const char*, std::pair<double, double>>, 5> sides{{
      {"min", {std::min(a.r, a.s), std::min(b.r, b.s)}},
      {"max", {std::max(a.r, a.s), std::max(b.r, b.s)}},
      {"sum", {a.r + a.s, b.r + b.s}},
      {"m", {rep.m_first, rep.m_second}},
      {"mu", {rep.mu_first, rep.mu_second}},
  }};
  for (const auto& [name, v] : sides) {
    if (near(v.first, v.second)) rep.boundary.emplace_back(name);
  }
  return rep;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::violated:
      return "violated";
    case Verdict::counterexample:
      return "counterexample";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

VerdictReport corollary_check(GiniParams a, GiniParams b, std::size_t trials, std::uint64_t seed,
                              const IterationConfig& cfg) {
  cfg.validate();
  VerdictReport rep;
  rep.in_delta_2 = in_delta_2(a, b);
  rep.exploratory = !in_mon_g(a) || !in_mon_g(b);
  const Comparer compare(a, b, cfg);
  const RandomStream root(seed);
  const double slack = 10.0 * cfg.rel_tol;

  if (rep.in_delta_2) {
    if (trials == 0) throw std::invalid_argument("corollary_check needs at least one trial");
    for (std::size_t arity = 2; arity <= 4; ++arity) {
      RandomStream rng = root.derive(arity);
      std::vector<std::vector<double>> pts(trials);
      for (auto& x : pts) {
        x.resize(arity);
        for (double& v : x) v = rng.log_uniform(kSampleLo, kSampleHi);
      }
      const auto results = parallel_map<Comparison>(
          pts.size(), [&](std::size_t i) { return compare(pts[i]); });
      for (std::size_t i = 0; i < pts.size(); ++i) record(rep, results[i], pts[i]);
    }
    rep.verdict = rep.max_excess <= slack ? Verdict::holds : Verdict::violated;
    return rep;
  }

  for (std::size_t arity = 2; arity <= 3; ++arity) {
    const auto pts = search_points(arity, root.derive(100 + arity));
    const auto results =
        parallel_map<Comparison>(pts.size(), [&](std::size_t i) { return compare(pts[i]); });
    for (std::size_t i = 0; i < pts.size(); ++i) record(rep, results[i], pts[i]);
    if (rep.max_excess > slack) {
      rep.verdict = Verdict::counterexample;
      return rep;
    }
  }
  rep.verdict = Verdict::inconclusive;
  return rep;
}

}  // namespace meanx
