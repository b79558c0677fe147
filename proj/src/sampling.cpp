#include "meanx/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace meanx {

SampleRange sample_range(const Interval& domain) {
  const double lo = domain.lo();
  const double hi = domain.hi();
  if (lo >= 0.0) {
    const double a = std::max(lo, 0.05);
    const double b = std::min(hi, 20.0);
    if (a < b) return {a, b, true};
  }
  double a = std::max(lo, -10.0);
  double b = std::min(hi, 10.0);
  if (!(a < b)) {
    // Intervals that miss [-10, 10] entirely.
    a = std::isfinite(lo) ? lo : hi - 20.0;
    b = std::isfinite(hi) ? hi : lo + 20.0;
  }
  const double pad = (b - a) * 1e-3;
  return {a + pad, b - pad, false};
}

double sample_in(const Interval& domain, RandomStream& rng) {
  const SampleRange range = sample_range(domain);
  for (;;) {
    const double v = range.logarithmic ? rng.log_uniform(range.lo, range.hi)
                                       : rng.uniform(range.lo, range.hi);
    if (domain.contains(v)) return v;
  }
}

std::vector<double> sample_grid(const Interval& domain, std::size_t n) {
  const SampleRange range = sample_range(domain);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
    g[i] = range.logarithmic ? range.lo * std::pow(range.hi / range.lo, t)
                             : range.lo + (range.hi - range.lo) * t;
  }
  return g;
}

std::vector<double> sample_vector(const Interval& domain, std::size_t n, RandomStream& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = sample_in(domain, rng);
  return x;
}

double scale_of(const std::vector<double>& x) {
  double s = 1.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace meanx
