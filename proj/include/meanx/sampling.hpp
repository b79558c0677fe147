#pragma once

#include <cstddef>
#include <vector>

#include "meanx/interval.hpp"
#include "meanx/random.hpp"

namespace meanx {

struct SampleRange {
  double lo;
  double hi;
  bool logarithmic;
};

/// The range sample_in draws from.
SampleRange sample_range(const Interval& domain);

/// n points evenly spaced (logarithmically on half-lines) over sample_range.
std::vector<double> sample_grid(const Interval& domain, std::size_t n);

/// A random point well inside `domain`: log-uniform on [0.05, 20] for
/// positive half-lines, uniform on [-10, 10] for the real line, otherwise
/// uniform on the middle of the interval clipped to those ranges.
double sample_in(const Interval& domain, RandomStream& rng);

/// n independent sample_in draws.
std::vector<double> sample_vector(const Interval& domain, std::size_t n, RandomStream& rng);

/// max(1, max |x_i|).
double scale_of(const std::vector<double>& x);

}  // namespace meanx
