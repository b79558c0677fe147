#include "meanx/flags.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "meanx/descriptor_io.hpp"
#include "meanx/errors.hpp"
#include "meanx/random.hpp"
#include "meanx/sampling.hpp"

namespace meanx {

namespace {

constexpr std::size_t kMaxSampledArity = 4;

std::size_t pick_arity(const MeanDescriptor& mean, RandomStream& rng) {
  if (const auto a = mean.arity()) return *a;
  return rng.index(2, kMaxSampledArity);
}

// Non-constant vector inside the domain.
std::vector<double> distinct_vector(const MeanDescriptor& mean, std::size_t n, RandomStream& rng) {
  for (;;) {
    auto x = sample_vector(mean.domain(), n, rng);
    if (std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) != x.end()) return x;
  }
}

class Checker {
 public:
  Checker(const MeanDescriptor& mean, FlagCheck& out, double tol, const IterationConfig& cfg)
      : mean_(mean), out_(out), tol_(tol), cfg_(cfg) {}

  double eval(const std::vector<double>& x) {
    return eval_mean(mean_, std::span<const double>(x), cfg_);
  }

  // Records a violation of size `excess` (already scaled); keeps the first witness.
  void violation(double excess, const std::vector<double>& x, const std::vector<double>& y = {}) {
    out_.max_residual = std::max(out_.max_residual, excess);
    if (out_.holds) {
      out_.holds = false;
      out_.x = x;
      out_.y = y;
    }
  }

  template <class F>
  void guarded(const std::vector<double>& x, F body) {
    ++out_.samples;
    try {
      body();
    } catch (const MeanError& e) {
      if (out_.holds) out_.note = e.what();
      violation(std::numeric_limits<double>::infinity(), x);
    }
  }

  double tol() const { return tol_; }

 private:
  const MeanDescriptor& mean_;
  FlagCheck& out_;
  double tol_;
  const IterationConfig& cfg_;
};

void check_symmetry(Checker& c, const MeanDescriptor& mean, std::size_t samples, RandomStream rng) {
  for (std::size_t k = 0; k < samples; ++k) {
    const auto x = distinct_vector(mean, pick_arity(mean, rng), rng);
    const auto perm = rng.permutation(x.size());
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[perm[i]];
    c.guarded(x, [&] {
      const double d = std::abs(c.eval(x) - c.eval(y)) / scale_of(x);
      if (d > c.tol()) c.violation(d, x, y);
    });
  }
}

void check_strictness(Checker& c, const MeanDescriptor& mean, std::size_t samples,
                      RandomStream rng) {
  for (std::size_t k = 0; k < samples; ++k) {
    const auto x = distinct_vector(mean, pick_arity(mean, rng), rng);
    c.guarded(x, [&] {
      const double v = c.eval(x);
      const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
      if (!(*lo < v && v < *hi)) c.violation(0.0, x);
    });
  }
}

// x precedes y when y is x with one coordinate moved up inside the domain.
void check_monotonicity(Checker& c, const MeanDescriptor& mean, std::size_t samples,
                        RandomStream rng) {
  const Interval& dom = mean.domain();
  for (std::size_t k = 0; k < samples; ++k) {
    auto x = sample_vector(dom, pick_arity(mean, rng), rng);
    auto y = x;
    const std::size_t j = rng.index(0, x.size() - 1);
    const double other = sample_in(dom, rng);
    y[j] = std::max(x[j], other);
    x[j] = std::min(x[j], other);
    c.guarded(x, [&] {
      const double d = (c.eval(x) - c.eval(y)) / scale_of(y);
      if (d > c.tol()) c.violation(d, x, y);
    });
  }
}

void check_homogeneity(Checker& c, FlagCheck& out, const MeanDescriptor& mean, std::size_t samples,
                       RandomStream rng) {
  const Interval& dom = mean.domain();
  const bool cone = dom.hi() == std::numeric_limits<double>::infinity() &&
                    (dom.lo() == 0.0 || dom.lo() == -std::numeric_limits<double>::infinity());
  if (!cone) {
    out.note = "domain is not closed under positive scaling";
    return;
  }
  for (std::size_t k = 0; k < samples; ++k) {
    const auto x = distinct_vector(mean, pick_arity(mean, rng), rng);
    const double lambda = rng.log_uniform(0.1, 10.0);
    auto y = x;
    for (double& v : y) v *= lambda;
    c.guarded(x, [&] {
      const double d = std::abs(c.eval(y) - lambda * c.eval(x)) / scale_of(y);
      if (d > c.tol()) c.violation(d, x, y);
    });
  }
}

}  // namespace

bool FlagReport::ok() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const FlagCheck& c) { return c.consistent(); });
}

const FlagCheck& FlagReport::check(const std::string& flag) const {
  for (const auto& c : checks) {
    if (c.flag == flag) return c;
  }
  throw std::out_of_range("no check named " + flag);
}

FlagReport verify_flags(const MeanDescriptor& mean, std::size_t samples, std::uint64_t seed,
                        double tolerance, const IterationConfig& cfg) {
  if (samples == 0) throw std::invalid_argument("verify_flags needs at least one sample");
  const RandomStream root(seed);
  const MeanFlags& f = mean.flags();
  FlagReport report;
  report.mean = to_string(mean);
  for (const auto& [name, declared] : {std::pair{"symmetric", f.symmetric},
                                       std::pair{"strict", f.strict},
                                       std::pair{"monotone", f.monotone},
                                       std::pair{"homogeneous", f.homogeneous}}) {
    FlagCheck c;
    c.flag = name;
    c.declared = declared;
    report.checks.push_back(std::move(c));
  }

  Checker sym(mean, report.checks[0], tolerance, cfg);
  check_symmetry(sym, mean, samples, root.derive("symmetric"));
  Checker strict(mean, report.checks[1], tolerance, cfg);
  check_strictness(strict, mean, samples, root.derive("strict"));
  Checker mono(mean, report.checks[2], tolerance, cfg);
  check_monotonicity(mono, mean, samples, root.derive("monotone"));
  Checker homo(mean, report.checks[3], tolerance, cfg);
  check_homogeneity(homo, report.checks[3], mean, samples, root.derive("homogeneous"));
  return report;
}

std::vector<MeanDescriptor> shipped_means() {
  std::vector<MeanDescriptor> out;
  for (double r : {-1.0, 0.0, 1.0, 2.0}) out.push_back(MeanDescriptor::power(r));
  out.push_back(MeanDescriptor::gini(1.0, -1.0));
  out.push_back(MeanDescriptor::gini(2.0, -1.0));
  out.push_back(MeanDescriptor::quasi_arithmetic(GeneratorDescriptor::exp(1.0)));
  out.push_back(MeanDescriptor::conjugate(MeanDescriptor::power(1.0), GeneratorDescriptor::power(2.0)));
  out.push_back(MeanDescriptor::extended(MeanDescriptor::gini(1.0, -1.0)));
  return out;
}

}  // namespace meanx
