#include "meanx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "meanx/descriptor_io.hpp"
#include "meanx/errors.hpp"
#include "meanx/extension.hpp"
#include "meanx/flags.hpp"
#include "meanx/random.hpp"
#include "meanx/sampling.hpp"

namespace meanx {

namespace {

// Accumulates one property over many samples; evaluation errors count as failures.
class Property {
 public:
  Property(std::string name, double tolerance) : tol_(tolerance) { res_.name = std::move(name); }

  void sample(const std::vector<double>& x, const std::function<double()>& residual) {
    ++res_.samples;
    double r = 0.0;
    try {
      r = residual();
    } catch (const MeanError& e) {
      r = std::numeric_limits<double>::infinity();
      if (res_.note.empty()) res_.note = e.what();
    }
    if (r > res_.max_residual || std::isnan(r)) {
      res_.max_residual = r;
      if (r > tol_ || std::isnan(r)) res_.witness = x;
    }
    if (r > tol_ || std::isnan(r)) res_.passed = false;
  }

  PropertyResult take() { return std::move(res_); }

 private:
  double tol_;
  PropertyResult res_;
};

MeanDescriptor bivariate_base(const MeanDescriptor& mean) {
  if (const auto* e = mean.as<ExtendedMean>()) return e->base;
  return mean;
}

std::vector<double> distinct(const Interval& dom, std::size_t n, RandomStream& rng) {
  for (;;) {
    auto x = sample_vector(dom, n, rng);
    if (std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) != x.end()) return x;
  }
}

double eval(const MeanDescriptor& m, const std::vector<double>& x, const IterationConfig& cfg) {
  return eval_mean(m, std::span<const double>(x), cfg);
}

// A generator that reproduces the base as a quasiarithmetic mean, if it is one.
std::optional<GeneratorDescriptor> own_generator(const MeanDescriptor& base) {
  if (const auto* p = base.as<PowerMean>()) return GeneratorDescriptor::power(p->r);
  if (const auto* q = base.as<QuasiArithmeticMean>()) return q->gen;
  if (const auto* g = base.as<GiniMean>()) {
    if (g->r == 0.0 || g->s == 0.0) return GeneratorDescriptor::power(g->r + g->s);
  }
  return std::nullopt;
}

void flags_suite(const MeanDescriptor& mean, const SuiteOptions& o, SuiteReport& rep) {
  const FlagReport fr = verify_flags(mean, o.samples, o.seed, o.tolerance, o.cfg);
  for (const auto& c : fr.checks) {
    PropertyResult p;
    p.name = c.flag;
    p.samples = c.samples;
    p.max_residual = c.max_residual;
    p.passed = c.consistent();
    p.witness = c.x;
    p.note = c.declared ? (c.holds ? "declared, no counterexample" : "declared, counterexample found")
                        : (c.holds ? "not declared, no counterexample" : "not declared, fails");
    if (!c.note.empty()) p.note += ": " + c.note;
    rep.properties.push_back(std::move(p));
  }
}

void extension_suite(const MeanDescriptor& mean, const SuiteOptions& o, SuiteReport& rep) {
  const MeanDescriptor base = bivariate_base(mean);
  const MeanDescriptor ext = MeanDescriptor::extended(base);
  const Interval& dom = ext.domain();
  const IterationConfig& cfg = o.cfg;
  const RandomStream root(o.seed);
  auto arity_of = [](std::size_t k) { return 3 + k % 2; };
  auto scale = [](const std::vector<double>& x) { return scale_of(x); };

  {
    Property p("symmetry", o.tolerance);
    RandomStream rng = root.derive("symmetry");
    for (std::size_t k = 0; k < o.samples; ++k) {
      const auto x = distinct(dom, arity_of(k), rng);
      const auto perm = rng.permutation(x.size());
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[perm[i]];
      p.sample(x, [&] { return std::abs(eval(ext, x, cfg) - eval(ext, y, cfg)) / scale(x); });
    }
    rep.properties.push_back(p.take());
  }
  {
    // Strict bounds: the residual is positive when the value touches or leaves (min, max).
    Property p("strict_bounds", 0.0);
    RandomStream rng = root.derive("bounds");
    for (std::size_t k = 0; k < o.samples; ++k) {
      const auto x = distinct(dom, arity_of(k), rng);
      p.sample(x, [&] {
        const double v = eval(ext, x, cfg);
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        return (*lo < v && v < *hi) ? 0.0 : 1.0;
      });
    }
    rep.properties.push_back(p.take());
  }
  if (base.flags().monotone) {
    Property p("monotonicity", o.tolerance);
    RandomStream rng = root.derive("monotone");
    for (std::size_t k = 0; k < o.samples; ++k) {
      auto x = sample_vector(dom, arity_of(k), rng);
      auto y = x;
      const std::size_t j = rng.index(0, x.size() - 1);
      const double other = sample_in(dom, rng);
      y[j] = std::max(x[j], other);
      x[j] = std::min(x[j], other);
      p.sample(x, [&] { return (eval(ext, x, cfg) - eval(ext, y, cfg)) / scale(y); });
    }
    rep.properties.push_back(p.take());
  }
  if (base.flags().homogeneous && dom.lo() >= 0.0 &&
      dom.hi() == std::numeric_limits<double>::infinity()) {
    Property p("homogeneity", o.tolerance);
    RandomStream rng = root.derive("homogeneous");
    for (std::size_t k = 0; k < o.samples; ++k) {
      const auto x = distinct(dom, arity_of(k), rng);
      const double lambda = rng.log_uniform(0.1, 10.0);
      auto y = x;
      for (double& v : y) v *= lambda;
      p.sample(x, [&] {
        return std::abs(eval(ext, y, cfg) - lambda * eval(ext, x, cfg)) / scale(y);
      });
    }
    rep.properties.push_back(p.take());
  }
  {
    // K(beta(x)) = K(x) for the invariant mean K of the barycentric operator of M.
    Property p("invariance", o.tolerance);
    RandomStream rng = root.derive("invariance");
    for (std::size_t k = 0; k < o.samples; ++k) {
      const auto x = distinct(dom, 3, rng);
      p.sample(x, [&] {
        const PointVector px(x);
        const double kx = beta_extension_eval(base, px, cfg).value;
        const PointVector bx = barycentric_apply(base, px, cfg);
        return std::abs(beta_extension_eval(base, bx, cfg).value - kx) / scale(x);
      });
    }
    rep.properties.push_back(p.take());
  }
  if (const auto gen = own_generator(base)) {
    Property p("quasiarithmetic_fixed_point", o.tolerance);
    RandomStream rng = root.derive("fixed_point");
    for (std::size_t k = 0; k < o.samples; ++k) {
      const auto x = distinct(dom, arity_of(k), rng);
      p.sample(x, [&] {
        const double qa = eval_quasiarithmetic(*gen, PointVector(x));
        return std::abs(eval(ext, x, cfg) - qa) / std::max(1.0, std::abs(qa));
      });
    }
    rep.properties.push_back(p.take());
  }
  if (const auto* pw = base.as<PowerMean>(); pw != nullptr && pw->r >= 1.0) {
    Property p("convexity", o.tolerance);
    RandomStream rng = root.derive("convexity");
    for (std::size_t k = 0; k < o.samples; ++k) {
      const std::size_t n = arity_of(k);
      const auto x = sample_vector(dom, n, rng);
      const auto y = sample_vector(dom, n, rng);
      const double t = rng.uniform(0.0, 1.0);
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = t * x[i] + (1 - t) * y[i];
      p.sample(x, [&] {
        const double lhs = eval(ext, z, cfg);
        const double rhs = t * eval(ext, x, cfg) + (1 - t) * eval(ext, y, cfg);
        return (lhs - rhs) / std::max(scale(x), scale(y));
      });
    }
    rep.properties.push_back(p.take());
  }
}

void conjugacy_suite(const MeanDescriptor& mean, const SuiteOptions& o, SuiteReport& rep) {
  const MeanDescriptor base = bivariate_base(mean);
  const GeneratorDescriptor gen = o.gen.value_or(GeneratorDescriptor::power(2.0));
  RandomStream rng = RandomStream(o.seed).derive("conjugacy");
  Property p("conjugacy[" + to_string(gen) + "]", o.tolerance);
  for (std::size_t k = 0; k < o.samples; ++k) {
    std::vector<double> x(3 + k % 2);
    for (double& v : x) {
      // Points whose image under the generator lies in the base domain.
      for (int attempt = 0;; ++attempt) {
        v = sample_in(gen.domain(), rng);
        if (base.domain().contains(gen.forward(v))) break;
        if (attempt == 1000) {
          throw DomainError("generator " + to_string(gen) + " maps no sampled point into " +
                            base.domain().to_string());
        }
      }
    }
    p.sample(x, [&] { return extension_conjugacy_check(base, gen, PointVector(x), o.cfg) / scale_of(x); });
  }
  rep.properties.push_back(p.take());
}

void envelope_suite(const MeanDescriptor& mean, const SuiteOptions& o, SuiteReport& rep) {
  const RandomStream root(o.seed);
  MembershipOptions mo;
  mo.seed = o.seed;
  {
    Property p("sandwich", o.tolerance);
    const MembershipOracle oracle(mean, mo, o.cfg);
    RandomStream rng = root.derive("sandwich");
    const Interval dom(std::max(mean.domain().lo(), 0.0), mean.domain().hi(),
                       mean.domain().lo() <= 0.0);
    for (std::size_t k = 0; k < o.samples; ++k) {
      std::size_t n = 2 + k % 2;
      if (!mean.accepts_arity(n)) n = *mean.arity();
      const PointVector x(sample_vector(dom, n, rng));
      p.sample(x.values(), [&] {
        const double lower = envelope_estimate(oracle, x, EnvelopeKind::local_lower, o.window).value;
        const double upper = envelope_estimate(oracle, x, EnvelopeKind::local_upper, o.window).value;
        const double v = eval_mean(mean, x, o.cfg);
        return std::max(lower - v, v - upper) / scale_of(x.values());
      });
    }
    rep.properties.push_back(p.take());
  }
  if (!mean.accepts_arity(2)) return;
  const MeanDescriptor base = bivariate_base(mean);
  {
    Property p("envelope_ordering", o.tolerance);
    RandomStream rng = root.derive("ordering");
    const Interval dom(std::max(base.domain().lo(), 0.0), base.domain().hi(),
                       base.domain().lo() <= 0.0);
    const std::size_t points = std::min<std::size_t>(o.samples, 10);
    for (std::size_t k = 0; k < points; ++k) {
      const PointVector x(sample_vector(dom, 3, rng));
      p.sample(x.values(), [&] {
        return envelope_ordering_check(base, x, o.window, mo, o.cfg).max_violation;
      });
    }
    rep.properties.push_back(p.take());
  }
  const MeanFlags& f = base.flags();
  if (f.symmetric && f.strict && f.monotone) {
    const TransferReport tr = transfer_theorem_check(base, o.window, 32, o.seed, o.cfg);
    PropertyResult a;
    a.name = "transfer_membership";
    a.samples = tr.membership_checked;
    a.max_residual = static_cast<double>(tr.membership_mismatches - tr.membership_boundary);
    a.passed = tr.membership_mismatches == tr.membership_boundary;
    a.witness = tr.mismatch_r;
    if (tr.membership_boundary > 0) {
      a.note = std::to_string(tr.membership_boundary) + " boundary mismatches";
    }
    rep.properties.push_back(std::move(a));
    PropertyResult c;
    c.name = "transfer_boundary";
    c.samples = 1;
    c.passed = tr.boundaries_agree;
    if (tr.global_boundary_r && tr.local_boundary_r) {
      c.max_residual = std::abs(*tr.global_boundary_r - *tr.local_boundary_r);
    }
    rep.properties.push_back(std::move(c));
    PropertyResult d;
    d.name = "transfer_chain";
    d.samples = tr.chain_checked;
    d.max_residual = tr.max_chain_violation;
    d.passed = tr.chain_violations == 0;
    d.witness = tr.chain_witness;
    rep.properties.push_back(std::move(d));
  }
}

}  // namespace

std::string to_string(Suite suite) {
  switch (suite) {
    case Suite::flags:
      return "flags";
    case Suite::extension:
      return "extension";
    case Suite::conjugacy:
      return "conjugacy";
    case Suite::envelope:
      return "envelope";
  }
  return "unknown";
}

Suite parse_suite(const std::string& text) {
  for (auto s : {Suite::flags, Suite::extension, Suite::conjugacy, Suite::envelope}) {
    if (to_string(s) == text) return s;
  }
  throw ParseError("unknown suite \"" + text + "\"");
}

bool SuiteReport::passed() const noexcept {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.passed; });
}

SuiteReport verify_suite(const MeanDescriptor& mean, Suite suite, const SuiteOptions& options) {
  if (options.samples == 0) throw std::invalid_argument("a suite needs at least one sample");
  options.cfg.validate();
  SuiteReport rep;
  rep.suite = suite;
  rep.mean = to_string(mean);
  switch (suite) {
    case Suite::flags:
      flags_suite(mean, options, rep);
      break;
    case Suite::extension:
      extension_suite(mean, options, rep);
      break;
    case Suite::conjugacy:
      conjugacy_suite(mean, options, rep);
      break;
    case Suite::envelope:
      envelope_suite(mean, options, rep);
      break;
  }
  return rep;
}

}  // namespace meanx
