#include "meanx/mean.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "meanx/errors.hpp"
#include "meanx/extension.hpp"
#include "meanx/format.hpp"

namespace meanx {

namespace detail {
struct MeanNode {
  MeanDescriptor::Kind kind;
  MeanFlags flags;
  Interval domain;
  std::optional<std::size_t> arity;
};
}  // namespace detail

namespace {

// Above this exponent magnitude, or spread of inputs, power sums are done in log space.
constexpr double kLogSpaceExponent = 30.0;
constexpr double kLogSpaceSpread = 1e10;
// For |r - s| below this the ratio of power sums loses too many digits when
// raised to 1/(r - s); the expm1 form is used instead.
constexpr double kDirectGiniGap = 0.01;

// t^r with exact branches for the exponents that appear most often.
double signed_pow(double t, double r) {
  if (r == 1.0) return t;
  if (r == 2.0) return t * t;
  if (r == -1.0) return 1.0 / t;
  if (r == -2.0) return 1.0 / (t * t);
  if (r == 3.0) return t * t * t;
  if (r == 0.5) return std::sqrt(t);
  if (r == -0.5) return 1.0 / std::sqrt(t);
  return std::pow(t, r);
}

// Inverse of t -> t^r on (0, inf).
double signed_root(double v, double r) {
  if (r == 1.0) return v;
  if (r == 2.0) return std::sqrt(v);
  if (r == -1.0) return 1.0 / v;
  if (r == -2.0) return 1.0 / std::sqrt(v);
  if (r == 3.0) return std::cbrt(v);
  if (r == 0.5) return v * v;
  if (r == -0.5) return 1.0 / (v * v);
  return std::pow(v, 1.0 / r);
}

bool wide_spread(std::span<const double> x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *lo > 0.0 && *hi / *lo > kLogSpaceSpread;
}

// log(sum_i exp(c * ln x_i)), tolerating x_i == 0 when c > 0.
double log_power_sum(double c, std::span<const double> x) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : x) top = std::max(top, c * std::log(v));
  double acc = 0.0;
  for (double v : x) acc += std::exp(c * std::log(v) - top);
  return top + std::log(acc);
}

// Softmax weights w_i proportional to x_i^c, written into w.
void power_weights(double c, std::span<const double> x, std::span<double> w) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : x) top = std::max(top, c * std::log(v));
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    w[i] = std::exp(c * std::log(x[i]) - top);
    total += w[i];
  }
  for (double& wi : w) wi /= total;
}

class Scratch {
 public:
  explicit Scratch(std::size_t n) : n_(n) {
    if (n > stack_.size()) heap_.resize(n);
  }
  std::span<double> span() { return n_ <= stack_.size() ? std::span(stack_.data(), n_) : std::span(heap_); }

 private:
  std::size_t n_;
  std::array<double, 16> stack_{};
  std::vector<double> heap_;
};

MeanFlags conjugate_flags(const MeanFlags& base, const GeneratorDescriptor& gen) {
  MeanFlags f = base;
  // A strictly monotone phi, increasing or decreasing, preserves monotonicity:
  // a decreasing phi reverses the order twice.
  const auto* pg = gen.as_power();
  f.homogeneous = base.homogeneous && pg != nullptr && pg->r != 0.0;
  return f;
}

Interval power_domain(double r) {
  if (r == 1.0) return Interval::real_line();
  if (r > 0.0) return Interval::non_negative();
  return Interval::positive();
}

}  // namespace

namespace kernels {

double power_mean2(double r, double a, double b) {
  if (r == 0.0) return std::sqrt(a) * std::sqrt(b);
  if (r == 1.0) {
    const double m = (a + b) / 2;
    return std::isfinite(m) ? m : a / 2 + b / 2;
  }
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (std::abs(r) <= kLogSpaceExponent && !(lo > 0.0 && hi / lo > kLogSpaceSpread)) {
    const double out = signed_root((signed_pow(a, r) + signed_pow(b, r)) / 2, r);
    if (std::isfinite(out) && out > 0.0) return out;
  }
  const std::array<double, 2> x{a, b};
  return std::exp((log_power_sum(r, x) - std::log(2.0)) / r);
}

double gini_mean2(double r, double s, double a, double b) {
  if (r < s) std::swap(r, s);
  const double delta = r - s;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (delta >= kDirectGiniGap && std::max(std::abs(r), std::abs(s)) <= kLogSpaceExponent &&
      hi / lo <= kLogSpaceSpread) {
    const double num = signed_pow(a, r) + signed_pow(b, r);
    const double den = signed_pow(a, s) + signed_pow(b, s);
    const double out = signed_root(num / den, delta);
    if (std::isfinite(out) && out > 0.0) return out;
  }
  const std::array<double, 2> x{a, b};
  return gini_mean(r, s, x);
}

double power_mean(double r, std::span<const double> x) {
  if (x.size() == 2) return power_mean2(r, x[0], x[1]);
  const auto n = static_cast<double>(x.size());
  if (r == 0.0) {
    double s = 0.0;
    for (double v : x) s += std::log(v);
    return std::exp(s / n);
  }
  if (r == 1.0) {
    double s = 0.0;
    for (double v : x) s += v;
    if (std::isfinite(s)) return s / n;
    s = 0.0;
    for (double v : x) s += v / n;
    return s;
  }
  if (std::abs(r) <= kLogSpaceExponent && !wide_spread(x)) {
    double s = 0.0;
    for (double v : x) s += signed_pow(v, r);
    const double out = signed_root(s / n, r);
    if (std::isfinite(out) && out > 0.0) return out;
  }
  return std::exp((log_power_sum(r, x) - std::log(n)) / r);
}

double gini_mean(double r, double s, std::span<const double> x) {
  // Ordering the parameters makes G_{r,s} == G_{s,r} bit for bit.
  if (r < s) std::swap(r, s);
  const std::size_t n = x.size();
  Scratch buf(n);
  auto w = buf.span();
  if (r == s) {
    power_weights(r, x, w);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::log(x[i]);
    return std::exp(acc);
  }
  const double delta = r - s;
  if (delta < kDirectGiniGap) {
    // Near the diagonal: ln G = log1p(sum_i w_i expm1(delta ln x_i)) / delta with
    // w_i proportional to x_i^s. Stable as delta -> 0.
    power_weights(s, x, w);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::expm1(delta * std::log(x[i]));
    return std::exp(std::log1p(acc) / delta);
  }
  if (std::max(std::abs(r), std::abs(s)) <= kLogSpaceExponent && !wide_spread(x)) {
    double num = 0.0;
    double den = 0.0;
    for (double v : x) {
      num += signed_pow(v, r);
      den += signed_pow(v, s);
    }
    const double out = signed_root(num / den, delta);
    if (std::isfinite(out) && out > 0.0) return out;
  }
  return std::exp((log_power_sum(r, x) - log_power_sum(s, x)) / delta);
}

double quasi_arithmetic(const GeneratorDescriptor& gen, std::span<const double> x) {
  if (const auto* pg = gen.as_power()) return power_mean(pg->r, x);
  const auto n = static_cast<double>(x.size());
  if (const auto* eg = gen.as_exp()) {
    double top = -std::numeric_limits<double>::infinity();
    for (double v : x) top = std::max(top, eg->a * v);
    double acc = 0.0;
    for (double v : x) acc += std::exp(eg->a * v - top);
    return (top + std::log(acc) - std::log(n)) / eg->a;
  }
  double s = 0.0;
  for (double v : x) {
    const double fv = gen.forward(v);
    if (!std::isfinite(fv)) throw NumericalError("generator value is not finite");
    s += fv;
  }
  return gen.inverse(s / n);
}

}  // namespace kernels

MeanDescriptor::MeanDescriptor(std::shared_ptr<const detail::MeanNode> node)
    : node_(std::move(node)) {}

MeanDescriptor MeanDescriptor::power(double r) {
  if (!std::isfinite(r)) throw std::invalid_argument("power mean exponent must be finite");
  return MeanDescriptor(std::make_shared<const detail::MeanNode>(
      detail::MeanNode{PowerMean{r}, MeanFlags{true, true, true, true}, power_domain(r), {}}));
}

MeanDescriptor MeanDescriptor::quasi_arithmetic(GeneratorDescriptor gen) {
  const bool homogeneous = gen.as_power() != nullptr;
  const Interval domain = gen.domain();
  return MeanDescriptor(std::make_shared<const detail::MeanNode>(
      detail::MeanNode{QuasiArithmeticMean{std::move(gen)},
                       MeanFlags{true, true, true, homogeneous}, domain, {}}));
}

MeanDescriptor MeanDescriptor::gini(double r, double s) {
  if (!std::isfinite(r) || !std::isfinite(s)) {
    throw std::invalid_argument("Gini parameters must be finite");
  }
  return MeanDescriptor(std::make_shared<const detail::MeanNode>(detail::MeanNode{
      GiniMean{r, s}, MeanFlags{true, true, r * s <= 0.0, true}, Interval::positive(), {}}));
}

MeanDescriptor MeanDescriptor::conjugate(MeanDescriptor base, GeneratorDescriptor gen) {
  const MeanFlags flags = conjugate_flags(base.flags(), gen);
  const Interval domain = gen.domain();
  const auto arity = base.arity();
  return MeanDescriptor(std::make_shared<const detail::MeanNode>(detail::MeanNode{
      ConjugateMean{std::move(base), std::move(gen)}, flags, domain, arity}));
}

MeanDescriptor MeanDescriptor::custom(std::string name, Evaluator evaluator,
                                      std::optional<std::size_t> arity, Interval domain,
                                      MeanFlags declared) {
  if (!evaluator) throw std::invalid_argument("custom mean needs an evaluator");
  if (arity && *arity == 0) throw std::invalid_argument("custom mean arity must be >= 1");
  return MeanDescriptor(std::make_shared<const detail::MeanNode>(detail::MeanNode{
      CustomMean{std::move(name), std::move(evaluator), arity}, declared, domain, arity}));
}

MeanDescriptor MeanDescriptor::extended(MeanDescriptor base) {
  if (!base.accepts_arity(2)) {
    throw std::invalid_argument("extension needs a mean accepting two arguments");
  }
  const MeanFlags flags = base.flags();
  const Interval domain = base.domain();
  return MeanDescriptor(std::make_shared<const detail::MeanNode>(
      detail::MeanNode{ExtendedMean{std::move(base)}, flags, domain, {}}));
}

const MeanDescriptor::Kind& MeanDescriptor::kind() const noexcept { return node_->kind; }
const MeanFlags& MeanDescriptor::flags() const noexcept { return node_->flags; }
const Interval& MeanDescriptor::domain() const noexcept { return node_->domain; }
std::optional<std::size_t> MeanDescriptor::arity() const noexcept { return node_->arity; }

bool MeanDescriptor::accepts_arity(std::size_t n) const noexcept {
  return n >= 1 && (!node_->arity || *node_->arity == n);
}

bool operator==(const MeanDescriptor& a, const MeanDescriptor& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->kind.index() != b.node_->kind.index()) return false;
  return std::visit(
      [&b](const auto& ka) -> bool {
        using K = std::decay_t<decltype(ka)>;
        const auto& kb = std::get<K>(b.kind());
        if constexpr (std::is_same_v<K, PowerMean>) {
          return ka.r == kb.r;
        } else if constexpr (std::is_same_v<K, QuasiArithmeticMean>) {
          return ka.gen == kb.gen;
        } else if constexpr (std::is_same_v<K, GiniMean>) {
          return ka.r == kb.r && ka.s == kb.s;
        } else if constexpr (std::is_same_v<K, ConjugateMean>) {
          return ka.gen == kb.gen && ka.base == kb.base;
        } else if constexpr (std::is_same_v<K, ExtendedMean>) {
          return ka.base == kb.base;
        } else {
          return false;  // distinct custom nodes
        }
      },
      a.node_->kind);
}

double eval_mean(const MeanDescriptor& mean, std::span<const double> x, const IterationConfig& cfg) {
  const std::size_t n = x.size();
  if (!mean.accepts_arity(n)) {
    throw ArityError("mean does not accept " + std::to_string(n) + " arguments");
  }
  const Interval& dom = mean.domain();
  for (std::size_t i = 0; i < n; ++i) {
    if (!dom.contains(x[i])) {
      throw DomainError("entry " + std::to_string(i + 1) + " = " + format_real(x[i]) +
                        " lies outside " + dom.to_string());
    }
  }
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) return x[0];

  const double value = std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PowerMean>) {
          return kernels::power_mean(k.r, x);
        } else if constexpr (std::is_same_v<K, QuasiArithmeticMean>) {
          return kernels::quasi_arithmetic(k.gen, x);
        } else if constexpr (std::is_same_v<K, GiniMean>) {
          return kernels::gini_mean(k.r, k.s, x);
        } else if constexpr (std::is_same_v<K, ConjugateMean>) {
          Scratch buf(n);
          auto y = buf.span();
          for (std::size_t i = 0; i < n; ++i) {
            y[i] = k.gen.forward(x[i]);
            if (!std::isfinite(y[i])) throw NumericalError("generator value is not finite");
          }
          return k.gen.inverse(eval_mean(k.base, y, cfg));
        } else if constexpr (std::is_same_v<K, CustomMean>) {
          return k.evaluator(x);
        } else {
          return iterative_extension_value(k.base, x, cfg);
        }
      },
      mean.kind());

  if (!std::isfinite(value)) throw NumericalError("mean evaluation produced a non-finite value");
  return std::clamp(value, lo, hi);
}

double eval_mean(const MeanDescriptor& mean, const PointVector& x, const IterationConfig& cfg) {
  return eval_mean(mean, x.span(), cfg);
}

double eval_quasiarithmetic(const GeneratorDescriptor& gen, const PointVector& x) {
  return eval_mean(MeanDescriptor::quasi_arithmetic(gen), x);
}

double conjugate_eval(const MeanDescriptor& base, const GeneratorDescriptor& gen,
                      const PointVector& x, const IterationConfig& cfg) {
  return eval_mean(MeanDescriptor::conjugate(base, gen), x, cfg);
}

}  // namespace meanx
