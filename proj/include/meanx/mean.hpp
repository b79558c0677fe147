#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "meanx/generator.hpp"
#include "meanx/interval.hpp"
#include "meanx/iteration.hpp"

namespace meanx {

/// Declared properties of a mean. For the built-in families they are derived
/// from the parameters; for custom means they are whatever the caller claims
/// (see verify_flags).
struct MeanFlags {
  bool symmetric = false;
  bool strict = false;
  bool monotone = false;
  bool homogeneous = false;

  friend bool operator==(const MeanFlags&, const MeanFlags&) = default;
};

namespace detail {
struct MeanNode;
}

struct PowerMean;
struct QuasiArithmeticMean;
struct GiniMean;
struct ConjugateMean;
struct CustomMean;
struct ExtendedMean;

/// Closed description of a mean: a family with parameters, a conjugation,
/// an iterative extension, or a black-box evaluator.
///
/// Descriptors are immutable and cheap to copy; copies share state and may be
/// used from several threads at once.
class MeanDescriptor {
 public:
  using Kind = std::variant<PowerMean, QuasiArithmeticMean, GiniMean, ConjugateMean, CustomMean,
                            ExtendedMean>;
  using Evaluator = std::function<double(std::span<const double>)>;

  /// P_r. Domain (0, inf) for r <= 0, [0, inf) for r > 0, the real line for r = 1.
  static MeanDescriptor power(double r);
  static MeanDescriptor quasi_arithmetic(GeneratorDescriptor gen);
  /// Gini mean G_{r,s} on (0, inf).
  static MeanDescriptor gini(double r, double s);
  /// phi^{-1}(base(phi(x_1), ..., phi(x_p))), on the generator's domain.
  static MeanDescriptor conjugate(MeanDescriptor base, GeneratorDescriptor gen);
  /// `arity` empty means variadic.
  static MeanDescriptor custom(std::string name, Evaluator evaluator,
                               std::optional<std::size_t> arity, Interval domain,
                               MeanFlags declared);
  /// Iterative beta-invariant extension of the bivariate restriction of base.
  static MeanDescriptor extended(MeanDescriptor base);

  const Kind& kind() const noexcept;
  const MeanFlags& flags() const noexcept;
  const Interval& domain() const noexcept;
  /// Fixed arity, or empty for variadic means.
  std::optional<std::size_t> arity() const noexcept;
  bool accepts_arity(std::size_t n) const noexcept;

  /// The kind payload if it holds a T, else nullptr.
  template <class T>
  const T* as() const noexcept;

  /// Structural equality; custom evaluators compare by identity.
  friend bool operator==(const MeanDescriptor& a, const MeanDescriptor& b);

 private:
  explicit MeanDescriptor(std::shared_ptr<const detail::MeanNode> node);

  std::shared_ptr<const detail::MeanNode> node_;
};

struct PowerMean {
  double r;
};

struct QuasiArithmeticMean {
  GeneratorDescriptor gen;
};

struct GiniMean {
  double r;
  double s;
};

struct ConjugateMean {
  MeanDescriptor base;
  GeneratorDescriptor gen;
};

struct CustomMean {
  std::string name;
  MeanDescriptor::Evaluator evaluator;
  std::optional<std::size_t> arity;
};

struct ExtendedMean {
  MeanDescriptor base;
};

template <class T>
const T* MeanDescriptor::as() const noexcept {
  return std::get_if<T>(&kind());
}

/// Evaluates M at x.
///
/// Checks arity and domain, returns x_1 for constant vectors before touching
/// any generator, and clamps the result into [min(x), max(x)]. Extended
/// means use `cfg` for the fixed-point iteration.
///
/// Throws DomainError, ArityError, NumericalError, and for extended means
/// NotConverged or ResourceLimit.
double eval_mean(const MeanDescriptor& mean, std::span<const double> x,
                 const IterationConfig& cfg = {});
double eval_mean(const MeanDescriptor& mean, const PointVector& x,
                 const IterationConfig& cfg = {});

/// f^{-1}(mean of f(x_i)).
double eval_quasiarithmetic(const GeneratorDescriptor& gen, const PointVector& x);

/// phi^{-1}(M(phi(x_1), ..., phi(x_p))). DomainError when phi(x) leaves M's domain.
double conjugate_eval(const MeanDescriptor& base, const GeneratorDescriptor& gen,
                      const PointVector& x, const IterationConfig& cfg = {});

/// Raw family kernels, without domain checks or clamping.
namespace kernels {
double power_mean(double r, std::span<const double> x);
double gini_mean(double r, double s, std::span<const double> x);
double quasi_arithmetic(const GeneratorDescriptor& gen, std::span<const double> x);
/// Two-argument forms; power_mean and gini_mean route n == 2 through these.
double power_mean2(double r, double a, double b);
double gini_mean2(double r, double s, double a, double b);
}  // namespace kernels

}  // namespace meanx
