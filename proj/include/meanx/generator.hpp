#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>

#include "meanx/interval.hpp"

namespace meanx {

/// pi_r(t) = t^r for r != 0 and pi_0(t) = ln t, on (0, +inf).
struct PowerGen {
  double r;
  friend bool operator==(const PowerGen&, const PowerGen&) = default;
};

/// t -> exp(a t) on the real line, a != 0.
struct ExpGen {
  double a;
  friend bool operator==(const ExpGen&, const ExpGen&) = default;
};

struct CustomGen {
  std::string name;
  std::function<double(double)> forward;
  std::function<double(double)> inverse;
  Interval domain;
  bool increasing;
};

/// A continuous strictly monotone generator phi with its inverse.
///
/// Immutable; copies share the underlying state.
class GeneratorDescriptor {
 public:
  using Kind = std::variant<PowerGen, ExpGen, CustomGen>;

  static GeneratorDescriptor power(double r);
  static GeneratorDescriptor log() { return power(0.0); }
  static GeneratorDescriptor exp(double a);
  /// Throws std::invalid_argument when sampled points show the pair is not a
  /// strictly monotone bijection with inverse(forward(t)) == t to 1e-12.
  static GeneratorDescriptor custom(std::string name, std::function<double(double)> forward,
                                    std::function<double(double)> inverse, Interval domain,
                                    bool increasing);

  const Kind& kind() const noexcept { return *kind_; }
  const Interval& domain() const noexcept { return domain_; }
  bool increasing() const noexcept { return increasing_; }

  double forward(double t) const;
  double inverse(double y) const;

  const PowerGen* as_power() const noexcept { return std::get_if<PowerGen>(kind_.get()); }
  const ExpGen* as_exp() const noexcept { return std::get_if<ExpGen>(kind_.get()); }

  /// Custom generators compare equal only to copies of themselves.
  friend bool operator==(const GeneratorDescriptor& a, const GeneratorDescriptor& b);

 private:
  GeneratorDescriptor(Kind kind, Interval domain, bool increasing);

  std::shared_ptr<const Kind> kind_;
  Interval domain_;
  bool increasing_;
};

}  // namespace meanx
