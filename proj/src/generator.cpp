#include "meanx/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace meanx {

namespace {

// Interior sample points used to vet custom generators.
std::array<double, 16> probe_points(const Interval& d) {
  std::array<double, 16> pts{};
  const double lo = d.lo();
  const double hi = d.hi();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(pts.size());
    if (std::isfinite(lo) && std::isfinite(hi)) {
      pts[k] = lo + (hi - lo) * u;
    } else if (std::isfinite(lo)) {
      pts[k] = lo + std::ldexp(1.0, static_cast<int>(k) - 8);
    } else if (std::isfinite(hi)) {
      pts[k] = hi - std::ldexp(1.0, 7 - static_cast<int>(k));
    } else {
      pts[k] = std::ldexp(1.0, static_cast<int>(k % 8)) * (k < 8 ? -1.0 : 1.0);
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

GeneratorDescriptor::GeneratorDescriptor(Kind kind, Interval domain, bool increasing)
    : kind_(std::make_shared<const Kind>(std::move(kind))),
      domain_(domain),
      increasing_(increasing) {}

GeneratorDescriptor GeneratorDescriptor::power(double r) {
  if (!std::isfinite(r)) throw std::invalid_argument("power generator exponent must be finite");
  return {PowerGen{r}, Interval::positive(), r >= 0.0};
}

GeneratorDescriptor GeneratorDescriptor::exp(double a) {
  if (!std::isfinite(a) || a == 0.0) {
    throw std::invalid_argument("exponential generator needs a finite nonzero rate");
  }
  return {ExpGen{a}, Interval::real_line(), a > 0.0};
}

GeneratorDescriptor GeneratorDescriptor::custom(std::string name,
                                                std::function<double(double)> forward,
                                                std::function<double(double)> inverse,
                                                Interval domain, bool increasing) {
  if (!forward || !inverse) throw std::invalid_argument("custom generator needs both maps");
  const auto pts = probe_points(domain);
  double prev = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double t = pts[k];
    const double y = forward(t);
    if (!std::isfinite(y)) throw std::invalid_argument("custom generator: non-finite forward value");
    if (k > 0 && (increasing ? !(y > prev) : !(y < prev))) {
      throw std::invalid_argument("custom generator '" + name +
                                  "' is not strictly monotone in the declared direction");
    }
    const double back = inverse(y);
    if (std::abs(back - t) > 1e-12 * std::max(std::abs(t), 1.0)) {
      throw std::invalid_argument("custom generator '" + name + "': inverse(forward(t)) != t");
    }
    prev = y;
  }
  return {CustomGen{std::move(name), std::move(forward), std::move(inverse), domain, increasing},
          domain, increasing};
}

double GeneratorDescriptor::forward(double t) const {
  return std::visit(
      [t](const auto& g) -> double {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, PowerGen>) {
          return g.r == 0.0 ? std::log(t) : std::pow(t, g.r);
        } else if constexpr (std::is_same_v<G, ExpGen>) {
          return std::exp(g.a * t);
        } else {
          return g.forward(t);
        }
      },
      *kind_);
}

double GeneratorDescriptor::inverse(double y) const {
  return std::visit(
      [y](const auto& g) -> double {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, PowerGen>) {
          return g.r == 0.0 ? std::exp(y) : std::pow(y, 1.0 / g.r);
        } else if constexpr (std::is_same_v<G, ExpGen>) {
          return std::log(y) / g.a;
        } else {
          return g.inverse(y);
        }
      },
      *kind_);
}

bool operator==(const GeneratorDescriptor& a, const GeneratorDescriptor& b) {
  if (a.kind_ == b.kind_) return true;
  if (const auto* pa = a.as_power()) {
    const auto* pb = b.as_power();
    return pb != nullptr && *pa == *pb;
  }
  if (const auto* ea = a.as_exp()) {
    const auto* eb = b.as_exp();
    return eb != nullptr && *ea == *eb;
  }
  return false;
}

}  // namespace meanx
