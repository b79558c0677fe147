#include "meanx/interval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "meanx/errors.hpp"
#include "meanx/format.hpp"

namespace meanx {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string bound_text(double v) {
  if (v == kInf) return "+inf";
  return format_real(v);
}
}  // namespace

Interval::Interval(double lo, double hi, bool requires_positive)
    : lo_(lo), hi_(hi), requires_positive_(requires_positive) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw std::invalid_argument("Interval requires lo < hi");
  }
  if (requires_positive && lo < 0.0) {
    throw std::invalid_argument("Interval: requires_positive needs lo >= 0");
  }
}

Interval Interval::real_line() { return {-kInf, kInf, false}; }
Interval Interval::positive() { return {0.0, kInf, true}; }
Interval Interval::non_negative() { return {0.0, kInf, false}; }

bool Interval::contains_all(std::span<const double> xs) const noexcept {
  return std::all_of(xs.begin(), xs.end(), [this](double v) { return contains(v); });
}

std::string Interval::to_string() const {
  const bool open_left = requires_positive_ && lo_ == 0.0;
  return std::string(open_left || lo_ == -kInf ? "(" : "[") + bound_text(lo_) + ", " +
         bound_text(hi_) + (hi_ == kInf ? ")" : "]");
}

PointVector::PointVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ArityError("PointVector must have at least one entry");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("PointVector entries must be finite");
  }
}

PointVector::PointVector(std::initializer_list<double> values)
    : PointVector(std::vector<double>(values)) {}

double PointVector::min() const { return *std::min_element(values_.begin(), values_.end()); }
double PointVector::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool PointVector::is_constant() const {
  return std::all_of(values_.begin(), values_.end(),
                     [first = values_.front()](double v) { return v == first; });
}

PointVector PointVector::without(std::size_t j) const {
  if (j >= values_.size()) throw IndexError("PointVector::without: index out of range");
  if (values_.size() == 1) throw ArityError("cannot drop the only coordinate");
  std::vector<double> out;
  out.reserve(values_.size() - 1);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i != j) out.push_back(values_[i]);
  }
  return PointVector(std::move(out));
}

}  // namespace meanx
