#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace meanx {

/// A subinterval of the extended real line.
///
/// Entries are admitted on the closed range [lo, hi]; when `requires_positive`
/// is set and lo == 0 the left end is open, which is how (0, +inf) is spelled.
class Interval {
 public:
  Interval(double lo, double hi, bool requires_positive = false);

  static Interval real_line();
  /// (0, +inf)
  static Interval positive();
  /// [0, +inf)
  static Interval non_negative();

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool requires_positive() const noexcept { return requires_positive_; }

  bool contains(double v) const noexcept {
    if (!(v >= lo_ && v <= hi_)) return false;
    return !(requires_positive_ && lo_ == 0.0 && v <= 0.0);
  }
  bool contains_all(std::span<const double> xs) const noexcept;

  std::string to_string() const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
  bool requires_positive_;
};

/// A non-empty vector of finite reals, the argument of a p-variable mean.
class PointVector {
 public:
  PointVector(std::vector<double> values);
  PointVector(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> span() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double min() const;
  double max() const;
  bool is_constant() const;

  /// The vector with coordinate j (0-based) removed.
  PointVector without(std::size_t j) const;

  friend bool operator==(const PointVector&, const PointVector&) = default;

 private:
  std::vector<double> values_;
};

}  // namespace meanx
