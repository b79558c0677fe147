#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace meanx {

/// Reproducible random streams. Each stream is a std::mt19937_64 seeded from a
/// 64-bit key; derive() mixes a tag into the key so that sub-tasks get
/// independent streams that do not depend on how much the parent has drawn.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed);

  RandomStream derive(std::string_view tag) const;
  RandomStream derive(std::uint64_t index) const;

  std::uint64_t key() const noexcept { return key_; }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// exp of a uniform draw on [ln lo, ln hi); lo > 0.
  double log_uniform(double lo, double hi);
  /// Uniform integer on [lo, hi].
  std::size_t index(std::size_t lo, std::size_t hi);
  /// A random permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace meanx
