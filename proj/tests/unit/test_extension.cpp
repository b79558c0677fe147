#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "meanx/errors.hpp"
#include "meanx/extension.hpp"
#include "meanx/random.hpp"

using namespace meanx;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<double> random_point(RandomStream& rng, std::size_t n) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.log_uniform(0.1, 10);
  return x;
}

const MeanDescriptor geometric_pairs = MeanDescriptor::gini(1, -1);

}  // namespace

TEST_CASE("extended_eval examples") {
  const std::vector<std::size_t> a{1, 1, 3};
  CHECK(extended_eval(MeanDescriptor::power(1), 3, a, PointVector{1, 2, 4}) == doctest::Approx(2.0));
  const std::vector<std::size_t> id{1, 2, 3};
  CHECK(extended_eval(MeanDescriptor::power(2), 3, id, PointVector{1, 2, 4}) ==
        eval_mean(MeanDescriptor::power(2), PointVector{1, 2, 4}));
  const std::vector<std::size_t> b{2, 4};
  CHECK(extended_eval(MeanDescriptor::power(0), 4, b, PointVector{1, 9, 5, 4}) ==
        doctest::Approx(6.0).epsilon(1e-15));
  const std::vector<std::size_t> bad{5};
  CHECK_THROWS_AS(extended_eval(MeanDescriptor::power(0), 4, bad, PointVector{1, 9, 5, 4}), IndexError);
}

TEST_CASE("apply_mapping examples") {
  const auto arith = AveragingMapping::barycentric(MeanDescriptor::power(1), 2);
  CHECK(apply_mapping(arith, PointVector{0, 3, 3}) == PointVector{3, 1.5, 1.5});
  CHECK(apply_mapping(arith, PointVector{5, 5, 5}) == PointVector{5, 5, 5});
  const auto geo = apply_mapping(AveragingMapping::barycentric(MeanDescriptor::power(0), 2),
                                 PointVector{1, 4, 16});
  CHECK(geo[0] == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(geo[1] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(geo[2] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("barycentric_apply examples") {
  CHECK(barycentric_apply(MeanDescriptor::power(1), PointVector{0, 1, 2}) == PointVector{1.5, 1.0, 0.5});
  CHECK(barycentric_apply(MeanDescriptor::power(3), PointVector{2, 2, 2}) == PointVector{2, 2, 2});
  const auto y = barycentric_apply(geometric_pairs, PointVector{1, 1, 2});
  CHECK(y[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(y[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("averaging mapping validation") {
  CHECK_THROWS_AS(AveragingMapping({MeanDescriptor::power(1)}, IndexFamily(2, {{2}, {1}})),
                  std::invalid_argument);
  const auto two = MeanDescriptor::custom(
      "first", [](std::span<const double> x) { return x[0]; }, 2, Interval::real_line(), {});
  CHECK_THROWS_AS(AveragingMapping({two, two}, IndexFamily(2, {{1, 2, 2}, {1, 2}})), ArityError);
}

TEST_CASE("invariant_mean examples") {
  const auto arith = AveragingMapping::barycentric(MeanDescriptor::power(1), 2);
  CHECK(invariant_mean(arith, PointVector{1, 2, 3}).value == doctest::Approx(2.0).epsilon(1e-13));
  const auto constant = invariant_mean(arith, PointVector{4, 4, 4});
  CHECK(constant.value == 4.0);
  CHECK(constant.iterations == 0);
  CHECK(constant.converged);
  const auto geo = AveragingMapping::barycentric(geometric_pairs, 2);
  CHECK(rel(invariant_mean(geo, PointVector{1, 2, 4}).value, 2.0) < 1e-12);
}

TEST_CASE("invariant_mean preconditions and failure modes") {
  const auto two_cycle = AveragingMapping({MeanDescriptor::power(1), MeanDescriptor::power(1)},
                                          IndexFamily(2, {{2}, {1}}));
  CHECK_THROWS_AS(invariant_mean(two_cycle, PointVector{1, 2}), NotErgodic);
  CHECK_THROWS_AS(invariant_mean(AveragingMapping::barycentric(
                                     MeanDescriptor::custom(
                                         "lazy", [](std::span<const double> x) { return x[0]; },
                                         std::nullopt, Interval::real_line(), {}),
                                     2),
                                 PointVector{1, 2, 3}),
                  PreconditionError);
  IterationConfig cfg;
  cfg.max_iter = 2;
  try {
    invariant_mean(AveragingMapping::barycentric(MeanDescriptor::power(1), 2), PointVector{0, 1, 8}, cfg);
    FAIL("expected NotConverged");
  } catch (const NotConverged& e) {
    CHECK(e.lo() < e.hi());
    CHECK(e.lo() <= 3.0);
    CHECK(e.hi() >= 3.0);
    CHECK(e.iterations() == 2);
  }
}

TEST_CASE("gap never grows along the iteration") {
  for (const auto& m : {MeanDescriptor::power(-1), MeanDescriptor::power(2), geometric_pairs,
                        MeanDescriptor::gini(2, -1)}) {
    std::vector<double> gaps;
    IterationConfig cfg;
    cfg.trace = [&](const TraceEvent& e) { gaps.push_back(e.gap); };
    invariant_mean(AveragingMapping::barycentric(m, 3), PointVector{0.2, 5, 1, 9}, cfg);
    REQUIRE(gaps.size() > 4);
    for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i] <= gaps[i - 1]);
    for (std::size_t i = 4; i < gaps.size(); ++i) CHECK(gaps[i] < gaps[i - 4]);
  }
}

TEST_CASE("beta_extension_eval examples") {
  CHECK(beta_extension_eval(MeanDescriptor::power(1), PointVector{1, 2, 3}).value ==
        doctest::Approx(2.0).epsilon(1e-13));
  RandomStream rng(12);
  for (double r : {-2.0, 0.0, 0.5, 3.0}) {
    const auto x = random_point(rng, 3);
    const auto qa = MeanDescriptor::quasi_arithmetic(GeneratorDescriptor::power(r));
    CHECK(rel(beta_extension_eval(qa, PointVector(x)).value,
              eval_mean(MeanDescriptor::power(r), PointVector(x))) < 1e-12);
  }
  CHECK(rel(beta_extension_eval(geometric_pairs, PointVector{1, 1, 2}).value, std::cbrt(2.0)) < 1e-12);
}

TEST_CASE("non-symmetric means extend with a warning") {
  const auto skew = MeanDescriptor::custom(
      "skew", [](std::span<const double> x) { return (2 * x[0] + x[1]) / 3; }, 2,
      Interval::real_line(), {.symmetric = false, .strict = true, .monotone = true, .homogeneous = true});
  const auto r = beta_extension_eval(skew, PointVector{1, 2, 3});
  CHECK(r.converged);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("iterative_extension_eval examples") {
  CHECK(iterative_extension_eval(MeanDescriptor::power(2), PointVector{7}).value == 7.0);
  CHECK(iterative_extension_eval(MeanDescriptor::power(2), PointVector{3, 4}).value ==
        eval_mean(MeanDescriptor::power(2), PointVector{3, 4}));
  CHECK(rel(iterative_extension_eval(MeanDescriptor::power(1), PointVector{1, 2, 3, 4, 5}).value, 3.0) <
        1e-12);
  CHECK(rel(iterative_extension_eval(MeanDescriptor::power(0), PointVector{1, 2, 4, 8}).value,
            std::pow(2.0, 1.5)) < 1e-12);
  const double ext = iterative_extension_eval(geometric_pairs, PointVector{1, 1, 2}).value;
  CHECK(rel(ext, std::cbrt(2.0)) < 1e-12);
  CHECK(std::abs(ext - eval_mean(geometric_pairs, PointVector{1, 1, 2})) > 1e-3);
}

TEST_CASE("iterative extension resource limits") {
  IterationConfig cfg;
  cfg.max_arity = 4;
  CHECK_THROWS_AS(iterative_extension_eval(MeanDescriptor::power(1), PointVector{1, 2, 3, 4, 5}, cfg),
                  ResourceLimit);
  IterationConfig tiny;
  tiny.call_budget = 50;
  CHECK_THROWS_AS(iterative_extension_eval(MeanDescriptor::power(2), PointVector{1, 2, 3, 4}, tiny),
                  ResourceLimit);
  IterationConfig short_run;
  short_run.max_iter = 3;
  try {
    iterative_extension_eval(MeanDescriptor::power(2), PointVector{1, 2, 3, 9}, short_run);
    FAIL("expected NotConverged");
  } catch (const NotConverged& e) {
    CHECK(e.level() >= 3);
  }
}

TEST_CASE("memoization does not change values") {
  RandomStream rng(21);
  for (int k = 0; k < 5; ++k) {
    const PointVector x(random_point(rng, 5));
    IterationConfig off;
    off.memoize = false;
    const auto a = iterative_extension_eval(MeanDescriptor::gini(2, -1), x);
    const auto b = iterative_extension_eval(MeanDescriptor::gini(2, -1), x, off);
    CHECK(rel(a.value, b.value) < 1e-12);
  }
}

TEST_CASE("extended descriptors evaluate through the engine") {
  const auto ext = MeanDescriptor::extended(geometric_pairs);
  CHECK(rel(eval_mean(ext, PointVector{1, 2, 4}), 2.0) < 1e-12);
  CHECK(ext.flags().strict);
  CHECK_FALSE(ext.arity().has_value());
}

TEST_CASE("extension_conjugacy_check examples") {
  CHECK(extension_conjugacy_check(MeanDescriptor::power(1), GeneratorDescriptor::log(), PointVector{1, 2, 4}) <
        1e-10);
  CHECK(extension_conjugacy_check(MeanDescriptor::power(3), GeneratorDescriptor::power(1),
                                  PointVector{1, 2, 4}) < 1e-12);
  CHECK(extension_conjugacy_check(geometric_pairs, GeneratorDescriptor::power(2), PointVector{1, 1, 2}) < 1e-9);
}

TEST_CASE("extension properties") {
  RandomStream rng(31);
  const std::vector<MeanDescriptor> bases = {MeanDescriptor::power(-1), MeanDescriptor::power(2),
                                             geometric_pairs, MeanDescriptor::gini(2, -1)};
  for (const auto& m : bases) {
    for (int k = 0; k < 20; ++k) {
      const std::size_t n = 3 + k % 2;
      const auto x = random_point(rng, n);
      const double v = iterative_extension_eval(m, PointVector(x)).value;
      const double scale = *std::max_element(x.begin(), x.end());
      CHECK(v > *std::min_element(x.begin(), x.end()));
      CHECK(v < scale);

      auto y = x;
      std::reverse(y.begin(), y.end());
      std::swap(y[0], y[1]);
      CHECK(std::abs(iterative_extension_eval(m, PointVector(y)).value - v) <= 1e-12 * scale);

      const double lambda = rng.log_uniform(0.1, 10);
      auto z = x;
      for (double& t : z) t *= lambda;
      CHECK(std::abs(iterative_extension_eval(m, PointVector(z)).value - lambda * v) <=
            1e-12 * lambda * scale);

      auto w = x;
      w[k % n] *= 1.5;
      CHECK(iterative_extension_eval(m, PointVector(w)).value >= v - 1e-12 * scale);
    }
  }
}

TEST_CASE("invariance residual of the barycentric fixed point") {
  RandomStream rng(41);
  for (const auto& m : {MeanDescriptor::power(0.5), geometric_pairs, MeanDescriptor::gini(3, -2)}) {
    for (int k = 0; k < 50; ++k) {
      const PointVector x(random_point(rng, 3));
      const double kx = beta_extension_eval(m, x).value;
      const double kbx = beta_extension_eval(m, barycentric_apply(m, x)).value;
      CHECK(std::abs(kbx - kx) <= 10 * 1e-13 * std::max(1.0, x.max()));
    }
  }
}

TEST_CASE("comparison preserved by extension") {
  RandomStream rng(51);
  for (int k = 0; k < 40; ++k) {
    const PointVector x(random_point(rng, 3 + k % 3));
    const double lo = iterative_extension_eval(MeanDescriptor::power(0), x).value;
    const double hi = iterative_extension_eval(MeanDescriptor::power(1), x).value;
    CHECK(lo <= hi + 1e-12 * x.max());
  }
}
