#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "meanx/extension.hpp"
#include "meanx/gini.hpp"
#include "meanx/random.hpp"

using namespace meanx;

namespace {

GiniParams swapped(GiniParams p) { return {p.s, p.r}; }

GiniParams random_params(RandomStream& rng) {
  // Half-integers hit ties and sign changes often.
  auto pick = [&] { return rng.uniform(0, 1) < 0.3 ? std::round(rng.uniform(-6, 6)) / 2 : rng.uniform(-3, 3); };
  return {pick(), pick()};
}

}  // namespace

TEST_CASE("m_func examples") {
  CHECK(m_func(1, 2) == 1);
  CHECK(m_func(-1, 2) == 0);
  CHECK(m_func(-1, -2) == -1);
  CHECK(m_func(0, 5) == 0);
  CHECK(m_func(0, -5) == 0);
}

TEST_CASE("mu_func examples") {
  CHECK(mu_func(1, -1) == 0);
  CHECK(mu_func(2, 2) == 1);
  CHECK(mu_func(3, 1) == 1);
  CHECK(mu_func(-2, -2) == -1);
  CHECK(mu_func(0, 0) == 0);
  CHECK(mu_func(2, -1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("region predicate examples") {
  CHECK(in_delta_inf({1, 0}, {2, 0}));
  CHECK_FALSE(in_delta_inf({2, 0}, {1, 0}));
  CHECK_FALSE(in_delta_inf({1, -1}, {2, -2}));
  CHECK(in_delta_2({1, 0}, {2, 0}));
  CHECK(in_delta_2({1, -1}, {2, -2}));
  CHECK_FALSE(in_delta_2({2, 0}, {1, 0}));
  CHECK(in_mon_g({1, -1}));
  CHECK(in_mon_g({0, 3}));
  CHECK_FALSE(in_mon_g({1, 2}));
}

TEST_CASE("region report flags ties") {
  const auto r = region_report({1, -1}, {2, -2});
  CHECK(r.in_delta_2);
  CHECK_FALSE(r.in_delta_inf);
  CHECK(std::find(r.boundary.begin(), r.boundary.end(), "sum") != r.boundary.end());
  CHECK(std::find(r.boundary.begin(), r.boundary.end(), "mu") != r.boundary.end());
  CHECK(r.mon_g_first);
  CHECK(r.mon_g_second);
}

TEST_CASE("delta_inf implies delta_2 and predicates ignore parameter order") {
  RandomStream rng(5);
  std::size_t inf_count = 0;
  for (int k = 0; k < 10000; ++k) {
    const auto a = random_params(rng);
    const auto b = random_params(rng);
    const bool inf = in_delta_inf(a, b);
    const bool two = in_delta_2(a, b);
    if (inf) {
      ++inf_count;
      CHECK(two);
    }
    for (const auto& [x, y] : {std::pair{swapped(a), b}, std::pair{a, swapped(b)},
                               std::pair{swapped(a), swapped(b)}}) {
      CHECK(in_delta_inf(x, y) == inf);
      CHECK(in_delta_2(x, y) == two);
    }
    CHECK(in_mon_g(swapped(a)) == in_mon_g(a));
    CHECK(m_func(a.r, a.s) == m_func(a.s, a.r));
    CHECK(mu_func(a.r, a.s) == doctest::Approx(mu_func(a.s, a.r)).epsilon(1e-15));
  }
  CHECK(inf_count > 1000);
}

TEST_CASE("delta_inf agrees with direct Gini evaluation") {
  RandomStream rng(6);
  std::size_t checked = 0;
  while (checked < 300) {
    const auto a = random_params(rng);
    const auto b = random_params(rng);
    if (!in_delta_inf(a, b)) continue;
    const std::size_t n = 2 + checked % 5;
    std::vector<double> x(n);
    for (double& v : x) v = rng.log_uniform(0.05, 20);
    const double ga = eval_mean(MeanDescriptor::gini(a.r, a.s), PointVector(x));
    const double gb = eval_mean(MeanDescriptor::gini(b.r, b.s), PointVector(x));
    CHECK(ga <= gb + 1e-12 * std::max(1.0, gb));
    ++checked;
  }
}

TEST_CASE("delta_2 without delta_inf: bivariate holds, plain arity 3 can fail") {
  const GiniParams a{1, -1};
  const GiniParams b{0, 0};
  REQUIRE(in_delta_2(a, b));
  REQUIRE_FALSE(in_delta_inf(a, b));
  RandomStream rng(8);
  for (int k = 0; k < 200; ++k) {
    const PointVector x{rng.log_uniform(0.05, 20), rng.log_uniform(0.05, 20)};
    CHECK(eval_mean(MeanDescriptor::gini(1, -1), x) <=
          eval_mean(MeanDescriptor::gini(0, 0), x) * (1 + 1e-12));
  }
  const PointVector y{1, 1, 2};
  CHECK(eval_mean(MeanDescriptor::gini(1, -1), y) > eval_mean(MeanDescriptor::gini(0, 0), y) + 1e-3);
}

TEST_CASE("corollary_check examples") {
  const auto powers = corollary_check({1, 0}, {2, 0}, 20, 1);
  CHECK(powers.verdict == Verdict::holds);
  CHECK(powers.in_delta_2);
  CHECK(powers.comparisons == 60);
  CHECK(powers.max_excess <= 0);

  const auto same = corollary_check({0, 0}, {0, 0}, 20, 2);
  CHECK(same.verdict == Verdict::holds);
  CHECK(std::abs(same.max_excess) <= 1e-12);

  const auto geo = corollary_check({1, -1}, {0, 0}, 20, 3);
  CHECK(geo.verdict == Verdict::holds);
  CHECK(std::abs(geo.max_excess) <= 1e-11);

  const auto reversed = corollary_check({2, 0}, {1, 0}, 20, 4);
  CHECK(reversed.verdict == Verdict::counterexample);
  REQUIRE(reversed.witness.size() >= 2);
  CHECK(reversed.witness_first > reversed.witness_second);
  CHECK(reversed.consistent());
}

TEST_CASE("corollary_check outside Mon_G is exploratory") {
  const auto r = corollary_check({1, 2}, {3, 1}, 5, 9);
  CHECK(r.exploratory);
}

TEST_CASE("corollary_check is reproducible") {
  const auto a = corollary_check({0.5, -1}, {1, -0.2}, 10, 77);
  const auto b = corollary_check({0.5, -1}, {1, -0.2}, 10, 77);
  CHECK(a.verdict == b.verdict);
  CHECK(a.max_excess == b.max_excess);
  CHECK(a.witness == b.witness);
}

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::holds) == "holds");
  CHECK(to_string(Verdict::counterexample) == "counterexample");
  CHECK(to_string(Verdict::inconclusive) == "inconclusive");
  CHECK(to_string(Verdict::violated) == "violated");
}
