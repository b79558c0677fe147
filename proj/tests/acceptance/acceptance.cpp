// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "meanx/descriptor_io.hpp"
#include "meanx/envelopes.hpp"
#include "meanx/errors.hpp"
#include "meanx/extension.hpp"
#include "meanx/flags.hpp"
#include "meanx/gini.hpp"
#include "meanx/incidence_graph.hpp"
#include "meanx/random.hpp"

using namespace meanx;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

double scale_of(const std::vector<double>& x) {
  double s = 1.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

std::vector<double> positive_point(RandomStream& rng, std::size_t n) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.log_uniform(0.05, 20);
  return x;
}

// Closed-form power mean, written out independently of the library kernels.
double power_mean_oracle(double r, const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  if (r == 0) {
    double s = 0;
    for (double v : x) s += std::log(v);
    return std::exp(s / n);
  }
  double s = 0;
  for (double v : x) s += std::pow(v, r);
  return std::pow(s / n, 1 / r);
}

double ext(const MeanDescriptor& m, const std::vector<double>& x) {
  return iterative_extension_eval(m, PointVector(x)).value;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome quasiarithmetic_fixed_point() {
  const auto start = std::chrono::steady_clock::now();
  RandomStream rng(1001);
  double worst = 0;
  std::size_t checked = 0;
  for (double r : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0}) {
    const auto m = MeanDescriptor::power(r);
    for (std::size_t n = 3; n <= 6; ++n) {
      for (int k = 0; k < 50; ++k) {
        const auto x = positive_point(rng, n);
        const double oracle = power_mean_oracle(r, x);
        worst = std::max(worst, std::abs(ext(m, x) - oracle) / oracle);
        ++checked;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-9 && secs <= 60,
          std::to_string(checked) + " points, max rel err " + fmt("%.3g", worst) + ", " + fmt("%.1f", secs) + " s"};
}

Outcome bivariate_gini_gap() {
  const auto g = MeanDescriptor::gini(1, -1);
  const std::vector<double> x{1, 1, 2};
  const double e = ext(g, x);
  const double direct = eval_mean(g, PointVector(x));
  const bool ok = std::abs(e - std::cbrt(2.0)) <= 1e-9 && std::abs(direct - std::sqrt(8.0 / 5.0)) <= 1e-12 &&
                  std::abs(e - direct) > 1e-3;
  return {ok, "extension " + fmt("%.15g", e) + ", direct " + fmt("%.15g", direct) + ", gap " +
                  fmt("%.3g", std::abs(e - direct))};
}

Outcome geometric_progression() {
  const auto g = MeanDescriptor::gini(1, -1);
  const std::vector<double> x{1, 2, 4};
  const double direct = eval_mean(g, PointVector(x));
  const double e = ext(g, x);
  return {std::abs(direct - 2) <= 1e-10 && std::abs(e - 2) <= 1e-10,
          "direct " + fmt("%.15g", direct) + ", extension " + fmt("%.15g", e)};
}

// Period from closed walks: gcd of every k <= 2n^2 with a closed walk of length k.
struct WalkOracle {
  bool strongly_connected;
  std::size_t period;
};

WalkOracle walk_oracle(std::size_t n, const std::vector<std::vector<bool>>& adj) {
  std::vector<std::vector<bool>> reach = adj;
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  bool sc = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sc = sc && reach[i][j];
  std::size_t g = 0;
  auto power = adj;
  for (std::size_t len = 1; len <= 2 * n * n; ++len) {
    for (std::size_t i = 0; i < n; ++i) {
      if (power[i][i]) {
        g = std::gcd(g, len);
        break;
      }
    }
    std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (power[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (adj[k][j]) next[i][j] = true;
    power = std::move(next);
  }
  return {sc, g};
}

Outcome graph_ergodicity() {
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t p = 3; p <= 10; ++p) {
    std::vector<IncidenceGraph::Edge> edges;
    for (std::size_t i = 1; i <= p; ++i)
      for (std::size_t j = 1; j <= p; ++j)
        if (i != j) edges.emplace_back(i, j);
    const IncidenceGraph complete(p, edges);
    const auto family_graph = build_graph(IndexFamily::barycentric(p - 1));
    ok = ok && family_graph == complete && ergodicity(complete).ergodic && is_ergodic(IndexFamily::barycentric(p - 1)).ergodic;
  }
  const auto two = is_ergodic(IndexFamily(2, {{2}, {1}}));
  ok = ok && two.irreducible && two.period == 2 && !two.ergodic;

  RandomStream rng(4004);
  std::size_t irreducible = 0;
  std::size_t mismatches = 0;
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = rng.index(1, 5);
    const double density = rng.uniform(0.15, 0.7);
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    std::vector<IncidenceGraph::Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng.uniform(0, 1) < density) {
          adj[i][j] = true;
          edges.emplace_back(i + 1, j + 1);
        }
    const IncidenceGraph g(n, edges);
    const auto oracle = walk_oracle(n, adj);
    const auto rep = ergodicity(g);
    bool agree = rep.irreducible == oracle.strongly_connected;
    if (oracle.strongly_connected) {
      ++irreducible;
      agree = agree && period(g) == oracle.period && rep.period == oracle.period &&
              rep.ergodic == (oracle.period == 1);
    } else {
      agree = agree && !rep.ergodic;
    }
    if (!agree) ++mismatches;
  }
  ok = ok && mismatches == 0;
  detail << "Q_3..Q_10 ergodic, two-cycle period " << two.period << ", 500 random digraphs ("
         << irreducible << " strongly connected), " << mismatches << " mismatches";
  return {ok, detail.str()};
}

Outcome extension_properties() {
  RandomStream rng(5005);
  const double tol = 1e-9;
  std::vector<MeanDescriptor> bases;
  for (double r : {-1.0, 0.0, 1.0, 2.0}) bases.push_back(MeanDescriptor::power(r));
  bases.push_back(MeanDescriptor::gini(1, -1));
  std::size_t violations = 0;
  std::size_t checks = 0;
  auto record = [&](bool good) {
    ++checks;
    if (!good) ++violations;
  };
  for (const auto& m : bases) {
    for (int k = 0; k < 200; ++k) {
      const std::size_t n = 3 + k % 2;
      const auto x = positive_point(rng, n);
      const double s = scale_of(x);
      const double v = ext(m, x);
      const double lo = *std::min_element(x.begin(), x.end());
      const double hi = *std::max_element(x.begin(), x.end());

      auto perm = x;
      std::shuffle(perm.begin(), perm.end(), rng);
      record(std::abs(ext(m, perm) - v) <= tol * s);

      record(v > lo && v < hi);
      record(v >= lo - tol * s && v <= hi + tol * s);

      auto up = x;
      up[rng.index(0, n - 1)] *= rng.uniform(1.0, 3.0);
      record(ext(m, up) >= v - tol * scale_of(up));

      const double lambda = rng.log_uniform(0.1, 10);
      auto scaled = x;
      for (double& t : scaled) t *= lambda;
      record(std::abs(ext(m, scaled) - lambda * v) <= tol * scale_of(scaled));
    }
  }
  const auto p2 = MeanDescriptor::power(2);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 3 + k % 2;
    const auto x = positive_point(rng, n);
    const auto y = positive_point(rng, n);
    std::vector<double> mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = (x[i] + y[i]) / 2;
    record(ext(p2, mid) <= (ext(p2, x) + ext(p2, y)) / 2 + tol * std::max(scale_of(x), scale_of(y)));
  }
  return {violations == 0, std::to_string(checks) + " checks, " + std::to_string(violations) + " violations"};
}

Outcome invariance_residual() {
  RandomStream rng(6006);
  double worst = 0;
  std::size_t checked = 0;
  bool ok = true;
  for (const auto& m : shipped_means()) {
    for (int k = 0; k < 100; ++k) {
      const PointVector x(positive_point(rng, 3));
      const double s = std::max(1.0, x.max());
      const double kx = beta_extension_eval(m, x).value;
      const double kbx = beta_extension_eval(m, barycentric_apply(m, x)).value;
      const double res = std::abs(kbx - kx) / s;
      worst = std::max(worst, res);
      ok = ok && res <= 1e-10;
      ++checked;
    }
  }
  return {ok, std::to_string(checked) + " points over " + std::to_string(shipped_means().size()) +
                  " means, max residual " + fmt("%.3g", worst)};
}

Outcome conjugacy_commutation() {
  struct Pair {
    MeanDescriptor mean;
    GeneratorDescriptor gen;
    bool real_inputs;
  };
  const std::vector<Pair> pairs = {
      {MeanDescriptor::power(1), GeneratorDescriptor::log(), false},
      {MeanDescriptor::power(3), GeneratorDescriptor::power(-1), false},
      {MeanDescriptor::gini(1, -1), GeneratorDescriptor::power(2), false},
      {MeanDescriptor::gini(2, -1), GeneratorDescriptor::power(0.5), false},
      {MeanDescriptor::power(-1), GeneratorDescriptor::exp(1), true},
  };
  RandomStream rng(7007);
  double worst = 0;
  bool ok = true;
  for (const auto& p : pairs) {
    for (int k = 0; k < 50; ++k) {
      const std::size_t n = 3 + k % 2;
      std::vector<double> x(n);
      for (double& v : x) v = p.real_inputs ? rng.uniform(-3, 3) : rng.log_uniform(0.05, 20);
      const double res = extension_conjugacy_check(p.mean, p.gen, PointVector(x)) / scale_of(x);
      worst = std::max(worst, res);
      ok = ok && res <= 1e-9;
    }
  }
  return {ok, "5 pairs x 50 points, max residual " + fmt("%.3g", worst)};
}

Outcome comparison_preservation() {
  RandomStream rng(8008);
  const auto geo = MeanDescriptor::power(0);
  const auto arith = MeanDescriptor::power(1);
  std::size_t violations = 0;
  for (int k = 0; k < 200; ++k) {
    const auto x = positive_point(rng, 3 + k % 3);
    if (ext(geo, x) > ext(arith, x) + 1e-12 * scale_of(x)) ++violations;
  }
  return {violations == 0, "200 points, " + std::to_string(violations) + " violations"};
}

Outcome gini_comparison() {
  const auto start = std::chrono::steady_clock::now();
  RandomStream rng(9009);
  auto draw = [&]() {
    // Mon_G: one parameter >= 0, the other <= 0, with exact zeros now and then.
    double a = rng.uniform(0, 1) < 0.15 ? 0.0 : rng.uniform(0, 3);
    double b = rng.uniform(0, 1) < 0.15 ? 0.0 : -rng.uniform(0, 3);
    if (rng.uniform(0, 1) < 0.5) std::swap(a, b);
    return GiniParams{a, b};
  };
  std::size_t inside = 0, holds = 0, outside = 0, found = 0, inconclusive = 0;
  for (int k = 0; k < 100; ++k) {
    const auto a = draw();
    const auto b = draw();
    const auto rep = corollary_check(a, b, 50, 9009 + k);
    if (rep.in_delta_2) {
      ++inside;
      if (rep.verdict == Verdict::holds) ++holds;
    } else {
      ++outside;
      if (rep.verdict == Verdict::counterexample) ++found;
      if (rep.verdict == Verdict::inconclusive) ++inconclusive;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = holds == inside && (outside == 0 || found >= 0.9 * static_cast<double>(outside)) && secs <= 300;
  std::ostringstream d;
  d << holds << "/" << inside << " inside pairs hold, " << found << "/" << outside
    << " outside pairs refuted (" << inconclusive << " inconclusive), " << fmt("%.1f", secs) << " s";
  return {ok, d.str()};
}

Outcome envelope_sandwich() {
  RandomStream rng(10010);
  std::size_t violations = 0;
  std::size_t checked = 0;
  for (const auto& m : shipped_means()) {
    MembershipOracle oracle(m, {});
    for (int k = 0; k < 100; ++k) {
      const PointVector x(positive_point(rng, 2 + k % 2));
      const double v = eval_mean(m, x);
      const double tol = 1e-12 * std::max(1.0, std::abs(v));
      const double lo = envelope_estimate(oracle, x, EnvelopeKind::local_lower).value;
      const double hi = envelope_estimate(oracle, x, EnvelopeKind::local_upper).value;
      if (lo > v + tol || hi < v - tol) ++violations;
      ++checked;
    }
  }
  double worst = 0;
  constexpr EnvelopeKind kinds[] = {EnvelopeKind::local_lower, EnvelopeKind::local_upper,
                                    EnvelopeKind::global_lower, EnvelopeKind::global_upper};
  for (double r : {-1.0, 0.0, 1.0, 2.0}) {
    MembershipOracle oracle(MeanDescriptor::power(r), {});
    for (int k = 0; k < 10; ++k) {
      const auto x = positive_point(rng, 2);
      const double p = power_mean_oracle(r, x);
      for (auto kind : kinds) {
        worst = std::max(worst, std::abs(envelope_estimate(oracle, PointVector(x), kind).value - p) / p);
      }
    }
  }
  return {violations == 0 && worst <= 1e-9, std::to_string(checked) + " sandwich points, " +
                                                std::to_string(violations) + " violations; power fixed point max rel err " +
                                                fmt("%.3g", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"quasiarithmetic fixed point", quasiarithmetic_fixed_point},
      {"bivariate vs multivariate Gini gap", bivariate_gini_gap},
      {"geometric progression coincidence", geometric_progression},
      {"ergodicity", graph_ergodicity},
      {"extension properties", extension_properties},
      {"invariance residual", invariance_residual},
      {"conjugacy commutation", conjugacy_commutation},
      {"comparison preservation", comparison_preservation},
      {"Gini comparison check", gini_comparison},
      {"envelope sandwich and fixed point", envelope_sandwich},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
