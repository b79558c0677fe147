#include "meanx/incidence_graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "meanx/errors.hpp"

namespace meanx {

namespace {

// Vertices reachable from `root` (0-based) along `adj`.
std::vector<bool> reachable(const std::vector<std::vector<std::size_t>>& adj, std::size_t root) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

IndexFamily::IndexFamily(std::size_t p, std::vector<std::vector<std::size_t>> alpha)
    : p_(p), alpha_(std::move(alpha)) {
  if (p_ == 0) throw std::invalid_argument("IndexFamily: p must be positive");
  if (alpha_.size() != p_) {
    throw std::invalid_argument("IndexFamily: expected " + std::to_string(p_) +
                                " index vectors, got " + std::to_string(alpha_.size()));
  }
  for (std::size_t i = 0; i < p_; ++i) {
    if (alpha_[i].empty()) throw std::invalid_argument("IndexFamily: empty index vector");
    for (std::size_t idx : alpha_[i]) {
      if (idx < 1 || idx > p_) {
        throw IndexError("IndexFamily: index " + std::to_string(idx) + " in alpha_" +
                         std::to_string(i + 1) + " is outside 1.." + std::to_string(p_));
      }
    }
  }
}

IndexFamily IndexFamily::barycentric(std::size_t k) {
  if (k == 0) throw std::invalid_argument("barycentric family needs k >= 1");
  const std::size_t p = k + 1;
  std::vector<std::vector<std::size_t>> alpha(p);
  for (std::size_t i = 1; i <= p; ++i) {
    for (std::size_t j = 1; j <= p; ++j) {
      if (j != i) alpha[i - 1].push_back(j);
    }
  }
  return {p, std::move(alpha)};
}

std::vector<std::size_t> IndexFamily::lengths() const {
  std::vector<std::size_t> d;
  d.reserve(p_);
  for (const auto& a : alpha_) d.push_back(a.size());
  return d;
}

IncidenceGraph::IncidenceGraph(std::size_t vertex_count, std::vector<Edge> edges)
    : n_(vertex_count), edges_(std::move(edges)), out_(vertex_count) {
  for (const auto& [u, v] : edges_) {
    if (u < 1 || u > n_ || v < 1 || v > n_) throw IndexError("IncidenceGraph: edge endpoint out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& [u, v] : edges_) out_[u - 1].push_back(v - 1);
}

bool IncidenceGraph::has_edge(std::size_t u, std::size_t v) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

IncidenceGraph IncidenceGraph::relabeled(const std::vector<std::size_t>& perm) const {
  if (perm.size() != n_) throw std::invalid_argument("relabeled: permutation size mismatch");
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const auto& [u, v] : edges_) edges.emplace_back(perm[u - 1], perm[v - 1]);
  return {n_, std::move(edges)};
}

IncidenceGraph build_graph(const IndexFamily& family) {
  std::vector<IncidenceGraph::Edge> edges;
  for (std::size_t i = 0; i < family.dimension(); ++i) {
    for (std::size_t src : family.alpha(i)) edges.emplace_back(src, i + 1);
  }
  return {family.dimension(), std::move(edges)};
}

bool is_irreducible(const IncidenceGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return false;
  const auto& out = g.successors();
  std::vector<std::vector<std::size_t>> in(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : out[u]) in[v].push_back(u);
  }
  const auto fwd = reachable(out, 0);
  const auto bwd = reachable(in, 0);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

std::size_t period(const IncidenceGraph& g) {
  if (!is_irreducible(g)) throw NotIrreducible("period is defined only for irreducible graphs");
  // BFS levels from vertex 1; every edge (u, v) closes a walk whose length is
  // congruent to level(u) + 1 - level(v) modulo the period.
  const auto& out = g.successors();
  const std::size_t n = g.vertex_count();
  std::vector<long long> level(n, -1);
  std::queue<std::size_t> frontier;
  level[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : out[u]) {
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      }
    }
  }
  long long d = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : out[u]) d = std::gcd(d, level[u] + 1 - level[v]);
  }
  return static_cast<std::size_t>(d);
}

ErgodicityReport ergodicity(const IncidenceGraph& g) {
  ErgodicityReport r;
  r.irreducible = is_irreducible(g);
  if (r.irreducible) r.period = period(g);
  r.ergodic = r.irreducible && r.period == 1;
  return r;
}

ErgodicityReport is_ergodic(const IndexFamily& family) { return ergodicity(build_graph(family)); }

}  // namespace meanx
