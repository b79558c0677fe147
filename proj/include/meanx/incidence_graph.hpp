#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace meanx {

/// Index vectors alpha_1, ..., alpha_p selecting which coordinates of x in I^p
/// feed each component of a mean-type mapping. Indices are 1-based.
class IndexFamily {
 public:
  /// Throws IndexError when an index falls outside 1..p, or
  /// std::invalid_argument when alpha.size() != p or some alpha_i is empty.
  IndexFamily(std::size_t p, std::vector<std::vector<std::size_t>> alpha);

  /// alpha_i = {1..k+1} \ {i} for i = 1..k+1, the family behind the barycentric operator.
  static IndexFamily barycentric(std::size_t k);

  std::size_t dimension() const noexcept { return p_; }
  /// d_i = |alpha_i|.
  std::vector<std::size_t> lengths() const;
  const std::vector<std::vector<std::size_t>>& alpha() const noexcept { return alpha_; }
  const std::vector<std::size_t>& alpha(std::size_t i) const { return alpha_.at(i); }

  friend bool operator==(const IndexFamily&, const IndexFamily&) = default;

 private:
  std::size_t p_;
  std::vector<std::vector<std::size_t>> alpha_;
};

/// Directed graph on vertices 1..n; edges are deduplicated and kept sorted.
class IncidenceGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  IncidenceGraph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_edge(std::size_t u, std::size_t v) const;
  /// 0-based successor lists.
  const std::vector<std::vector<std::size_t>>& successors() const noexcept { return out_; }

  /// The same graph with vertex v renamed to perm[v - 1] (perm is a permutation of 1..n).
  IncidenceGraph relabeled(const std::vector<std::size_t>& perm) const;

  friend bool operator==(const IncidenceGraph& a, const IncidenceGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_;
};

struct ErgodicityReport {
  bool irreducible = false;
  /// gcd of cycle lengths; 0 when the graph is not irreducible or has no cycle at all.
  std::size_t period = 0;
  bool ergodic = false;
};

/// The alpha-incidence graph: an edge (alpha_{i,j}, i) for every i and j.
IncidenceGraph build_graph(const IndexFamily& family);

/// Strong connectivity.
bool is_irreducible(const IncidenceGraph& g);

/// gcd of all cycle lengths (0 for a lone vertex without a self-loop).
/// Throws NotIrreducible on a graph that is not strongly connected.
std::size_t period(const IncidenceGraph& g);

ErgodicityReport is_ergodic(const IndexFamily& family);
ErgodicityReport ergodicity(const IncidenceGraph& g);

}  // namespace meanx
