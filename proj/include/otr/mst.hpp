#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "otr/metric_space.hpp"
#include "otr/tree.hpp"

namespace otr {

namespace detail {
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};
}  // namespace detail

// Minimum spanning tree of the complete graph on `space`, rooted at 0.
// Kruskal with the fixed tie order (weight, min endpoint, max endpoint), so
// the result is deterministic.
inline WeightedTree mst_of_metric(const MetricSpace& space) {
  int n = space.size();
  if (n == 1) return WeightedTree();
  struct Cand {
    Rat w;
    int u, v;
  };
  std::vector<Cand> cands;
  cands.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) cands.push_back({space.dist(u, v), u, v});
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  detail::UnionFind uf(n);
  std::vector<TreeEdge> edges;
  for (const auto& c : cands) {
    if (uf.unite(c.u, c.v)) {
      edges.push_back({c.u, c.v, c.w});
      if (static_cast<int>(edges.size()) == n - 1) break;
    }
  }
  return WeightedTree(n, edges, 0);
}

// Replaces every weight w by the least 2^i >= w with i >= 0. Topology is kept.
// Requires all weights >= 1 (normalize the metric first).
inline WeightedTree round_to_power_of_two(const WeightedTree& tree) {
  std::vector<TreeEdge> edges = tree.edges();
  for (auto& e : edges) {
    if (e.weight < 1)
      throw std::invalid_argument("round_to_power_of_two requires weights >= 1");
    e.weight = ceil_power_of_two(e.weight).first;
  }
  return WeightedTree(tree.size(), edges, tree.root());
}

}  // namespace otr
