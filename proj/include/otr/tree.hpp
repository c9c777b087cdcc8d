#pragma once

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "otr/rational.hpp"

namespace otr {

struct TreeEdge {
  int u = 0;
  int v = 0;
  Rat weight;
};

// Rooted edge-weighted tree. Immutable after construction; the carrier of the
// path distance and the max-weight distance.
class WeightedTree {
 public:
  WeightedTree() : n_(1), root_(0), parent_{-1}, weight_{Rat(0)}, depth_{0} {}

  // Orientation is derived from the root by BFS over the given edges.
  WeightedTree(int n, const std::vector<TreeEdge>& edges, int root = 0)
      : n_(n), root_(root), parent_(n, -1), weight_(n, Rat(0)), depth_(n, 0) {
    if (n < 1) throw std::invalid_argument("tree needs at least one vertex");
    if (root < 0 || root >= n) throw std::invalid_argument("root out of range");
    if (static_cast<int>(edges.size()) != n - 1)
      throw std::invalid_argument("tree needs exactly n-1 edges");
    std::vector<std::vector<std::pair<int, Rat>>> adj(n);
    for (const auto& e : edges) {
      if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n || e.u == e.v)
        throw std::invalid_argument("bad edge endpoints");
      if (e.weight <= 0) throw std::invalid_argument("edge weights must be positive");
      adj[e.u].push_back({e.v, e.weight});
      adj[e.v].push_back({e.u, e.weight});
    }
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(root);
    seen[root] = 1;
    int reached = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const auto& [w, wt] : adj[v]) {
        if (seen[w]) continue;
        seen[w] = 1;
        parent_[w] = v;
        weight_[w] = wt;
        depth_[w] = depth_[v] + 1;
        ++reached;
        q.push(w);
      }
    }
    if (reached != n) throw std::invalid_argument("edges do not connect all vertices");
  }

  static WeightedTree from_parents(const std::vector<int>& parent,
                                   const std::vector<Rat>& weight_to_parent, int root = 0) {
    int n = static_cast<int>(parent.size());
    std::vector<TreeEdge> edges;
    for (int v = 0; v < n; ++v) {
      if (v == root) continue;
      edges.push_back({v, parent[v], weight_to_parent[v]});
    }
    return WeightedTree(n, edges, root);
  }

  int size() const { return n_; }
  int root() const { return root_; }
  int parent(int v) const {
    check_vertex(v);
    return parent_[v];
  }
  int depth(int v) const {
    check_vertex(v);
    return depth_[v];
  }
  // Weight of the edge (v, parent(v)). Undefined for the root.
  const Rat& edge_weight(int v) const {
    check_vertex(v);
    if (v == root_) throw std::invalid_argument("root has no parent edge");
    return weight_[v];
  }

  int lca(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    while (depth_[u] > depth_[v]) u = parent_[u];
    while (depth_[v] > depth_[u]) v = parent_[v];
    while (u != v) {
      u = parent_[u];
      v = parent_[v];
    }
    return u;
  }

  // Sum of edge weights on the unique u-v path; zero iff u == v.
  Rat path_distance(int u, int v) const {
    int a = lca(u, v);
    Rat total = 0;
    for (int x = u; x != a; x = parent_[x]) total += weight_[x];
    for (int x = v; x != a; x = parent_[x]) total += weight_[x];
    return total;
  }

  // Maximum edge weight on the u-v path; zero for the empty path.
  Rat max_weight_distance(int u, int v) const {
    int a = lca(u, v);
    Rat best = 0;
    for (int x = u; x != a; x = parent_[x]) best = std::max(best, weight_[x]);
    for (int x = v; x != a; x = parent_[x]) best = std::max(best, weight_[x]);
    return best;
  }

  // True ancestor test: a is on the root-path of v (v counts as its own ancestor).
  bool is_ancestor(int a, int v) const {
    check_vertex(a);
    check_vertex(v);
    while (depth_[v] > depth_[a]) v = parent_[v];
    return v == a;
  }

  // Every weight equals 2^i with integer i >= 0.
  bool is_power_of_two() const {
    for (int v = 0; v < n_; ++v) {
      if (v == root_) continue;
      if (power_of_two_exponent(weight_[v]) < 0) return false;
    }
    return true;
  }

  std::vector<TreeEdge> edges() const {
    std::vector<TreeEdge> out;
    for (int v = 0; v < n_; ++v)
      if (v != root_) out.push_back({v, parent_[v], weight_[v]});
    return out;
  }

  std::vector<int> path_vertices(int u, int v) const {
    int a = lca(u, v);
    std::vector<int> up, down;
    for (int x = u; x != a; x = parent_[x]) up.push_back(x);
    up.push_back(a);
    for (int x = v; x != a; x = parent_[x]) down.push_back(x);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
  }

 private:
  void check_vertex(int v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("vertex index out of range");
  }

  int n_;
  int root_;
  std::vector<int> parent_;
  std::vector<Rat> weight_;  // weight_[v] = w(v, parent(v))
  std::vector<int> depth_;
};

inline Rat path_distance(const WeightedTree& t, int u, int v) { return t.path_distance(u, v); }
inline Rat max_weight_distance(const WeightedTree& t, int u, int v) {
  return t.max_weight_distance(u, v);
}
inline int lca(const WeightedTree& t, int u, int v) { return t.lca(u, v); }

// The subtree induced by `verts` (which must be connected in `tree`),
// re-indexed to 0..|verts|-1. Returns the new tree plus both index maps.
struct InducedSubtree {
  WeightedTree tree;
  std::vector<int> to_local;   // size of original tree, -1 where absent
  std::vector<int> to_global;  // size of the subtree
};

inline InducedSubtree induced_subtree(const WeightedTree& tree, std::vector<int> verts, int root) {
  std::sort(verts.begin(), verts.end());
  std::vector<int> to_local(tree.size(), -1);
  for (std::size_t i = 0; i < verts.size(); ++i) to_local[verts[i]] = static_cast<int>(i);
  if (to_local[root] < 0) throw std::invalid_argument("root not in vertex set");
  std::vector<TreeEdge> edges;
  for (int v : verts) {
    int p = tree.parent(v);
    if (v != tree.root() && p >= 0 && to_local[p] >= 0)
      edges.push_back({to_local[v], to_local[p], tree.edge_weight(v)});
  }
  if (edges.size() + 1 != verts.size())
    throw std::invalid_argument("vertex set is not connected in the tree");
  InducedSubtree out{WeightedTree(static_cast<int>(verts.size()), edges, to_local[root]),
                     std::move(to_local), std::move(verts)};
  return out;
}

}  // namespace otr
