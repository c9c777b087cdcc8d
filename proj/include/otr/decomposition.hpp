#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "otr/tree.hpp"

namespace otr {

// Recursive decomposition of a power-of-two weighted tree.
//
// Each node describes one (connected) subtree U of the original tree together
// with its split into
//   - the light part U_0 (maximal subtree at the root avoiding heaviest
//     edges) and the heavy parts U_1..U_l hanging below heaviest edges, and
//   - the two sides U^(1) / U^(2) obtained by cutting the edge between the
//     root and its lowest-index child.
// Child nodes are shared: structurally identical subtrees (same vertex set,
// same root) are built once. All vertex ids are global tree indices.
class Decomposition {
 public:
  struct Node {
    std::vector<int> verts;  // sorted, global ids
    int root = 0;
    bool leaf = false;  // single vertex: recursion base case
    Rat w_max;          // heaviest edge weight inside this subtree

    std::vector<int> heavy_roots;    // rho_i for i = 1..l (ascending)
    std::vector<int> heavy_parents;  // par(rho_i), inside part 0
    int split_child = -1;            // rho^(2): lowest-index child of root

    std::vector<int> part_child;  // node ids; [0] = light part, [i] below heavy_roots[i-1]
    int side_child[2] = {-1, -1};

    bool contains(int v) const { return std::binary_search(verts.begin(), verts.end(), v); }
  };

  explicit Decomposition(const WeightedTree& tree) : tree_(&tree) {
    if (!tree.is_power_of_two())
      throw std::invalid_argument("decomposition requires power-of-two weights");
    std::vector<int> all(tree.size());
    for (int v = 0; v < tree.size(); ++v) all[v] = v;
    root_node_ = build(std::move(all), tree.root());
    nodes_of_vertex_.assign(tree.size(), {});
    for (int id = 0; id < static_cast<int>(nodes_.size()); ++id)
      for (int v : nodes_[id].verts) nodes_of_vertex_[v].push_back(id);
  }

  const WeightedTree& tree() const { return *tree_; }
  const Node& node(int id) const { return nodes_[id]; }
  int root_node() const { return root_node_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<int>& nodes_containing(int v) const { return nodes_of_vertex_[v]; }

  // Index of the part containing v at `id`: 0 for the light part, i >= 1 for
  // the subtree below heavy_roots[i-1].
  int part_of(int id, int v) const {
    const Node& nd = nodes_[id];
    for (std::size_t i = 1; i < nd.part_child.size(); ++i)
      if (nodes_[nd.part_child[i]].contains(v)) return static_cast<int>(i);
    return 0;
  }

  // 0 for the root side, 1 for the side below split_child.
  int side_of(int id, int v) const {
    const Node& nd = nodes_[id];
    return nodes_[nd.side_child[1]].contains(v) ? 1 : 0;
  }

  // Root of side j in {0,1}: the subtree root for side 0, split_child for side 1.
  int side_root(int id, int j) const {
    const Node& nd = nodes_[id];
    return j == 0 ? nd.root : nd.split_child;
  }

  // Top-level views (the decomposition of the whole tree).
  const std::vector<int>& t0_vertices() const { return nodes_[top().part_child[0]].verts; }
  const std::vector<int>& heavy_roots() const { return top().heavy_roots; }
  int heavy_count() const { return static_cast<int>(top().heavy_roots.size()); }
  const std::vector<int>& heavy_subtree(int i) const {
    return nodes_[top().part_child[static_cast<std::size_t>(i) + 1]].verts;
  }
  int split_child() const { return top().split_child; }
  const std::vector<int>& side1() const { return nodes_[top().side_child[0]].verts; }
  const std::vector<int>& side2() const { return nodes_[top().side_child[1]].verts; }

 private:
  const Node& top() const { return nodes_[root_node_]; }

  int build(std::vector<int> verts, int root) {
    std::sort(verts.begin(), verts.end());
    std::uint64_t h = hash_key(verts, root);
    auto range = memo_.equal_range(h);
    for (auto it = range.first; it != range.second; ++it) {
      const Node& nd = nodes_[it->second];
      if (nd.root == root && nd.verts == verts) return it->second;
    }

    int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    memo_.emplace(h, id);
    nodes_[id].verts = std::move(verts);
    nodes_[id].root = root;
    if (nodes_[id].verts.size() == 1) {
      nodes_[id].leaf = true;
      return id;
    }

    // nodes_ may reallocate during child builds; work on a copy.
    const std::vector<int> local = nodes_[id].verts;
    const WeightedTree& t = *tree_;

    // Within this subtree every non-root vertex keeps its global parent, so
    // one child-list pass gives the full local adjacency.
    std::unordered_map<int, std::vector<int>> children;
    children.reserve(local.size());
    for (int v : local)
      if (v != root) children[t.parent(v)].push_back(v);

    Rat w_max = 0;
    for (int v : local)
      if (v != root) w_max = std::max(w_max, t.edge_weight(v));

    // Light part: reachable from the root without crossing a heaviest edge.
    std::vector<int> t0_verts;
    {
      std::vector<int> stack{root};
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        t0_verts.push_back(v);
        auto it = children.find(v);
        if (it == children.end()) continue;
        for (int c : it->second)
          if (t.edge_weight(c) < w_max) stack.push_back(c);
      }
      std::sort(t0_verts.begin(), t0_verts.end());
    }

    std::vector<int> heavy_roots;
    {
      std::vector<char> in_t0(local.size(), 0);
      auto local_index = [&](int v) {
        return static_cast<std::size_t>(
            std::lower_bound(local.begin(), local.end(), v) - local.begin());
      };
      for (int v : t0_verts) in_t0[local_index(v)] = 1;
      for (int v : local)
        if (v != root && !in_t0[local_index(v)] && in_t0[local_index(t.parent(v))])
          heavy_roots.push_back(v);
      std::sort(heavy_roots.begin(), heavy_roots.end());
    }

    auto collect_below = [&](int top) {
      std::vector<int> out;
      std::vector<int> stack{top};
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        out.push_back(v);
        auto it = children.find(v);
        if (it == children.end()) continue;
        for (int c : it->second) stack.push_back(c);
      }
      std::sort(out.begin(), out.end());
      return out;
    };

    std::vector<std::vector<int>> heavy_parts;
    for (int r : heavy_roots) heavy_parts.push_back(collect_below(r));

    // Sides: cut the edge to the lowest-index child of the root.
    int split_child = children[root].empty() ? -1 : *std::min_element(children[root].begin(),
                                                                      children[root].end());
    std::vector<int> side2 = collect_below(split_child);
    std::vector<int> side1;
    for (int v : local)
      if (!std::binary_search(side2.begin(), side2.end(), v)) side1.push_back(v);

    std::vector<int> heavy_parents;
    for (int r : heavy_roots) heavy_parents.push_back(t.parent(r));

    std::vector<int> part_child_ids;
    part_child_ids.push_back(build(std::move(t0_verts), root));
    for (std::size_t i = 0; i < heavy_roots.size(); ++i)
      part_child_ids.push_back(build(std::move(heavy_parts[i]), heavy_roots[i]));
    int side1_id = build(std::move(side1), root);
    int side2_id = build(std::move(side2), split_child);

    Node& nd = nodes_[id];
    nd.w_max = w_max;
    nd.heavy_roots = std::move(heavy_roots);
    nd.heavy_parents = std::move(heavy_parents);
    nd.split_child = split_child;
    nd.part_child = std::move(part_child_ids);
    nd.side_child[0] = side1_id;
    nd.side_child[1] = side2_id;
    return id;
  }

  static std::uint64_t hash_key(const std::vector<int>& verts, int root) {
    std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(root);
    for (int v : verts) h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  const WeightedTree* tree_;
  std::vector<Node> nodes_;
  std::unordered_multimap<std::uint64_t, int> memo_;
  std::vector<std::vector<int>> nodes_of_vertex_;
  int root_node_ = 0;
};

}  // namespace otr
