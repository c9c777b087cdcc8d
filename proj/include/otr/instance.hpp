#pragma once

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "otr/metric_space.hpp"
#include "otr/mst.hpp"
#include "otr/rng.hpp"
#include "otr/tree.hpp"

namespace otr {

enum class InstanceKind { OTR, OMM, OMM_S, OMT_S2 };

inline std::string kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::OTR: return "OTR";
    case InstanceKind::OMM: return "OMM";
    case InstanceKind::OMM_S: return "OMM_S";
    case InstanceKind::OMT_S2: return "OMT_S2";
  }
  return "?";
}

inline InstanceKind kind_from_name(const std::string& s) {
  if (s == "OTR") return InstanceKind::OTR;
  if (s == "OMM") return InstanceKind::OMM;
  if (s == "OMM_S") return InstanceKind::OMM_S;
  if (s == "OMT_S2") return InstanceKind::OMT_S2;
  throw std::invalid_argument("unknown instance kind '" + s + "'");
}

// One online run: a geometry, server sites with capacities, and the request
// sequence. Capacities sum to the number of requests.
struct OnlineInstance {
  InstanceKind kind = InstanceKind::OTR;
  std::variant<MetricSpace, WeightedTree> geometry;
  std::vector<int> sites;
  std::vector<int> capacities;
  std::vector<int> requests;
  std::optional<std::uint64_t> seed;

  int num_points() const {
    return std::holds_alternative<MetricSpace>(geometry)
               ? std::get<MetricSpace>(geometry).size()
               : std::get<WeightedTree>(geometry).size();
  }
  int num_sites() const { return static_cast<int>(sites.size()); }
  int num_requests() const { return static_cast<int>(requests.size()); }
  bool on_tree() const { return std::holds_alternative<WeightedTree>(geometry); }
  const WeightedTree& tree() const { return std::get<WeightedTree>(geometry); }
  const MetricSpace& metric() const { return std::get<MetricSpace>(geometry); }

  // Distance between two points in the ambient geometry (path distance on trees).
  Rat dist(int a, int b) const {
    return on_tree() ? tree().path_distance(a, b) : metric().dist(a, b);
  }

  void validate() const {
    int n = num_points();
    if (sites.empty()) throw std::invalid_argument("instance needs at least one site");
    if (sites.size() != capacities.size())
      throw std::invalid_argument("capacities must match sites");
    std::vector<char> seen(n, 0);
    for (int s : sites) {
      if (s < 0 || s >= n) throw std::invalid_argument("site index out of range");
      if (seen[s]) throw std::invalid_argument("duplicate site");
      seen[s] = 1;
    }
    long long total = 0;
    for (int c : capacities) {
      if (c < 1) throw std::invalid_argument("capacities must be >= 1");
      total += c;
    }
    if (total != num_requests())
      throw std::invalid_argument("capacities must sum to the number of requests");
    for (int r : requests)
      if (r < 0 || r >= n) throw std::invalid_argument("request index out of range");
    switch (kind) {
      case InstanceKind::OMM:
        for (int c : capacities)
          if (c != 1) throw std::invalid_argument("OMM requires unit capacities");
        break;
      case InstanceKind::OMM_S:
        for (int c : capacities)
          if (c != 1) throw std::invalid_argument("OMM_S requires unit capacities");
        for (int r : requests)
          if (!seen[r]) throw std::invalid_argument("OMM_S requests must sit on sites");
        break;
      case InstanceKind::OMT_S2: {
        if (!on_tree()) throw std::invalid_argument("OMT_S2 requires a tree geometry");
        if (!tree().is_power_of_two())
          throw std::invalid_argument("OMT_S2 requires power-of-two weights");
        if (num_sites() != n) throw std::invalid_argument("OMT_S2 sites must cover all vertices");
        for (int c : capacities)
          if (c != 1) throw std::invalid_argument("OMT_S2 requires unit capacities");
        break;
      }
      case InstanceKind::OTR:
        break;
    }
  }
};

inline OnlineInstance tree_instance(const WeightedTree& tree, std::vector<int> requests) {
  OnlineInstance inst;
  inst.kind = InstanceKind::OMT_S2;
  inst.geometry = tree;
  inst.sites.resize(tree.size());
  std::iota(inst.sites.begin(), inst.sites.end(), 0);
  inst.capacities.assign(tree.size(), 1);
  inst.requests = std::move(requests);
  return inst;
}

// Rescale so the minimum positive distance is exactly 1; returns the original
// minimum as the scale factor. Spaces with fewer than two points are returned
// unchanged with scale 1.
inline std::pair<MetricSpace, Rat> normalize(const MetricSpace& space) {
  if (space.size() < 2) return {space, Rat(1)};
  Rat scale = space.min_positive_distance();
  return {space.scaled_by_inverse(scale), scale};
}

// All |positions|^k request sequences in lexicographic order.
class SequenceEnumerator {
 public:
  SequenceEnumerator(std::vector<int> positions, int k)
      : positions_(std::move(positions)), k_(k) {
    if (k_ < 0) throw std::invalid_argument("sequence length must be >= 0");
  }

  // Fills `out` with the next sequence; false once exhausted.
  bool next(std::vector<int>& out) {
    if (done_) return false;
    if (odometer_.empty() && !started_) {
      odometer_.assign(k_, 0);
      started_ = true;
    }
    out.resize(k_);
    for (int i = 0; i < k_; ++i) out[i] = positions_[odometer_[i]];
    done_ = !advance();
    return true;
  }

  unsigned long long count() const {
    unsigned long long c = 1;
    for (int i = 0; i < k_; ++i) c *= positions_.size();
    return c;
  }

 private:
  bool advance() {
    if (k_ == 0) return false;
    for (int i = k_ - 1; i >= 0; --i) {
      if (++odometer_[i] < static_cast<int>(positions_.size())) return true;
      odometer_[i] = 0;
    }
    return false;
  }

  std::vector<int> positions_;
  int k_;
  std::vector<int> odometer_;
  bool started_ = false;
  bool done_ = false;
};

// Labeled tree from its Pruefer sequence (empty sequence for n == 2).
inline WeightedTree tree_from_pruefer(int n, const std::vector<int>& pruefer,
                                      const std::vector<Rat>& edge_weights) {
  if (n == 1) return WeightedTree();
  std::vector<int> degree(n, 1);
  for (int v : pruefer) ++degree[v];
  std::vector<TreeEdge> edges;
  std::vector<char> used(n, 0);
  int leaf = -1;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) {
      leaf = v;
      break;
    }
  int ptr = leaf;
  for (int v : pruefer) {
    edges.push_back({leaf, v, Rat(1)});
    if (--degree[v] == 1 && v < ptr) {
      leaf = v;
    } else {
      while (++ptr < n && degree[ptr] != 1) {
      }
      leaf = ptr;
    }
  }
  edges.push_back({leaf, n - 1, Rat(1)});
  // Canonical edge order for weight assignment: sorted (min,max) endpoint pairs.
  for (auto& e : edges)
    if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(edges.begin(), edges.end(), [](const TreeEdge& a, const TreeEdge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  if (edge_weights.size() != edges.size())
    throw std::invalid_argument("need one weight per edge");
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].weight = edge_weights[i];
  return WeightedTree(n, edges, 0);
}

// All labeled trees on n vertices crossed with all weight assignments drawn
// from 2^e for e in `exponents`. Rooted at 0. Guarded to n <= 6.
template <typename Fn>
void enumerate_small_trees(int n, const std::vector<int>& exponents, Fn&& fn) {
  if (n < 1 || n > 6) throw std::invalid_argument("enumerate_small_trees supports 1 <= n <= 6");
  if (n == 1) {
    fn(WeightedTree());
    return;
  }
  std::vector<Rat> weights;
  for (int e : exponents) {
    if (e < 0) throw std::invalid_argument("exponents must be >= 0");
    Rat w = 1;
    for (int i = 0; i < e; ++i) w *= 2;
    weights.push_back(w);
  }
  std::vector<int> pruefer(n - 2, 0);
  while (true) {
    std::vector<int> widx(n - 1, 0);
    while (true) {
      std::vector<Rat> ws(n - 1);
      for (int i = 0; i < n - 1; ++i) ws[i] = weights[widx[i]];
      fn(tree_from_pruefer(n, pruefer, ws));
      int i = n - 2;
      while (i >= 0 && ++widx[i] == static_cast<int>(weights.size())) widx[i--] = 0;
      if (i < 0) break;
    }
    int i = n - 3;
    while (i >= 0 && ++pruefer[i] == n) pruefer[i--] = 0;
    if (i < 0) break;
  }
}

enum class InstanceShape { RandomTree, Path, Star, RandomMetric };

inline std::string shape_name(InstanceShape s) {
  switch (s) {
    case InstanceShape::RandomTree: return "random-tree";
    case InstanceShape::Path: return "path";
    case InstanceShape::Star: return "star";
    case InstanceShape::RandomMetric: return "random-metric";
  }
  return "?";
}

enum class CapacityScheme { Balanced, Random };

struct GeneratorConfig {
  std::uint64_t seed = 1;
  InstanceShape shape = InstanceShape::RandomTree;
  InstanceKind kind = InstanceKind::OMT_S2;
  int n = 4;       // points / vertices
  int m = 4;       // sites
  int k = 4;       // requests (and total capacity)
  int exp_lo = 0;  // tree weights drawn as 2^e, e in [exp_lo, exp_hi]
  int exp_hi = 2;
  CapacityScheme capacity_scheme = CapacityScheme::Balanced;
};

// Metric closure of a random integer-weighted complete graph: a genuine
// metric without rejection sampling.
inline MetricSpace random_metric(SplitMix64& rng, int n, int max_weight = 20) {
  std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Rat w = make_rat(rng.uniform_int(1, max_weight));
      d[i][j] = d[j][i] = w;
    }
  for (int via = 0; via < n; ++via)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && d[i][via] + d[via][j] < d[i][j]) d[i][j] = d[i][via] + d[via][j];
  return MetricSpace(d);
}

inline WeightedTree random_power_of_two_tree(SplitMix64& rng, int n, int exp_lo, int exp_hi,
                                             InstanceShape shape = InstanceShape::RandomTree) {
  if (n == 1) return WeightedTree();
  auto draw_weight = [&] {
    int e = static_cast<int>(rng.uniform_int(exp_lo, exp_hi));
    Rat w = 1;
    for (int i = 0; i < e; ++i) w *= 2;
    return w;
  };
  std::vector<TreeEdge> edges;
  switch (shape) {
    case InstanceShape::Path:
      for (int v = 1; v < n; ++v) edges.push_back({v - 1, v, draw_weight()});
      break;
    case InstanceShape::Star:
      for (int v = 1; v < n; ++v) edges.push_back({0, v, draw_weight()});
      break;
    default: {
      std::vector<int> pruefer(n >= 3 ? n - 2 : 0);
      for (int& x : pruefer) x = static_cast<int>(rng.uniform_int(0, n - 1));
      std::vector<Rat> ws(n - 1);
      for (auto& w : ws) w = draw_weight();
      return tree_from_pruefer(n, pruefer, ws);
    }
  }
  return WeightedTree(n, edges, 0);
}

// Deterministic instance from a config; the same config always yields the
// same instance.
inline OnlineInstance generate(const GeneratorConfig& cfg) {
  bool sites_cover_points =
      cfg.kind == InstanceKind::OMT_S2 || cfg.kind == InstanceKind::OMM_S;
  if (cfg.n < 1) throw std::invalid_argument("infeasible generator config");
  if (!sites_cover_points && (cfg.m < 1 || cfg.m > cfg.n || cfg.k < cfg.m))
    throw std::invalid_argument("infeasible generator config");
  SplitMix64 rng(cfg.seed);
  OnlineInstance inst;
  inst.kind = cfg.kind;
  inst.seed = cfg.seed;

  bool tree_geometry = cfg.shape != InstanceShape::RandomMetric;
  if (tree_geometry)
    inst.geometry = random_power_of_two_tree(rng, cfg.n, cfg.exp_lo, cfg.exp_hi, cfg.shape);
  else
    inst.geometry = random_metric(rng, cfg.n);

  if (cfg.kind == InstanceKind::OMT_S2 || cfg.kind == InstanceKind::OMM_S) {
    inst.sites.resize(cfg.n);
    std::iota(inst.sites.begin(), inst.sites.end(), 0);
  } else {
    std::vector<int> points(cfg.n);
    std::iota(points.begin(), points.end(), 0);
    rng.shuffle(points);
    inst.sites.assign(points.begin(), points.begin() + cfg.m);
    std::sort(inst.sites.begin(), inst.sites.end());
  }

  int m = inst.num_sites();
  int k = (cfg.kind == InstanceKind::OTR) ? cfg.k : m;
  if (cfg.kind != InstanceKind::OTR) {
    inst.capacities.assign(m, 1);
  } else if (cfg.capacity_scheme == CapacityScheme::Random) {
    // Random composition of k into m positive parts.
    inst.capacities.assign(m, 1);
    for (int extra = 0; extra < k - m; ++extra)
      ++inst.capacities[static_cast<std::size_t>(rng.uniform_int(0, m - 1))];
  } else {
    inst.capacities.assign(m, k / m);
    for (int i = 0; i < k % m; ++i) ++inst.capacities[i];
  }

  // Requests on sites for the matching-on-sites variants, anywhere otherwise.
  std::vector<int> request_pool;
  if (cfg.kind == InstanceKind::OMT_S2 || cfg.kind == InstanceKind::OMM_S) {
    request_pool = inst.sites;
  } else {
    request_pool.resize(cfg.n);
    std::iota(request_pool.begin(), request_pool.end(), 0);
  }
  inst.requests.resize(k);
  for (int t = 0; t < k; ++t)
    inst.requests[t] =
        request_pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(request_pool.size()) - 1))];
  inst.validate();
  return inst;
}

}  // namespace otr
