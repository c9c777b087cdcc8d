#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "otr/cost_model.hpp"
#include "otr/instance.hpp"

namespace otr {

// Exact min-cost assignment of requests to capacitated sites: successive
// shortest paths on the request/site bipartite graph, Bellman-Ford per
// augmentation, rational arithmetic throughout.
class MinCostAssignment {
 public:
  // costs[t][i]: cost of putting request t on site index i (into `sites`).
  MinCostAssignment(std::vector<std::vector<Rat>> costs, std::vector<int> capacities)
      : costs_(std::move(costs)), capacities_(std::move(capacities)) {}

  struct Result {
    Rat total;
    std::vector<int> site_of_request;  // site *index* per request
  };

  Result solve() const {
    int k = static_cast<int>(costs_.size());
    int m = static_cast<int>(capacities_.size());
    long long total_cap = 0;
    for (int c : capacities_) total_cap += c;
    if (total_cap < k) throw std::invalid_argument("capacities cannot host all requests");

    // Node layout: 0 = source, 1..k = requests, k+1..k+m = sites, k+m+1 = sink.
    int nodes = k + m + 2;
    int source = 0, sink = nodes - 1;
    struct Arc {
      int to;
      int cap;
      Rat cost;
      int rev;
    };
    std::vector<std::vector<Arc>> g(nodes);
    auto add_arc = [&](int u, int v, int cap, const Rat& cost) {
      g[u].push_back({v, cap, cost, static_cast<int>(g[v].size())});
      g[v].push_back({u, 0, -cost, static_cast<int>(g[u].size()) - 1});
    };
    for (int t = 0; t < k; ++t) add_arc(source, 1 + t, 1, Rat(0));
    for (int t = 0; t < k; ++t)
      for (int i = 0; i < m; ++i) add_arc(1 + t, 1 + k + i, 1, costs_[t][i]);
    for (int i = 0; i < m; ++i) add_arc(1 + k + i, sink, capacities_[i], Rat(0));

    Rat total = 0;
    for (int round = 0; round < k; ++round) {
      // Bellman-Ford shortest path in the residual graph.
      std::vector<std::optional<Rat>> dist(nodes);
      std::vector<std::pair<int, int>> pred(nodes, {-1, -1});
      dist[source] = Rat(0);
      for (int iter = 0; iter < nodes; ++iter) {
        bool changed = false;
        for (int u = 0; u < nodes; ++u) {
          if (!dist[u]) continue;
          for (int ai = 0; ai < static_cast<int>(g[u].size()); ++ai) {
            const Arc& a = g[u][ai];
            if (a.cap <= 0) continue;
            Rat nd = *dist[u] + a.cost;
            if (!dist[a.to] || nd < *dist[a.to]) {
              dist[a.to] = nd;
              pred[a.to] = {u, ai};
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (!dist[sink]) throw std::logic_error("no augmenting path though capacity remains");
      total += *dist[sink];
      for (int v = sink; v != source;) {
        auto [u, ai] = pred[v];
        g[u][ai].cap -= 1;
        g[g[u][ai].to][g[u][ai].rev].cap += 1;
        v = u;
      }
    }

    Result res;
    res.total = total;
    res.site_of_request.assign(k, -1);
    for (int t = 0; t < k; ++t)
      for (const Arc& a : g[1 + t])
        if (a.to >= 1 + k && a.to < 1 + k + m && a.cap == 0 && a.cost >= 0)
          res.site_of_request[t] = a.to - (1 + k);
    verify_optimal(g, nodes);
    return res;
  }

 private:
  // Optimality certificate: a maximal flow is min-cost iff the residual graph
  // has no negative cycle.
  template <typename Graph>
  static void verify_optimal(const Graph& g, int nodes) {
    std::vector<Rat> dist(nodes, Rat(0));
    for (int iter = 0; iter < nodes; ++iter) {
      bool changed = false;
      for (int u = 0; u < nodes; ++u)
        for (const auto& a : g[u])
          if (a.cap > 0 && dist[u] + a.cost < dist[a.to]) {
            dist[a.to] = dist[u] + a.cost;
            changed = true;
          }
      if (!changed) return;
      if (iter == nodes - 1) throw std::logic_error("negative residual cycle: flow not optimal");
    }
  }

  std::vector<std::vector<Rat>> costs_;
  std::vector<int> capacities_;
};

// Minimum total cost of assigning all requests to sites, respecting
// capacities, under the given cost model.
inline Rat opt_cost(const OnlineInstance& inst, const CostModel& model) {
  int k = inst.num_requests();
  int m = inst.num_sites();
  std::vector<std::vector<Rat>> costs(k, std::vector<Rat>(m));
  for (int t = 0; t < k; ++t)
    for (int i = 0; i < m; ++i) costs[t][i] = model.cost(inst, inst.requests[t], inst.sites[i]);
  return MinCostAssignment(costs, inst.capacities).solve().total;
}

// Independent oracle: plain enumeration over all capacity-respecting
// assignments. Exponential; guarded to small k.
inline Rat opt_cost_brute_force(const OnlineInstance& inst, const CostModel& model, int max_k = 4) {
  int k = inst.num_requests();
  if (k > max_k) throw std::invalid_argument("brute-force oracle guarded to small k");
  int m = inst.num_sites();
  std::vector<int> remaining = inst.capacities;
  std::optional<Rat> best;
  Rat running = 0;
  auto recurse = [&](auto&& self, int t) -> void {
    if (t == k) {
      if (!best || running < *best) best = running;
      return;
    }
    for (int i = 0; i < m; ++i) {
      if (remaining[i] == 0) continue;
      Rat c = model.cost(inst, inst.requests[t], inst.sites[i]);
      --remaining[i];
      running += c;
      self(self, t + 1);
      running -= c;
      ++remaining[i];
    }
  };
  recurse(recurse, 0);
  if (!best) throw std::logic_error("no feasible assignment");
  return *best;
}

}  // namespace otr
