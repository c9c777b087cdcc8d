#pragma once

#include <algorithm>
#include <cassert>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "otr/instance.hpp"

namespace otr {

// Mutable per-run state owned by run_online. choose() must return a currently
// free site; site_full() reports that a site's capacity is exhausted.
class OnlineRun {
 public:
  virtual ~OnlineRun() = default;
  virtual int choose(int request) = 0;
  virtual void site_full(int site) = 0;
};

class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<OnlineRun> start_run(std::vector<int> free_sites) const = 0;
};

// Most-preferred-free-server algorithms: a per-request total order over the
// sites that does not depend on history. Selection takes the first free site
// in that order.
class MpfsAlgorithm : public OnlineAlgorithm {
 public:
  // Total order (no ties) over all sites for this request position.
  virtual std::vector<int> preference_list(int request) const = 0;

  // First free site in preference order. `free_sites` holds each free site once.
  virtual int select(int request, const std::vector<int>& free_sites) const {
    if (free_sites.empty()) throw std::invalid_argument("select on empty free set");
    for (int s : preference_list(request))
      if (std::find(free_sites.begin(), free_sites.end(), s) != free_sites.end()) return s;
    throw std::logic_error("preference list missed every free site");
  }

  std::unique_ptr<OnlineRun> start_run(std::vector<int> free_sites) const override;
};

class GenericMpfsRun : public OnlineRun {
 public:
  GenericMpfsRun(const MpfsAlgorithm& alg, std::vector<int> free_sites)
      : alg_(&alg), free_(std::move(free_sites)) {
    std::sort(free_.begin(), free_.end());
  }
  int choose(int request) override { return alg_->select(request, free_); }
  void site_full(int site) override {
    free_.erase(std::remove(free_.begin(), free_.end(), site), free_.end());
  }

 private:
  const MpfsAlgorithm* alg_;
  std::vector<int> free_;
};

inline std::unique_ptr<OnlineRun> MpfsAlgorithm::start_run(std::vector<int> free_sites) const {
  return std::make_unique<GenericMpfsRun>(*this, std::move(free_sites));
}

struct TraceStep {
  int request = -1;
  int site = -1;
  Rat cost;
  std::vector<int> free_after;  // free sites after this assignment (sorted)
};

struct AssignmentTrace {
  std::vector<TraceStep> steps;
  Rat total_cost;
};

struct RunOptions {
  bool record_free_sets = true;
  // The co-location rule: a request arriving on a free site goes there.
  // Hybrid runs override one step on purpose and opt out.
  bool enforce_colocation = true;
};

// Processes the request sequence left to right. A site stays free until its
// capacity is exhausted. A request arriving at a free site's own position must
// be assigned there; that is asserted for every algorithm we run.
inline AssignmentTrace run_online_seq(const OnlineInstance& inst, const OnlineAlgorithm& alg,
                                      const std::vector<int>& requests,
                                      const RunOptions& opts = {}) {
  std::vector<int> free_sites = inst.sites;
  std::sort(free_sites.begin(), free_sites.end());
  std::vector<int> remaining(inst.num_points(), 0);
  for (std::size_t i = 0; i < inst.sites.size(); ++i)
    remaining[inst.sites[i]] = inst.capacities[i];

  auto run = alg.start_run(free_sites);
  AssignmentTrace trace;
  trace.total_cost = 0;
  for (int r : requests) {
    if (free_sites.empty()) throw std::logic_error("no free site left for a request");
    int s = run->choose(r);
    if (!std::binary_search(free_sites.begin(), free_sites.end(), s))
      throw std::logic_error("algorithm chose a full or unknown site");
    Rat step_cost = inst.dist(r, s);
    // Co-located free site: the only admissible choice.
    if (opts.enforce_colocation && step_cost > 0) {
      for (int f : free_sites)
        if (inst.dist(r, f) == 0)
          throw std::logic_error("request at a free site's position was sent elsewhere");
    }
    if (--remaining[s] == 0) {
      free_sites.erase(std::lower_bound(free_sites.begin(), free_sites.end(), s));
      run->site_full(s);
    }
    TraceStep step;
    step.request = r;
    step.site = s;
    step.cost = step_cost;
    if (opts.record_free_sets) step.free_after = free_sites;
    trace.total_cost += step_cost;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

inline AssignmentTrace run_online(const OnlineInstance& inst, const OnlineAlgorithm& alg,
                                  const RunOptions& opts = {}) {
  return run_online_seq(inst, alg, inst.requests, opts);
}

// Natural greedy: sites ordered by distance to the request, ties by index.
class GreedyAlgorithm : public MpfsAlgorithm {
 public:
  GreedyAlgorithm(std::variant<MetricSpace, WeightedTree> geometry, std::vector<int> sites)
      : geometry_(std::move(geometry)), sites_(std::move(sites)) {}

  explicit GreedyAlgorithm(const OnlineInstance& inst)
      : GreedyAlgorithm(inst.geometry, inst.sites) {}

  std::string name() const override { return "greedy"; }

  std::vector<int> preference_list(int request) const override {
    std::vector<int> order = sites_;
    std::vector<Rat> d(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) d[i] = dist(request, order[i]);
    std::vector<std::size_t> idx(order.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (d[a] != d[b]) return d[a] < d[b];
      return order[a] < order[b];
    });
    std::vector<int> out;
    out.reserve(order.size());
    for (std::size_t i : idx) out.push_back(order[i]);
    return out;
  }

 private:
  Rat dist(int a, int b) const {
    return std::holds_alternative<WeightedTree>(geometry_)
               ? std::get<WeightedTree>(geometry_).path_distance(a, b)
               : std::get<MetricSpace>(geometry_).dist(a, b);
  }

  std::variant<MetricSpace, WeightedTree> geometry_;
  std::vector<int> sites_;
};

// Wrapper that moves each request to its nearest site (ties to the lower
// index) before delegating; keeps the MPFS property of the inner algorithm.
class NearestSiteLift : public MpfsAlgorithm {
 public:
  NearestSiteLift(std::shared_ptr<const MpfsAlgorithm> inner, MetricSpace metric,
                  std::vector<int> sites)
      : inner_(std::move(inner)), metric_(std::move(metric)), sites_(std::move(sites)) {}

  std::string name() const override { return inner_->name() + "+nearest-site"; }

  int nearest_site(int point) const {
    int best = -1;
    for (int s : sites_) {
      if (best < 0 || metric_.dist(point, s) < metric_.dist(point, best) ||
          (metric_.dist(point, s) == metric_.dist(point, best) && s < best))
        best = s;
    }
    return best;
  }

  std::vector<int> preference_list(int request) const override {
    return inner_->preference_list(nearest_site(request));
  }

  int select(int request, const std::vector<int>& free_sites) const override {
    return inner_->select(nearest_site(request), free_sites);
  }

  std::unique_ptr<OnlineRun> start_run(std::vector<int> free_sites) const override {
    class Run : public OnlineRun {
     public:
      Run(const NearestSiteLift& lift, std::unique_ptr<OnlineRun> inner)
          : lift_(&lift), inner_(std::move(inner)) {}
      int choose(int request) override { return inner_->choose(lift_->nearest_site(request)); }
      void site_full(int site) override { inner_->site_full(site); }

     private:
      const NearestSiteLift* lift_;
      std::unique_ptr<OnlineRun> inner_;
    };
    return std::make_unique<Run>(*this, inner_->start_run(std::move(free_sites)));
  }

 private:
  std::shared_ptr<const MpfsAlgorithm> inner_;
  MetricSpace metric_;
  std::vector<int> sites_;
};

inline std::shared_ptr<MpfsAlgorithm> lift_nearest_site(std::shared_ptr<const MpfsAlgorithm> inner,
                                                        const MetricSpace& metric,
                                                        const std::vector<int>& sites) {
  return std::make_shared<NearestSiteLift>(std::move(inner), metric, sites);
}

}  // namespace otr
