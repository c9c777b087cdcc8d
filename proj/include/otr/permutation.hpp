#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "otr/mpfs.hpp"

namespace otr {

// Permutation baseline for unit-capacity instances. It maintains a minimum
// cost offline matching of the requests seen so far and assigns each request
// to the one free site that enters the matched-site set. History-dependent,
// so it sits outside the MPFS interface. Tie-break: the lexicographically
// smallest optimal matching (by site index in request order) among those
// whose site set extends the previous one.
class PermutationAlgorithm : public OnlineAlgorithm {
 public:
  explicit PermutationAlgorithm(const OnlineInstance& inst)
      : geometry_(inst.geometry), sites_(inst.sites) {
    for (int c : inst.capacities)
      if (c != 1) throw std::invalid_argument("permutation requires unit capacities");
    if (sites_.size() > 8) throw std::invalid_argument("permutation oracle guarded to 8 sites");
  }

  std::string name() const override { return "permutation"; }

  std::unique_ptr<OnlineRun> start_run(std::vector<int> free_sites) const override {
    return std::make_unique<Run>(*this, std::move(free_sites));
  }

  Rat dist(int a, int b) const {
    return std::holds_alternative<WeightedTree>(geometry_)
               ? std::get<WeightedTree>(geometry_).path_distance(a, b)
               : std::get<MetricSpace>(geometry_).dist(a, b);
  }

 private:
  class Run : public OnlineRun {
   public:
    Run(const PermutationAlgorithm& alg, std::vector<int> free_sites)
        : alg_(&alg), free_(std::move(free_sites)) {
      std::sort(free_.begin(), free_.end());
    }

    int choose(int request) override {
      history_.push_back(request);
      std::vector<int> matching = best_matching();
      std::vector<int> used = matching;
      std::sort(used.begin(), used.end());
      std::vector<int> fresh;
      std::set_difference(used.begin(), used.end(), prev_used_.begin(), prev_used_.end(),
                          std::back_inserter(fresh));
      if (fresh.size() != 1)
        throw std::logic_error("prefix matchings do not differ by exactly one site");
      prev_used_ = std::move(used);
      int site = fresh[0];
      if (!std::binary_search(free_.begin(), free_.end(), site))
        throw std::logic_error("permutation picked a site it already filled");
      return site;
    }

    void site_full(int site) override {
      free_.erase(std::remove(free_.begin(), free_.end(), site), free_.end());
    }

   private:
    // Lexicographically smallest min-cost matching of `history_` into the
    // sites whose site set contains every previously used site.
    std::vector<int> best_matching() const {
      const std::vector<int>& sites = alg_->sites_;
      int t = static_cast<int>(history_.size());
      std::optional<Rat> best_cost;     // restricted to matchings covering prev_used_
      std::optional<Rat> global_cost;   // unrestricted optimum, for the extension check
      std::vector<int> best;
      std::vector<int> current(t, -1);
      std::vector<char> taken(sites.size(), 0);
      Rat running = 0;
      auto covers_prev = [&](const std::vector<int>& m) {
        std::vector<int> used(m);
        std::sort(used.begin(), used.end());
        return std::includes(used.begin(), used.end(), prev_used_.begin(), prev_used_.end());
      };
      auto recurse = [&](auto&& self, int i) -> void {
        if (i == t) {
          if (!global_cost || running < *global_cost) global_cost = running;
          if (!covers_prev(current)) return;
          if (!best_cost || running < *best_cost ||
              (running == *best_cost && current < best)) {
            best_cost = running;
            best = current;
          }
          return;
        }
        for (std::size_t s = 0; s < sites.size(); ++s) {
          if (taken[s]) continue;
          taken[s] = 1;
          Rat c = alg_->dist(history_[i], sites[s]);
          running += c;
          current[i] = sites[s];
          self(self, i + 1);
          running -= c;
          taken[s] = 0;
        }
      };
      recurse(recurse, 0);
      if (!best_cost) throw std::logic_error("no feasible prefix matching");
      // Some optimal matching always extends the previous site set; the
      // restricted optimum therefore matches the global one.
      if (*best_cost != *global_cost)
        throw std::logic_error("no optimal prefix matching extends the previous sites");
      return best;
    }

    const PermutationAlgorithm* alg_;
    std::vector<int> free_;
    std::vector<int> history_;
    std::vector<int> prev_used_;  // sorted matched-site set of the previous prefix
  };

  std::variant<MetricSpace, WeightedTree> geometry_;
  std::vector<int> sites_;
};

}  // namespace otr
