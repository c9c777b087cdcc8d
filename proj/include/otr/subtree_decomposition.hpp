#pragma once

#include <memory>
#include <vector>

#include "otr/decomposition.hpp"
#include "otr/mpfs.hpp"

namespace otr {

// Subtree-Decomposition on a power-of-two weighted tree.
//
// Selection walks the decomposition: with a free server in the light part the
// run is in phase 1 and a request in a heavy part falls back to the light
// part via the pseudo-request par(rho_i); with the light part exhausted the
// run is in phase 2 and falls across the side split via the pseudo-request
// rho^(3-j). The preference list builds the same order statically by
// concatenating the sub-algorithms' lists.
class SdAlgorithm : public MpfsAlgorithm {
 public:
  explicit SdAlgorithm(const WeightedTree& tree)
      : tree_(std::make_shared<const WeightedTree>(tree)),
        decomp_(std::make_shared<const Decomposition>(*tree_)) {}

  std::string name() const override { return "sd"; }
  const WeightedTree& tree() const { return *tree_; }
  const Decomposition& decomposition() const { return *decomp_; }

  std::vector<int> preference_list(int request) const override {
    std::vector<int> out;
    out.reserve(tree_->size());
    build_preference(decomp_->root_node(), request, nullptr, out);
    return out;
  }

  int select(int request, const std::vector<int>& free_sites) const override {
    if (free_sites.empty()) throw std::invalid_argument("select on empty free set");
    std::vector<int> counts(decomp_->node_count(), 0);
    for (int s : free_sites)
      for (int id : decomp_->nodes_containing(s)) ++counts[id];
    return dispatch(decomp_->root_node(), request, counts);
  }

  std::unique_ptr<OnlineRun> start_run(std::vector<int> free_sites) const override;

  int dispatch(int id, int x, const std::vector<int>& counts) const {
    const Decomposition& d = *decomp_;
    const auto& nd = d.node(id);
    if (nd.leaf) return nd.verts[0];
    int i = d.part_of(id, x);
    if (counts[nd.part_child[0]] > 0) {  // phase 1: light part still has a free server
      if (counts[nd.part_child[i]] > 0) return dispatch(nd.part_child[i], x, counts);
      return dispatch(nd.part_child[0], nd.heavy_parents[i - 1], counts);
    }
    // phase 2: no free server in the light part
    if (counts[nd.part_child[i]] > 0) return dispatch(nd.part_child[i], x, counts);
    int j = d.side_of(id, x);
    if (counts[nd.side_child[j]] > 0) return dispatch(nd.side_child[j], x, counts);
    return dispatch(nd.side_child[1 - j], d.side_root(id, 1 - j), counts);
  }

 private:
  // Appends the preference order of the subtree at `id` for request x,
  // keeping only vertices that pass `keep` (all when null).
  void build_preference(int id, int x, const std::vector<const Decomposition::Node*>* exclude,
                        std::vector<int>& out) const {
    const Decomposition& d = *decomp_;
    const auto& nd = d.node(id);
    auto emit = [&](int v) {
      if (exclude)
        for (const auto* ex : *exclude)
          if (ex->contains(v)) return;
      out.push_back(v);
    };
    if (nd.leaf) {
      emit(nd.verts[0]);
      return;
    }
    int i = d.part_of(id, x);
    int j = d.side_of(id, x);
    const auto* t0 = &d.node(nd.part_child[0]);
    if (i == 0) {
      append_list(nd.part_child[0], x, exclude, out);
      append_filtered(nd.side_child[j], x, {t0}, exclude, out);
      append_filtered(nd.side_child[1 - j], d.side_root(id, 1 - j), {t0}, exclude, out);
    } else {
      const auto* ti = &d.node(nd.part_child[i]);
      append_list(nd.part_child[i], x, exclude, out);
      append_list(nd.part_child[0], nd.heavy_parents[i - 1], exclude, out);
      append_filtered(nd.side_child[j], x, {t0, ti}, exclude, out);
      append_filtered(nd.side_child[1 - j], d.side_root(id, 1 - j), {t0}, exclude, out);
    }
  }

  void append_list(int id, int x, const std::vector<const Decomposition::Node*>* exclude,
                   std::vector<int>& out) const {
    build_preference(id, x, exclude, out);
  }

  void append_filtered(int id, int x, std::vector<const Decomposition::Node*> extra,
                       const std::vector<const Decomposition::Node*>* exclude,
                       std::vector<int>& out) const {
    if (exclude) extra.insert(extra.end(), exclude->begin(), exclude->end());
    build_preference(id, x, &extra, out);
  }

  std::shared_ptr<const WeightedTree> tree_;
  std::shared_ptr<const Decomposition> decomp_;
};

// Run state: one free-server counter per decomposition node, so each
// selection costs time linear in the tree and capacity updates touch only the
// nodes containing the filled site.
class SdRun : public OnlineRun {
 public:
  SdRun(const SdAlgorithm& alg, const std::vector<int>& free_sites)
      : alg_(&alg), counts_(alg.decomposition().node_count(), 0) {
    for (int s : free_sites)
      for (int id : alg_->decomposition().nodes_containing(s)) ++counts_[id];
  }

  int choose(int request) override {
    return alg_->dispatch(alg_->decomposition().root_node(), request, counts_);
  }

  void site_full(int site) override {
    for (int id : alg_->decomposition().nodes_containing(site)) --counts_[id];
  }

 private:
  const SdAlgorithm* alg_;
  std::vector<int> counts_;
};

inline std::unique_ptr<OnlineRun> SdAlgorithm::start_run(std::vector<int> free_sites) const {
  return std::make_unique<SdRun>(*this, free_sites);
}

}  // namespace otr
