#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <vector>

#include "otr/mst.hpp"
#include "otr/subtree_decomposition.hpp"

namespace otr {

// Conversion of Subtree-Decomposition to a general metric: restrict the
// metric to the sites, rescale so the closest site pair is at distance 1,
// take the minimum spanning tree, round its weights up to powers of two, and
// run Subtree-Decomposition on that tree. Selection happens on the tree;
// costs stay in the original metric and original units.
class BStarAlgorithm : public MpfsAlgorithm {
 public:
  BStarAlgorithm(const MetricSpace& space, std::vector<int> sites) : sites_(std::move(sites)) {
    if (sites_.empty()) throw std::invalid_argument("b* needs at least one site");
    std::sort(sites_.begin(), sites_.end());
    MetricSpace site_metric = space.restrict_to(sites_);
    auto [normalized, scale] = normalize(site_metric);
    scale_ = scale;
    tree_ = round_to_power_of_two(mst_of_metric(normalized));
    inner_ = std::make_shared<SdAlgorithm>(tree_);
  }

  std::string name() const override { return "bstar"; }
  const WeightedTree& tree() const { return tree_; }
  const Rat& scale() const { return scale_; }
  const std::vector<int>& sites() const { return sites_; }

  std::vector<int> preference_list(int request) const override {
    std::vector<int> verts = inner_->preference_list(vertex_of(request));
    for (int& v : verts) v = sites_[v];
    return verts;
  }

  int select(int request, const std::vector<int>& free_sites) const override {
    std::vector<int> free_verts = to_vertices(free_sites);
    return sites_[inner_->select(vertex_of(request), free_verts)];
  }

  std::unique_ptr<OnlineRun> start_run(std::vector<int> free_sites) const override {
    class Run : public OnlineRun {
     public:
      Run(const BStarAlgorithm& alg, std::unique_ptr<OnlineRun> inner)
          : alg_(&alg), inner_(std::move(inner)) {}
      int choose(int request) override {
        return alg_->sites_[inner_->choose(alg_->vertex_of(request))];
      }
      void site_full(int site) override { inner_->site_full(alg_->vertex_of(site)); }

     private:
      const BStarAlgorithm* alg_;
      std::unique_ptr<OnlineRun> inner_;
    };
    return std::make_unique<Run>(*this, inner_->start_run(to_vertices(free_sites)));
  }

 private:
  int vertex_of(int site) const {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), site);
    if (it == sites_.end() || *it != site)
      throw std::invalid_argument("b* request must sit on a site; lift it first");
    return static_cast<int>(it - sites_.begin());
  }

  std::vector<int> to_vertices(const std::vector<int>& site_points) const {
    std::vector<int> verts;
    verts.reserve(site_points.size());
    for (int s : site_points) verts.push_back(vertex_of(s));
    return verts;
  }

  std::vector<int> sites_;
  Rat scale_;
  WeightedTree tree_;
  std::shared_ptr<SdAlgorithm> inner_;
};

inline std::shared_ptr<BStarAlgorithm> build_bstar(const MetricSpace& space,
                                                   const std::vector<int>& sites) {
  return std::make_shared<BStarAlgorithm>(space, sites);
}

// The full transportation pipeline: nearest-site relocation in front of B*.
inline std::shared_ptr<MpfsAlgorithm> build_pipeline(const MetricSpace& space,
                                                     const std::vector<int>& sites) {
  return lift_nearest_site(build_bstar(space, sites), space, sites);
}

}  // namespace otr
