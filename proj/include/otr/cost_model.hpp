#pragma once

#include <stdexcept>
#include <string>

#include "otr/instance.hpp"

namespace otr {

// How assignment costs are measured: the ambient metric, the tree path
// distance, or the tree max-weight distance.
class CostModel {
 public:
  enum class Kind { Metric, TreePath, TreeMaxWeight };

  static CostModel metric() { return CostModel(Kind::Metric); }
  static CostModel tree_path() { return CostModel(Kind::TreePath); }
  static CostModel tree_max_weight() { return CostModel(Kind::TreeMaxWeight); }

  Kind kind() const { return kind_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Metric: return "metric";
      case Kind::TreePath: return "tree-path";
      case Kind::TreeMaxWeight: return "tree-max-weight";
    }
    return "?";
  }

  Rat cost(const OnlineInstance& inst, int a, int b) const {
    switch (kind_) {
      case Kind::Metric:
        return inst.dist(a, b);
      case Kind::TreePath:
        return require_tree(inst).path_distance(a, b);
      case Kind::TreeMaxWeight:
        return require_tree(inst).max_weight_distance(a, b);
    }
    throw std::logic_error("unreachable");
  }

 private:
  explicit CostModel(Kind k) : kind_(k) {}
  static const WeightedTree& require_tree(const OnlineInstance& inst) {
    if (!inst.on_tree()) throw std::invalid_argument("tree cost model on a non-tree instance");
    return inst.tree();
  }
  Kind kind_;
};

}  // namespace otr
