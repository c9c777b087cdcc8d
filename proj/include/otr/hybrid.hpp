#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "otr/cost_model.hpp"
#include "otr/mpfs.hpp"
#include "otr/subtree_decomposition.hpp"

namespace otr {

// A hybrid of a base algorithm: identical except that the t_d-th request is
// forced onto a_d when a_d is still free at that moment.
struct HybridSpec {
  int t_d = 1;  // decoupling time, 1-based
  int a_d = 0;  // decoupling server (site id)
};

// Per-time difference of the two runs' free sets. h[i] is free for the
// hybrid but full for the base at time t_d + i; a[i] the other way round.
struct CavityTrace {
  bool valid = false;
  int t_d = 1;
  int a_d = -1;
  int t_c = 0;
  std::vector<int> h;
  std::vector<int> a;

  int steps() const { return static_cast<int>(h.size()); }
  std::vector<int> cavity_set() const {
    std::vector<int> all(h);
    all.insert(all.end(), a.begin(), a.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
  }
};

struct HybridOutcome {
  AssignmentTrace base_trace;
  AssignmentTrace hybrid_trace;
  CavityTrace cav;
};

namespace detail {
// Forces request t_d onto a_d when free, then defers to the wrapped run.
class ForcedRun : public OnlineRun {
 public:
  ForcedRun(std::unique_ptr<OnlineRun> inner, HybridSpec spec, std::vector<int> free_sites)
      : inner_(std::move(inner)), spec_(spec), free_(std::move(free_sites)) {
    std::sort(free_.begin(), free_.end());
  }
  int choose(int request) override {
    ++t_;
    if (t_ == spec_.t_d && std::binary_search(free_.begin(), free_.end(), spec_.a_d))
      return spec_.a_d;
    return inner_->choose(request);
  }
  void site_full(int site) override {
    free_.erase(std::remove(free_.begin(), free_.end(), site), free_.end());
    inner_->site_full(site);
  }

 private:
  std::unique_ptr<OnlineRun> inner_;
  HybridSpec spec_;
  std::vector<int> free_;
  int t_ = 0;
};
}  // namespace detail

class HybridAlgorithm : public OnlineAlgorithm {
 public:
  HybridAlgorithm(const OnlineAlgorithm& base, HybridSpec spec) : base_(&base), spec_(spec) {}
  std::string name() const override { return "hybrid(" + base_->name() + ")"; }
  std::unique_ptr<OnlineRun> start_run(std::vector<int> free_sites) const override {
    auto inner = base_->start_run(free_sites);
    return std::make_unique<detail::ForcedRun>(std::move(inner), spec_, std::move(free_sites));
  }

 private:
  const OnlineAlgorithm* base_;
  HybridSpec spec_;
};

// Runs base and hybrid side by side on unit-capacity instances and derives
// the cavity trace from the free-set symmetric differences. The singleton
// shape of those differences is enforced here: a violation would falsify the
// uniqueness property of MPFS hybrids and must never fire.
inline HybridOutcome run_hybrid(const OnlineInstance& inst, const OnlineAlgorithm& base,
                                HybridSpec spec) {
  for (int c : inst.capacities)
    if (c != 1) throw std::invalid_argument("cavity tracing needs unit capacities");
  int k = inst.num_requests();
  if (spec.t_d < 1 || spec.t_d > k) throw std::invalid_argument("decoupling time out of range");
  if (std::find(inst.sites.begin(), inst.sites.end(), spec.a_d) == inst.sites.end())
    throw std::invalid_argument("decoupling server is not a site");

  HybridOutcome out;
  out.base_trace = run_online(inst, base);
  HybridAlgorithm hybrid(base, spec);
  RunOptions hybrid_opts;
  hybrid_opts.enforce_colocation = false;  // the forced step may break the rule
  out.hybrid_trace = run_online(inst, hybrid, hybrid_opts);

  CavityTrace& cav = out.cav;
  cav.t_d = spec.t_d;
  cav.a_d = spec.a_d;
  const auto& fa = out.base_trace.steps;
  const auto& fh = out.hybrid_trace.steps;
  // Valid iff a_d stays free for the base run after time t_d.
  const std::vector<int>& base_free = fa[spec.t_d - 1].free_after;
  cav.valid = std::binary_search(base_free.begin(), base_free.end(), spec.a_d);
  if (!cav.valid) return out;

  int t_c = spec.t_d - 1;
  for (int t = spec.t_d; t <= k; ++t) {
    if (fa[t - 1].free_after != fh[t - 1].free_after) t_c = t;
  }
  if (t_c < spec.t_d) throw std::logic_error("valid hybrid with identical free sets");
  cav.t_c = t_c;
  for (int t = spec.t_d; t <= t_c; ++t) {
    const auto& A = fa[t - 1].free_after;
    const auto& H = fh[t - 1].free_after;
    std::vector<int> h_diff, a_diff;
    std::set_difference(H.begin(), H.end(), A.begin(), A.end(), std::back_inserter(h_diff));
    std::set_difference(A.begin(), A.end(), H.begin(), H.end(), std::back_inserter(a_diff));
    if (h_diff.size() != 1 || a_diff.size() != 1)
      throw std::logic_error("free-set difference is not a singleton pair");
    cav.h.push_back(h_diff[0]);
    cav.a.push_back(a_diff[0]);
  }
  if (cav.h.front() != fa[spec.t_d - 1].site)
    throw std::logic_error("first hybrid cavity must be the base choice");
  if (cav.a.front() != spec.a_d)
    throw std::logic_error("first base cavity must be the decoupling server");
  return out;
}

// Ring sum over the closed cavity walk h_td .. h_tc, a_tc .. a_td.
inline Rat hybrid_cycle_length(const OnlineInstance& inst, const CavityTrace& cav,
                               const CostModel& model) {
  if (!cav.valid) throw std::invalid_argument("cycle length of an invalid hybrid trace");
  int m = cav.steps();
  Rat total = model.cost(inst, cav.h[0], cav.a[0]);
  total += model.cost(inst, cav.h[m - 1], cav.a[m - 1]);
  for (int i = 1; i < m; ++i) {
    total += model.cost(inst, cav.h[i - 1], cav.h[i]);
    total += model.cost(inst, cav.a[i - 1], cav.a[i]);
  }
  return total;
}

struct Finding {
  std::string check;
  bool pass = false;
  Rat lhs;
  Rat rhs;
  std::string detail;

  Rat slack() const { return rhs - lhs; }
};

// Step properties of the two cavity sequences against the recorded
// assignments; the construction above never consults these recurrences, so
// this is an independent check.
inline std::vector<Finding> check_cavity_step_properties(const HybridOutcome& out) {
  std::vector<Finding> findings;
  const CavityTrace& cav = out.cav;
  auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
    findings.push_back({name, pass, Rat(pass ? 0 : 1), Rat(0), detail});
  };
  if (!cav.valid) return findings;
  const auto& A = out.base_trace.steps;
  const auto& H = out.hybrid_trace.steps;
  for (int i = 1; i < cav.steps(); ++i) {
    int t = cav.t_d + i;
    bool h_moved = cav.h[i - 1] != cav.h[i];
    bool a_moved = cav.a[i - 1] != cav.a[i];
    add("cavity-step-single-move", !(h_moved && a_moved), "t=" + std::to_string(t));
    if (h_moved) {
      add("cavity-step-h-move",
          A[t - 1].site == cav.h[i] && H[t - 1].site == cav.h[i - 1],
          "t=" + std::to_string(t));
    } else if (a_moved) {
      add("cavity-step-a-move",
          A[t - 1].site == cav.a[i - 1] && H[t - 1].site == cav.a[i],
          "t=" + std::to_string(t));
    } else {
      add("cavity-step-no-move", A[t - 1].site == H[t - 1].site, "t=" + std::to_string(t));
    }
  }
  if (cav.t_c < static_cast<int>(A.size())) {
    int t = cav.t_c + 1;
    add("coupling-step",
        A[t - 1].site == cav.a.back() && H[t - 1].site == cav.h.back(),
        "t=" + std::to_string(t));
  }
  return findings;
}

// Cost difference of the two runs against the cycle length.
inline Finding check_cycle_cost_bound(const OnlineInstance& inst, const HybridOutcome& out,
                                      const CostModel& model) {
  Rat base_cost = 0, hybrid_cost = 0;
  for (const auto& s : out.base_trace.steps) base_cost += model.cost(inst, s.request, s.site);
  for (const auto& s : out.hybrid_trace.steps) hybrid_cost += model.cost(inst, s.request, s.site);
  Rat lhs = base_cost - hybrid_cost;
  Rat rhs = hybrid_cycle_length(inst, out.cav, model);
  return {"cycle-cost-bound", lhs <= rhs, lhs, rhs, ""};
}

// Minimal subtree of the instance tree containing all of `verts`.
struct SpanningSubtree {
  std::vector<int> verts;  // sorted
  int root;                // vertex closest to the tree root
  int edge_count;
  Rat w_max;
};

inline SpanningSubtree minimal_spanning_subtree(const WeightedTree& tree,
                                                const std::vector<int>& verts) {
  std::set<int> marked;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i; j < verts.size(); ++j)
      for (int v : tree.path_vertices(verts[i], verts[j])) marked.insert(v);
  SpanningSubtree out;
  out.verts.assign(marked.begin(), marked.end());
  out.root = *std::min_element(out.verts.begin(), out.verts.end(), [&](int x, int y) {
    return tree.depth(x) < tree.depth(y);
  });
  out.edge_count = static_cast<int>(out.verts.size()) - 1;
  out.w_max = 0;
  for (int v : out.verts)
    if (v != out.root && marked.count(tree.parent(v)))
      out.w_max = std::max(out.w_max, tree.edge_weight(v));
  return out;
}

// The spanning-subtree bound on the cycle length, plus the exact equality
// between the first cavity pair's max-weight distance and the subtree's
// heaviest edge.
inline std::vector<Finding> check_main_bound(const OnlineInstance& inst,
                                             const HybridOutcome& out) {
  if (!inst.on_tree()) throw std::invalid_argument("main bound is defined on tree instances");
  const WeightedTree& tree = inst.tree();
  const CavityTrace& cav = out.cav;
  std::vector<Finding> findings;
  if (!cav.valid) return findings;
  SpanningSubtree th = minimal_spanning_subtree(tree, cav.cavity_set());
  Rat ring = hybrid_cycle_length(inst, cav, CostModel::tree_path());
  Rat ew = Rat(th.edge_count) * th.w_max;
  int anchor = tree.lca(cav.h[0], cav.a[0]);
  Rat rhs = 2 * ew - 2 * tree.path_distance(anchor, th.root);
  findings.push_back({"cavity-subtree-bound", ring <= rhs, ring, rhs, ""});
  Rat dmax = tree.max_weight_distance(cav.h[0], cav.a[0]);
  findings.push_back(
      {"first-cavity-max-weight", dmax == th.w_max, dmax, th.w_max, "equality required"});
  return findings;
}

// Conjugate construction: swap the roles of the two runs by planting the
// decoupling server as the t_d-th request.
inline std::pair<OnlineInstance, HybridSpec> conjugate_of(const OnlineInstance& inst,
                                                          const HybridSpec& spec,
                                                          const HybridOutcome& out) {
  if (!out.cav.valid) throw std::invalid_argument("conjugate of an invalid hybrid instance");
  OnlineInstance conj = inst;
  conj.requests[spec.t_d - 1] = spec.a_d;
  HybridSpec cspec;
  cspec.t_d = spec.t_d;
  cspec.a_d = out.cav.h[0];
  return {std::move(conj), cspec};
}

// Re-runs the conjugate and checks that the cavity sequences swap roles.
inline std::vector<Finding> verify_conjugate(const OnlineInstance& inst,
                                             const OnlineAlgorithm& base, const HybridSpec& spec,
                                             const HybridOutcome& out) {
  auto [conj_inst, conj_spec] = conjugate_of(inst, spec, out);
  HybridOutcome conj = run_hybrid(conj_inst, base, conj_spec);
  std::vector<Finding> findings;
  auto add = [&](const std::string& name, bool pass) {
    findings.push_back({name, pass, Rat(pass ? 0 : 1), Rat(0), ""});
  };
  add("conjugate-valid", conj.cav.valid);
  if (!conj.cav.valid) return findings;
  add("conjugate-coupling-time", conj.cav.t_c == out.cav.t_c);
  add("conjugate-swapped-cavities", conj.cav.h == out.cav.a && conj.cav.a == out.cav.h);
  return findings;
}

}  // namespace otr
