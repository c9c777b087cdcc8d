#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "otr/hybrid.hpp"

namespace otr {

// Rebuilds a hybrid instance in well-behaved form: every non-cavity server is
// filled first by a co-located request, then the requests that moved a cavity
// are replayed. Cavity movement, cavity set and ring length are preserved;
// verify_well_behaved re-runs the result and checks exactly that.
struct WellBehavedInstance {
  OnlineInstance instance;
  HybridSpec spec;
  std::vector<int> expected_h;  // movement subsequence of the original run
  std::vector<int> expected_a;
};

inline WellBehavedInstance make_well_behaved(const OnlineInstance& inst, const HybridOutcome& out) {
  const CavityTrace& cav = out.cav;
  if (!cav.valid) throw std::invalid_argument("well-behaved rebuild of an invalid hybrid");
  int k = inst.num_requests();

  std::vector<int> move_offsets;  // offsets i >= 1 where h or a moved
  for (int i = 1; i < cav.steps(); ++i)
    if (cav.h[i - 1] != cav.h[i] || cav.a[i - 1] != cav.a[i]) move_offsets.push_back(i);
  int n = static_cast<int>(move_offsets.size()) + 1;
  std::vector<int> cavities = cav.cavity_set();
  if (static_cast<int>(cavities.size()) != n + 1)
    throw std::logic_error("cavity count does not match movement count");

  WellBehavedInstance wb;
  wb.instance = inst;
  wb.instance.requests.clear();
  for (int s : inst.sites)
    if (!std::binary_search(cavities.begin(), cavities.end(), s))
      wb.instance.requests.push_back(s);
  wb.instance.requests.push_back(inst.requests[cav.t_d - 1]);
  for (int i : move_offsets) wb.instance.requests.push_back(inst.requests[cav.t_d + i - 1]);
  wb.instance.requests.push_back(inst.requests[cav.t_c]);  // request at time t_c + 1
  if (static_cast<int>(wb.instance.requests.size()) != k)
    throw std::logic_error("well-behaved rebuild lost requests");

  wb.spec.t_d = k - n;
  wb.spec.a_d = cav.a_d;
  wb.expected_h.push_back(cav.h[0]);
  wb.expected_a.push_back(cav.a[0]);
  for (int i : move_offsets) {
    wb.expected_h.push_back(cav.h[i]);
    wb.expected_a.push_back(cav.a[i]);
  }
  return wb;
}

// Set of cavities from time t onwards.
inline std::vector<int> cavities_from(const CavityTrace& cav, int t) {
  std::vector<int> out;
  for (int i = std::max(0, t - cav.t_d); i < cav.steps(); ++i) {
    out.push_back(cav.h[i]);
    out.push_back(cav.a[i]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<Finding> verify_well_behaved(const OnlineInstance& inst,
                                                const OnlineAlgorithm& base,
                                                const WellBehavedInstance& wb,
                                                HybridOutcome* reran = nullptr) {
  std::vector<Finding> findings;
  auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
    findings.push_back({name, pass, Rat(pass ? 0 : 1), Rat(0), detail});
  };
  HybridOutcome out = run_hybrid(wb.instance, base, wb.spec);
  int k = wb.instance.num_requests();
  add("well-behaved-valid", out.cav.valid);
  if (!out.cav.valid) return findings;
  add("well-behaved-coupling", out.cav.t_c == k - 1);
  add("well-behaved-h-sequence", out.cav.h == wb.expected_h);
  add("well-behaved-a-sequence", out.cav.a == wb.expected_a);
  bool prefix_free = true;
  for (int t = 1; t < wb.spec.t_d; ++t)
    prefix_free &= out.base_trace.steps[t - 1].cost == 0;
  add("well-behaved-zero-prefix", prefix_free);
  bool free_sets_tight = true;
  for (int t = wb.spec.t_d; t <= out.cav.t_c; ++t) {
    std::vector<int> cavs = cavities_from(out.cav, t);
    int i = t - wb.spec.t_d;
    std::vector<int> want_a = cavs, want_h = cavs;
    want_a.erase(std::remove(want_a.begin(), want_a.end(), out.cav.h[i]), want_a.end());
    want_h.erase(std::remove(want_h.begin(), want_h.end(), out.cav.a[i]), want_h.end());
    free_sets_tight &= out.base_trace.steps[t - 1].free_after == want_a;
    free_sets_tight &= out.hybrid_trace.steps[t - 1].free_after == want_h;
  }
  add("well-behaved-free-sets", free_sets_tight);
  if (reran) *reran = out;
  // Unchanged invariants relative to the original hybrid:
  add("well-behaved-keeps-decoupling-server", out.cav.a[0] == wb.spec.a_d);
  return findings;
}

// One restriction target for the simulation check: the subtree `verts`
// (connected, rooted at `root`), with requests outside it rewritten through
// `replace` before re-running.
struct RestrictionTarget {
  std::string label;
  std::vector<int> verts;  // sorted global ids
  int root = 0;
  // replacement vertex for an off-target request (identity inside)
  std::vector<int> replacement;  // indexed by global vertex id
};

inline OnlineInstance restrict_hybrid_instance(const WellBehavedInstance& wb,
                                               const RestrictionTarget& target,
                                               const InducedSubtree& induced, HybridSpec* sub_spec,
                                               const std::vector<int>& cavities) {
  const OnlineInstance& src = wb.instance;
  OnlineInstance sub;
  sub.kind = InstanceKind::OMT_S2;
  sub.geometry = induced.tree;
  sub.sites.resize(induced.tree.size());
  std::iota(sub.sites.begin(), sub.sites.end(), 0);
  sub.capacities.assign(induced.tree.size(), 1);

  auto in_target = [&](int v) {
    return std::binary_search(target.verts.begin(), target.verts.end(), v);
  };
  int kept_prefix = 0;
  for (int t = 1; t < wb.spec.t_d; ++t) {
    int r = src.requests[t - 1];
    if (in_target(r)) {
      sub.requests.push_back(induced.to_local[r]);
      ++kept_prefix;
    }
  }
  for (int t = wb.spec.t_d; t <= src.num_requests(); ++t) {
    int r = src.requests[t - 1];
    int mapped = in_target(r) ? r : target.replacement[r];
    sub.requests.push_back(induced.to_local[mapped]);
  }
  // Cavities all live inside the target for part/side restrictions, so the
  // prefix must have filled exactly the non-cavity servers of the target.
  int expected_prefix = static_cast<int>(target.verts.size()) -
                        static_cast<int>(cavities.size());
  if (kept_prefix != expected_prefix)
    throw std::logic_error("restricted prefix does not fill the target's non-cavity servers");
  sub_spec->t_d = kept_prefix + 1;
  sub_spec->a_d = induced.to_local[wb.spec.a_d];
  sub.validate();
  return sub;
}

// Re-runs the hybrid on the restricted instance and checks that cavities and
// ring length carry over exactly.
inline std::vector<Finding> check_restriction(const OnlineInstance& inst,
                                              const WellBehavedInstance& wb,
                                              const HybridOutcome& wb_out,
                                              const RestrictionTarget& target) {
  std::vector<Finding> findings;
  auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
    findings.push_back({name, pass, Rat(pass ? 0 : 1), Rat(0), target.label + " " + detail});
  };
  std::vector<int> cavities = wb_out.cav.cavity_set();
  InducedSubtree induced = induced_subtree(inst.tree(), target.verts, target.root);
  HybridSpec sub_spec;
  OnlineInstance sub = restrict_hybrid_instance(wb, target, induced, &sub_spec, cavities);
  SdAlgorithm sub_sd(sub.tree());
  HybridOutcome sub_out = run_hybrid(sub, sub_sd, sub_spec);
  add("simulate-valid", sub_out.cav.valid);
  if (!sub_out.cav.valid) return findings;

  std::vector<int> h_global, a_global;
  for (int v : sub_out.cav.h) h_global.push_back(induced.to_global[v]);
  for (int v : sub_out.cav.a) a_global.push_back(induced.to_global[v]);
  add("simulate-h-sequence", h_global == wb_out.cav.h);
  add("simulate-a-sequence", a_global == wb_out.cav.a);

  Rat ring_full = hybrid_cycle_length(inst, wb_out.cav, CostModel::tree_path());
  Rat ring_sub = hybrid_cycle_length(sub, sub_out.cav, CostModel::tree_path());
  findings.push_back({"simulate-ring-length", ring_full == ring_sub, ring_sub, ring_full,
                      target.label + " equality required"});
  return findings;
}

// Confinement of cavities plus the simulation exercise.
//
// Direct claims on the original run: first cavities in the same heavy part
// keep every cavity in that part; first cavities on the same side with no
// cavity in the light part keep every cavity on that side. The simulation
// part rebuilds the run in well-behaved form and replays it on each
// applicable restriction.
inline std::vector<Finding> check_simulation_confinement(const OnlineInstance& inst,
                                                         const SdAlgorithm& sd,
                                                         const HybridOutcome& out) {
  std::vector<Finding> findings;
  const CavityTrace& cav = out.cav;
  if (!cav.valid) return findings;
  const Decomposition& d = sd.decomposition();
  const auto& top = d.node(d.root_node());
  if (top.leaf) return findings;

  std::vector<int> cavities = cav.cavity_set();
  auto part_of = [&](int v) { return d.part_of(d.root_node(), v); };
  auto side_of = [&](int v) { return d.side_of(d.root_node(), v); };

  int h0 = cav.h[0];
  int a0 = cav.a[0];
  bool all_same_part = true, any_in_light = false;
  for (int c : cavities) {
    if (part_of(c) != part_of(h0)) all_same_part = false;
    if (part_of(c) == 0) any_in_light = true;
  }
  if (part_of(h0) == part_of(a0)) {
    findings.push_back({"confinement-part", all_same_part, Rat(all_same_part ? 0 : 1), Rat(0),
                        "part " + std::to_string(part_of(h0))});
  }
  bool all_same_side = true;
  for (int c : cavities)
    if (side_of(c) != side_of(h0)) all_same_side = false;
  if (side_of(h0) == side_of(a0) && !any_in_light) {
    findings.push_back({"confinement-side", all_same_side, Rat(all_same_side ? 0 : 1), Rat(0),
                        "side " + std::to_string(side_of(h0) + 1)});
  }

  // Simulation on the well-behaved rebuild.
  WellBehavedInstance wb = make_well_behaved(inst, out);
  HybridOutcome wb_out;
  auto wb_findings = verify_well_behaved(inst, sd, wb, &wb_out);
  findings.insert(findings.end(), wb_findings.begin(), wb_findings.end());
  for (const auto& f : wb_findings)
    if (!f.pass) return findings;

  auto add_target = [&](RestrictionTarget target) {
    auto sub = check_restriction(inst, wb, wb_out, target);
    findings.insert(findings.end(), sub.begin(), sub.end());
  };

  const WeightedTree& tree = inst.tree();
  int parts = static_cast<int>(top.part_child.size());
  // All cavities inside one part: replay on that part alone.
  if (all_same_part && static_cast<int>(cavities.size()) > 0) {
    int i = part_of(h0);
    RestrictionTarget target;
    target.label = "part-" + std::to_string(i);
    target.verts = d.node(top.part_child[i]).verts;
    target.root = i == 0 ? top.root : top.heavy_roots[i - 1];
    target.replacement.assign(tree.size(), -1);
    for (int v = 0; v < tree.size(); ++v) {
      if (std::binary_search(target.verts.begin(), target.verts.end(), v)) continue;
      if (i == 0) {
        // Requests in a full heavy part re-enter the light part at the
        // parent of that part's root.
        target.replacement[v] = top.heavy_parents[part_of(v) - 1];
      } else {
        target.replacement[v] = top.heavy_roots[i - 1];
      }
    }
    add_target(std::move(target));
  }
  // A heavy part without cavities: replay on the rest of the tree.
  for (int i = 1; i < parts; ++i) {
    const auto& part = d.node(top.part_child[i]);
    bool clean = true;
    for (int c : cavities)
      if (part.contains(c)) clean = false;
    if (!clean) continue;
    RestrictionTarget target;
    target.label = "complement-of-part-" + std::to_string(i);
    for (int v = 0; v < tree.size(); ++v)
      if (!part.contains(v)) target.verts.push_back(v);
    target.root = top.root;
    target.replacement.assign(tree.size(), -1);
    for (int v : part.verts) target.replacement[v] = top.heavy_parents[i - 1];
    add_target(std::move(target));
  }
  // All cavities on one side with none in the light part: replay on the side.
  if (all_same_side && !any_in_light) {
    int j = side_of(h0);
    RestrictionTarget target;
    target.label = "side-" + std::to_string(j + 1);
    target.verts = d.node(top.side_child[j]).verts;
    target.root = d.side_root(d.root_node(), j);
    target.replacement.assign(tree.size(), -1);
    for (int v = 0; v < tree.size(); ++v)
      if (!std::binary_search(target.verts.begin(), target.verts.end(), v))
        target.replacement[v] = target.root;
    add_target(std::move(target));
  }
  return findings;
}

}  // namespace otr
