#include <catch2/catch_amalgamated.hpp>

#include "otr/hybrid.hpp"
#include "otr/hybrid_checks.hpp"
#include "otr/instance.hpp"
#include "otr/subtree_decomposition.hpp"

using namespace otr;

namespace {
WeightedTree p3() { return WeightedTree(3, {{0, 1, Rat(1)}, {1, 2, Rat(2)}}, 0); }
WeightedTree p2() { return WeightedTree(2, {{0, 1, Rat(1)}}, 0); }

bool all_pass(const std::vector<Finding>& findings) {
  for (const auto& f : findings)
    if (!f.pass) return false;
  return true;
}
}  // namespace

TEST_CASE("hybrid run on the single edge") {
  OnlineInstance inst = tree_instance(p2(), {0, 0});
  SdAlgorithm sd(inst.tree());
  HybridOutcome out = run_hybrid(inst, sd, {1, 1});
  REQUIRE(out.cav.valid);
  CHECK(out.cav.t_c == 1);
  CHECK(out.cav.h == std::vector<int>{0});
  CHECK(out.cav.a == std::vector<int>{1});
  CHECK(out.base_trace.total_cost == Rat(1));
  CHECK(out.hybrid_trace.total_cost == Rat(1));
  CHECK(hybrid_cycle_length(inst, out.cav, CostModel::tree_path()) == Rat(2));

  Finding cycle = check_cycle_cost_bound(inst, out, CostModel::tree_path());
  CHECK(cycle.pass);
  CHECK(cycle.lhs == Rat(0));
  CHECK(cycle.rhs == Rat(2));

  auto main_bound = check_main_bound(inst, out);
  REQUIRE(main_bound.size() == 2);
  CHECK(main_bound[0].pass);
  CHECK(main_bound[0].lhs == Rat(2));  // tight: ring equals the bound
  CHECK(main_bound[0].rhs == Rat(2));
  CHECK(main_bound[1].pass);
}

TEST_CASE("forcing the base's own choice leaves the runs identical") {
  OnlineInstance inst = tree_instance(p2(), {0, 0});
  SdAlgorithm sd(inst.tree());
  HybridOutcome out = run_hybrid(inst, sd, {1, 0});  // base assigns r1 to 0 anyway
  CHECK_FALSE(out.cav.valid);
}

TEST_CASE("hybrid run on p3 with early decoupling") {
  OnlineInstance inst = tree_instance(p3(), {2, 2, 2});
  SdAlgorithm sd(inst.tree());
  HybridOutcome out = run_hybrid(inst, sd, {1, 1});
  REQUIRE(out.cav.valid);
  CHECK(out.cav.h.front() == 2);
  CHECK(out.cav.a.front() == 1);
  CHECK(all_pass(check_cavity_step_properties(out)));
  CHECK(check_cycle_cost_bound(inst, out, CostModel::tree_path()).pass);
  CHECK(all_pass(check_main_bound(inst, out)));
  CHECK(all_pass(verify_conjugate(inst, sd, {1, 1}, out)));
}

TEST_CASE("conjugate of the single-edge hybrid swaps the cavities") {
  OnlineInstance inst = tree_instance(p2(), {0, 0});
  SdAlgorithm sd(inst.tree());
  HybridOutcome out = run_hybrid(inst, sd, {1, 1});
  auto [conj_inst, conj_spec] = conjugate_of(inst, {1, 1}, out);
  CHECK(conj_inst.requests == std::vector<int>{1, 0});
  CHECK(conj_spec.t_d == 1);
  CHECK(conj_spec.a_d == 0);
  HybridOutcome cout = run_hybrid(conj_inst, sd, conj_spec);
  REQUIRE(cout.cav.valid);
  CHECK(cout.cav.h == out.cav.a);
  CHECK(cout.cav.a == out.cav.h);

  // Conjugating twice restores the original cavity sequences.
  auto [back_inst, back_spec] = conjugate_of(conj_inst, conj_spec, cout);
  HybridOutcome bout = run_hybrid(back_inst, sd, back_spec);
  REQUIRE(bout.cav.valid);
  CHECK(bout.cav.h == out.cav.h);
  CHECK(bout.cav.a == out.cav.a);
}

TEST_CASE("degenerate cycle lengths") {
  OnlineInstance inst = tree_instance(p2(), {0, 0});
  CavityTrace cav;
  cav.valid = true;
  cav.t_d = 1;
  cav.t_c = 1;
  cav.a_d = 1;
  cav.h = {0};
  cav.a = {1};
  CHECK(hybrid_cycle_length(inst, cav, CostModel::tree_path()) == Rat(2));
  cav.h = {1};  // same position twice: zero-length cycle
  CHECK(hybrid_cycle_length(inst, cav, CostModel::tree_path()) == Rat(0));
  cav.valid = false;
  CHECK_THROWS_AS(hybrid_cycle_length(inst, cav, CostModel::tree_path()),
                  std::invalid_argument);
}

TEST_CASE("well-behaved rebuild preserves cavity movement") {
  OnlineInstance inst = tree_instance(p3(), {2, 2, 2});
  SdAlgorithm sd(inst.tree());
  HybridOutcome out = run_hybrid(inst, sd, {1, 1});
  REQUIRE(out.cav.valid);
  WellBehavedInstance wb = make_well_behaved(inst, out);
  HybridOutcome wb_out;
  auto findings = verify_well_behaved(inst, sd, wb, &wb_out);
  CHECK(all_pass(findings));
  CHECK(hybrid_cycle_length(inst, out.cav, CostModel::tree_path()) ==
        hybrid_cycle_length(wb.instance, wb_out.cav, CostModel::tree_path()));
  std::vector<int> orig = out.cav.cavity_set();
  CHECK(wb_out.cav.cavity_set() == orig);
}

TEST_CASE("simulation and confinement checks on exhaustive small hybrids") {
  // Every valid hybrid of every length-3 request sequence over every
  // power-of-two tree on 3 vertices with weights in {1,2}.
  int checked = 0;
  enumerate_small_trees(3, {0, 1}, [&](const WeightedTree& t) {
    SdAlgorithm sd(t);
    SequenceEnumerator seqs({0, 1, 2}, 3);
    std::vector<int> seq;
    while (seqs.next(seq)) {
      OnlineInstance inst = tree_instance(t, seq);
      for (int t_d = 1; t_d <= 3; ++t_d)
        for (int a_d = 0; a_d < 3; ++a_d) {
          HybridOutcome out = run_hybrid(inst, sd, {t_d, a_d});
          if (!out.cav.valid) continue;
          ++checked;
          REQUIRE(all_pass(check_cavity_step_properties(out)));
          REQUIRE(check_cycle_cost_bound(inst, out, CostModel::tree_path()).pass);
          REQUIRE(all_pass(check_main_bound(inst, out)));
          REQUIRE(all_pass(verify_conjugate(inst, sd, {t_d, a_d}, out)));
          REQUIRE(all_pass(check_simulation_confinement(inst, sd, out)));
        }
    }
  });
  CHECK(checked > 100);
}

TEST_CASE("confinement holds when both first cavities share a leaf part") {
  // Star with two heavy leaves: decoupling inside one heavy part keeps all
  // cavities there.
  WeightedTree star(4, {{0, 1, Rat(1)}, {0, 2, Rat(2)}, {0, 3, Rat(2)}}, 0);
  SdAlgorithm sd(star);
  SequenceEnumerator seqs({0, 1, 2, 3}, 4);
  std::vector<int> seq;
  int seen = 0;
  while (seqs.next(seq)) {
    OnlineInstance inst = tree_instance(star, seq);
    for (int t_d = 1; t_d <= 4; ++t_d)
      for (int a_d = 0; a_d < 4; ++a_d) {
        HybridOutcome out = run_hybrid(inst, sd, {t_d, a_d});
        if (!out.cav.valid) continue;
        auto findings = check_simulation_confinement(inst, sd, out);
        REQUIRE(all_pass(findings));
        for (const auto& f : findings) seen += f.check == "confinement-part";
      }
  }
  CHECK(seen > 0);
}
