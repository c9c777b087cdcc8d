#include <catch2/catch_amalgamated.hpp>

#include "otr/instance.hpp"
#include "otr/instance_io.hpp"

using namespace otr;

TEST_CASE("sequence enumeration is exhaustive and ordered") {
  SequenceEnumerator two({0, 1}, 2);
  std::vector<std::vector<int>> seqs;
  std::vector<int> s;
  while (two.next(s)) seqs.push_back(s);
  REQUIRE(seqs == std::vector<std::vector<int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

  SequenceEnumerator empty({0, 1, 2}, 0);
  int count = 0;
  while (empty.next(s)) ++count;
  CHECK(count == 1);

  SequenceEnumerator three({0, 1, 2}, 3);
  CHECK(three.count() == 27);
  std::vector<std::vector<int>> all;
  while (three.next(s)) all.push_back(s);
  REQUIRE(all.size() == 27);
  CHECK(all.front() == std::vector<int>{0, 0, 0});
  CHECK(all.back() == std::vector<int>{2, 2, 2});
}

TEST_CASE("small tree enumeration matches Cayley counts") {
  int n2 = 0;
  enumerate_small_trees(2, {0}, [&](const WeightedTree& t) {
    ++n2;
    CHECK(t.size() == 2);
    CHECK(t.edge_weight(1) == Rat(1));
  });
  CHECK(n2 == 1);

  int n3 = 0;
  enumerate_small_trees(3, {0}, [&](const WeightedTree&) { ++n3; });
  CHECK(n3 == 3);

  int n4 = 0;
  enumerate_small_trees(4, {0, 1}, [&](const WeightedTree& t) {
    ++n4;
    REQUIRE(t.is_power_of_two());
  });
  CHECK(n4 == 16 * 8);

  CHECK_THROWS_AS(enumerate_small_trees(7, {0}, [](const WeightedTree&) {}),
                  std::invalid_argument);
}

TEST_CASE("generator is deterministic and respects its config") {
  GeneratorConfig cfg;
  cfg.seed = 42;
  cfg.shape = InstanceShape::RandomTree;
  cfg.kind = InstanceKind::OMT_S2;
  cfg.n = 5;
  OnlineInstance a = generate(cfg);
  OnlineInstance b = generate(cfg);
  CHECK(instance_to_string(a) == instance_to_string(b));
  CHECK(a.num_requests() == 5);
  long long cap = 0;
  for (int c : a.capacities) cap += c;
  CHECK(cap == a.num_requests());

  cfg.shape = InstanceShape::Path;
  cfg.n = 3;
  OnlineInstance p = generate(cfg);
  CHECK(p.tree().parent(1) == 0);
  CHECK(p.tree().parent(2) == 1);

  cfg.shape = InstanceShape::RandomMetric;
  cfg.kind = InstanceKind::OTR;
  cfg.n = 4;
  cfg.m = 2;
  cfg.k = 4;
  cfg.capacity_scheme = CapacityScheme::Random;
  OnlineInstance otr_inst = generate(cfg);
  CHECK_NOTHROW(otr_inst.metric().validate());
  CHECK(otr_inst.num_sites() == 2);
  cap = 0;
  for (int c : otr_inst.capacities) cap += c;
  CHECK(cap == 4);

  cfg.m = 5;
  CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
}

TEST_CASE("instance files round-trip") {
  GeneratorConfig cfg;
  cfg.seed = 7;
  cfg.kind = InstanceKind::OMT_S2;
  cfg.shape = InstanceShape::RandomTree;
  cfg.n = 4;
  OnlineInstance inst = generate(cfg);
  std::string text = instance_to_string(inst);
  OnlineInstance back = instance_from_string(text);
  CHECK(instance_to_string(back) == text);
  CHECK(instance_digest(back) == instance_digest(inst));

  GeneratorConfig mcfg;
  mcfg.seed = 8;
  mcfg.kind = InstanceKind::OMM_S;
  mcfg.shape = InstanceShape::RandomMetric;
  mcfg.n = 3;
  mcfg.m = 3;
  OnlineInstance metric_inst = generate(mcfg);
  OnlineInstance metric_back = instance_from_string(instance_to_string(metric_inst));
  CHECK(instance_to_string(metric_back) == instance_to_string(metric_inst));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(metric_back.metric().dist(i, j) == metric_inst.metric().dist(i, j));
}

TEST_CASE("instance validation rejects malformed inputs") {
  OnlineInstance inst = tree_instance(WeightedTree(2, {{0, 1, Rat(1)}}, 0), {0, 1});
  CHECK_NOTHROW(inst.validate());

  OnlineInstance wrong = inst;
  wrong.requests = {0};  // capacity sum mismatch
  CHECK_THROWS_AS(wrong.validate(), std::invalid_argument);

  wrong = inst;
  wrong.capacities = {0, 2};
  CHECK_THROWS_AS(wrong.validate(), std::invalid_argument);

  wrong = inst;
  wrong.kind = InstanceKind::OMT_S2;
  wrong.geometry = WeightedTree(2, {{0, 1, Rat(3)}}, 0);  // not a power of two
  CHECK_THROWS_AS(wrong.validate(), std::invalid_argument);
}

TEST_CASE("rationals survive text form") {
  CHECK(rat_to_string(Rat(3, 2)) == "3/2");
  CHECK(rat_to_string(Rat(4)) == "4");
  CHECK(rat_from_string("3/2") == Rat(3, 2));
  CHECK(rat_from_string("4") == Rat(4));
  CHECK(rat_from_string("-7/3") == Rat(-7, 3));
  CHECK_THROWS_AS(rat_from_string("x/y"), std::invalid_argument);
}
