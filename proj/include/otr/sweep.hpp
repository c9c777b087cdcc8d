#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "otr/bstar.hpp"
#include "otr/hybrid_checks.hpp"
#include "otr/instance_io.hpp"
#include "otr/worst_case.hpp"

namespace otr {

struct SweepRow {
  std::string digest;
  std::string algorithm;
  int k = 0;
  int m = 0;
  Rat alg_cost;
  Rat opt_cost;
  Rat opt_max_cost;
  Rat ratio;
  Rat bound;
  bool pass = false;
  std::string witness;  // serialized instance for failures, empty otherwise
};

struct SweepReport {
  std::string family;
  std::uint64_t seed = 0;
  std::string config;
  std::vector<SweepRow> rows;

  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
  Rat max_ratio() const {
    Rat best = 0;
    for (const auto& r : rows) best = std::max(best, r.ratio);
    return best;
  }
  const SweepRow* first_failure() const {
    for (const auto& r : rows)
      if (!r.pass) return &r;
    return nullptr;
  }
};

// Deterministic fan-out: results land at fixed indices regardless of
// scheduling.
inline std::vector<SweepRow> parallel_rows(const std::vector<std::function<SweepRow()>>& cases,
                                           int workers) {
  std::vector<SweepRow> rows(cases.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < cases.size(); ++i) rows[i] = cases[i]();
    return rows;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= cases.size()) return;
      rows[i] = cases[i]();
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return rows;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string report_to_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "digest,algorithm,k,m,alg_cost,opt_cost,opt_max_cost,ratio,ratio_float,bound,pass\n";
  for (const auto& r : report.rows) {
    out << r.digest << ',' << csv_escape(r.algorithm) << ',' << r.k << ',' << r.m << ','
        << rat_to_string(r.alg_cost) << ',' << rat_to_string(r.opt_cost) << ','
        << rat_to_string(r.opt_max_cost) << ',' << rat_to_string(r.ratio) << ','
        << rat_to_double(r.ratio) << ',' << rat_to_string(r.bound) << ','
        << (r.pass ? "1" : "0") << '\n';
  }
  return out.str();
}

inline nlohmann::json report_to_json(const SweepReport& report, bool with_timestamp) {
  nlohmann::json j;
  j["family"] = report.family;
  j["seed"] = report.seed;
  j["config"] = report.config;
  j["all_pass"] = report.all_pass();
  j["max_ratio"] = rat_to_string(report.max_ratio());
  j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row;
    row["digest"] = r.digest;
    row["algorithm"] = r.algorithm;
    row["k"] = r.k;
    row["m"] = r.m;
    row["alg_cost"] = rat_to_string(r.alg_cost);
    row["opt_cost"] = rat_to_string(r.opt_cost);
    row["opt_max_cost"] = rat_to_string(r.opt_max_cost);
    row["ratio"] = rat_to_string(r.ratio);
    row["ratio_float"] = rat_to_double(r.ratio);
    row["bound"] = rat_to_string(r.bound);
    row["pass"] = r.pass;
    j["rows"].push_back(row);
  }
  if (with_timestamp) {
    j["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
  }
  return j;
}

// ---------------------------------------------------------------------------
// Sweep families
// ---------------------------------------------------------------------------

// Tree-strong sweep: every labeled power-of-two tree with n in [2, max_n]
// vertices and weights from {1,2,4}, every request sequence of length n; the
// path-distance cost of sd must stay within (3n-3) times the max-weight
// optimum. One row per tree carrying its worst sequence.
inline SweepReport run_family_sd_tstrong(int max_n, int workers = 1) {
  SweepReport report;
  report.family = "sd-tstrong";
  report.config = "n=2.." + std::to_string(max_n) + " exponents={0,1,2}";
  std::vector<std::function<SweepRow()>> cases;
  for (int n = 2; n <= max_n; ++n) {
    std::vector<WeightedTree> trees;
    enumerate_small_trees(n, {0, 1, 2}, [&](const WeightedTree& t) { trees.push_back(t); });
    for (const auto& tree : trees) {
      cases.push_back([tree, n]() {
        OnlineInstance skeleton = tree_instance(tree, std::vector<int>(n, 0));
        SdAlgorithm sd(tree);
        std::vector<int> verts(n);
        std::iota(verts.begin(), verts.end(), 0);
        WorstCaseResult wc = worst_case_ratio(skeleton, verts, sd, CostModel::tree_path(),
                                              CostModel::tree_max_weight());
        SweepRow row;
        row.digest = instance_digest(skeleton);
        row.algorithm = "sd";
        row.k = n;
        row.m = n;
        row.ratio = wc.ratio;
        row.bound = Rat(3 * n - 3);
        row.pass = wc.ratio <= row.bound;
        if (!wc.witness.empty()) {
          OnlineInstance worst = skeleton;
          worst.requests = wc.witness;
          row.alg_cost = run_online(worst, sd).total_cost;
          row.opt_cost = opt_cost(worst, CostModel::tree_path());
          row.opt_max_cost = opt_cost(worst, CostModel::tree_max_weight());
          if (!row.pass) row.witness = instance_to_json(worst).dump();
        }
        return row;
      });
    }
  }
  report.rows = parallel_rows(cases, workers);
  return report;
}

// B* on matching-with-requests-on-sites: seeded random metrics with k sites,
// exhaustive sequences, bound (4k-3) against the metric optimum.
inline SweepReport run_family_bstar_omms(int instances, std::uint64_t seed, int workers = 1) {
  SweepReport report;
  report.family = "bstar-omms";
  report.seed = seed;
  report.config = "instances=" + std::to_string(instances) + " k={2,3,4}";
  std::vector<std::function<SweepRow()>> cases;
  for (int i = 0; i < instances; ++i) {
    int k = 2 + i % 3;
    std::uint64_t case_seed = seed + static_cast<std::uint64_t>(i) * 1000003ULL;
    cases.push_back([k, case_seed]() {
      SplitMix64 rng(case_seed);
      MetricSpace space = random_metric(rng, k);
      OnlineInstance skeleton;
      skeleton.kind = InstanceKind::OMM_S;
      skeleton.geometry = space;
      skeleton.sites.resize(k);
      std::iota(skeleton.sites.begin(), skeleton.sites.end(), 0);
      skeleton.capacities.assign(k, 1);
      skeleton.requests.assign(k, 0);
      skeleton.seed = case_seed;
      auto bstar = build_bstar(space, skeleton.sites);
      WorstCaseResult wc = worst_case_ratio(skeleton, skeleton.sites, *bstar,
                                            CostModel::metric(), CostModel::metric());
      SweepRow row;
      row.digest = instance_digest(skeleton);
      row.algorithm = "bstar";
      row.k = k;
      row.m = k;
      row.ratio = wc.ratio;
      row.bound = Rat(4 * k - 3);
      row.pass = wc.ratio <= row.bound;
      if (!wc.witness.empty()) {
        OnlineInstance worst = skeleton;
        worst.requests = wc.witness;
        row.alg_cost = run_online(worst, *bstar).total_cost;
        row.opt_cost = opt_cost(worst, CostModel::metric());
        row.opt_max_cost = row.opt_cost;
        if (!row.pass) row.witness = instance_to_json(worst).dump();
      }
      return row;
    });
  }
  report.rows = parallel_rows(cases, workers);
  return report;
}

// Full transportation pipeline: seeded metrics containing off-site request
// points, sites with capacities summing to k, exhaustive sequences over the
// off-site pool, bound (8m-5).
inline SweepReport run_family_pipeline_otr(int instances, std::uint64_t seed, int workers = 1) {
  SweepReport report;
  report.family = "pipeline-otr";
  report.seed = seed;
  report.config = "instances=" + std::to_string(instances) + " m={2,3} k={3,4,5}";
  std::vector<std::function<SweepRow()>> cases;
  for (int i = 0; i < instances; ++i) {
    int m = 2 + i % 2;
    int k = 3 + i % 3;
    std::uint64_t case_seed = seed + static_cast<std::uint64_t>(i) * 911382323ULL;
    cases.push_back([m, k, case_seed]() {
      SplitMix64 rng(case_seed);
      int off_points = 2 + static_cast<int>(rng.uniform_int(0, 1));
      int n = m + off_points;
      MetricSpace space = random_metric(rng, n);
      OnlineInstance skeleton;
      skeleton.kind = InstanceKind::OTR;
      skeleton.geometry = space;
      for (int s = 0; s < m; ++s) skeleton.sites.push_back(s);
      skeleton.capacities.assign(m, 1);
      for (int extra = 0; extra < k - m; ++extra)
        ++skeleton.capacities[static_cast<std::size_t>(rng.uniform_int(0, m - 1))];
      skeleton.requests.assign(k, m);
      skeleton.seed = case_seed;
      std::vector<int> pool;  // requests live off the sites
      for (int p = m; p < n; ++p) pool.push_back(p);
      auto pipeline = build_pipeline(space, skeleton.sites);
      WorstCaseResult wc = worst_case_ratio(skeleton, pool, *pipeline, CostModel::metric(),
                                            CostModel::metric());
      SweepRow row;
      row.digest = instance_digest(skeleton);
      row.algorithm = "bstar+nearest-site";
      row.k = k;
      row.m = m;
      row.ratio = wc.ratio;
      row.bound = Rat(8 * m - 5);
      row.pass = wc.ratio <= row.bound;
      if (!wc.witness.empty()) {
        OnlineInstance worst = skeleton;
        worst.requests = wc.witness;
        row.alg_cost = run_online(worst, *pipeline).total_cost;
        row.opt_cost = opt_cost(worst, CostModel::metric());
        row.opt_max_cost = row.opt_cost;
        if (!row.pass) row.witness = instance_to_json(worst).dump();
      }
      return row;
    });
  }
  report.rows = parallel_rows(cases, workers);
  return report;
}

// One hybrid case: every lemma checker normalized into a single ratio so a
// row passes exactly when ratio <= 1.
inline SweepRow hybrid_case_row(const OnlineInstance& inst, const SdAlgorithm& sd,
                                HybridSpec spec) {
  SweepRow row;
  row.digest = instance_digest(inst);
  row.algorithm = "sd-hybrid(t_d=" + std::to_string(spec.t_d) +
                  ",a_d=" + std::to_string(spec.a_d) + ")";
  row.k = inst.num_requests();
  row.m = inst.num_sites();
  row.bound = Rat(1);
  HybridOutcome out = run_hybrid(inst, sd, spec);
  if (!out.cav.valid) {
    row.ratio = 0;
    row.pass = true;
    return row;
  }
  row.alg_cost = out.base_trace.total_cost;
  row.opt_cost = out.hybrid_trace.total_cost;
  row.opt_max_cost = hybrid_cycle_length(inst, out.cav, CostModel::tree_path());

  Rat worst = 0;
  auto feed = [&](const Finding& f) {
    if (f.rhs > 0) {
      Rat scaled = f.lhs / f.rhs;
      worst = std::max(worst, scaled);
      if (f.check == "first-cavity-max-weight" || f.check.rfind("simulate-ring", 0) == 0) {
        // equality checks: both directions
        if (f.lhs != f.rhs) worst = std::max(worst, Rat(2));
      }
    } else if (!f.pass) {
      worst = std::max(worst, Rat(2));
    }
  };
  for (const auto& f : check_cavity_step_properties(out)) feed(f);
  feed(check_cycle_cost_bound(inst, out, CostModel::tree_path()));
  for (const auto& f : check_main_bound(inst, out)) feed(f);
  for (const auto& f : verify_conjugate(inst, sd, spec, out)) feed(f);
  for (const auto& f : check_simulation_confinement(inst, sd, out)) feed(f);
  row.ratio = worst;
  row.pass = row.ratio <= row.bound;
  if (!row.pass) row.witness = instance_to_json(inst).dump();
  return row;
}

// Hybrid lemma sweep: exhaustive over all 3-vertex power-of-two trees with
// weights {1,2} plus seeded random cases up to max_n vertices.
inline SweepReport run_family_hybrid_lemmas(int max_n, std::uint64_t seed, int random_cases,
                                            int workers = 1) {
  SweepReport report;
  report.family = "hybrid-lemmas";
  report.seed = seed;
  report.config =
      "exhaustive n=3, random cases=" + std::to_string(random_cases) + " up to n=" +
      std::to_string(max_n);
  std::vector<std::function<SweepRow()>> cases;
  enumerate_small_trees(3, {0, 1}, [&](const WeightedTree& tree) {
    SequenceEnumerator seqs({0, 1, 2}, 3);
    std::vector<int> seq;
    while (seqs.next(seq)) {
      for (int t_d = 1; t_d <= 3; ++t_d)
        for (int a_d = 0; a_d < 3; ++a_d) {
          OnlineInstance inst = tree_instance(tree, seq);
          cases.push_back([inst, t_d, a_d]() {
            SdAlgorithm sd(inst.tree());
            return hybrid_case_row(inst, sd, {t_d, a_d});
          });
        }
    }
  });
  SplitMix64 rng(seed);
  for (int i = 0; i < random_cases; ++i) {
    int n = 2 + static_cast<int>(rng.uniform_int(0, std::max(0, max_n - 2)));
    WeightedTree tree = random_power_of_two_tree(rng, n, 0, 2);
    std::vector<int> seq(n);
    for (auto& r : seq) r = static_cast<int>(rng.uniform_int(0, n - 1));
    int t_d = 1 + static_cast<int>(rng.uniform_int(0, n - 1));
    int a_d = static_cast<int>(rng.uniform_int(0, n - 1));
    OnlineInstance inst = tree_instance(tree, seq);
    inst.seed = seed;
    cases.push_back([inst, t_d, a_d]() {
      SdAlgorithm sd(inst.tree());
      return hybrid_case_row(inst, sd, {t_d, a_d});
    });
  }
  report.rows = parallel_rows(cases, workers);
  return report;
}

}  // namespace otr
