// Command-line driver: single runs, instance generation, bound-verification
// sweeps, empirical ratio tables and the selection benchmark.
//
// Exit codes: 0 success, 1 bound violation, 2 usage or parse error,
// 3 unknown algorithm.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "otr/bench.hpp"
#include "otr/bstar.hpp"
#include "otr/instance_io.hpp"
#include "otr/permutation.hpp"
#include "otr/subtree_decomposition.hpp"
#include "otr/sweep.hpp"

namespace {

using namespace otr;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnknownAlgorithm = 3;

std::unique_ptr<OnlineAlgorithm> make_algorithm(const std::string& name,
                                                const OnlineInstance& inst) {
  if (name == "sd") {
    if (!inst.on_tree())
      throw std::invalid_argument("sd runs on tree instances; use bstar for metrics");
    return std::make_unique<SdAlgorithm>(inst.tree());
  }
  if (name == "greedy") return std::make_unique<GreedyAlgorithm>(inst);
  if (name == "permutation") return std::make_unique<PermutationAlgorithm>(inst);
  if (name == "bstar") {
    if (inst.on_tree()) {
      // Treat the tree as its own metric so the pipeline applies uniformly.
      int n = inst.num_points();
      std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = inst.tree().path_distance(i, j);
      MetricSpace space(d);
      return std::make_unique<NearestSiteLift>(build_bstar(space, inst.sites), space, inst.sites);
    }
    return std::make_unique<NearestSiteLift>(build_bstar(inst.metric(), inst.sites),
                                             inst.metric(), inst.sites);
  }
  return nullptr;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

int cmd_run(const std::string& instance_path, const std::string& alg_name) {
  OnlineInstance inst = read_instance_file(instance_path);
  std::unique_ptr<OnlineAlgorithm> alg = make_algorithm(alg_name, inst);
  if (!alg) {
    std::cerr << "unknown algorithm '" << alg_name << "'\n";
    return kExitUnknownAlgorithm;
  }
  AssignmentTrace trace = run_online(inst, *alg);
  std::cout << "algorithm: " << alg->name() << "\n";
  std::cout << "instance: " << instance_digest(inst) << " kind=" << kind_name(inst.kind)
            << " k=" << inst.num_requests() << " m=" << inst.num_sites() << "\n";
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const auto& s = trace.steps[t];
    std::cout << "t=" << t + 1 << " request=" << s.request << " -> site=" << s.site
              << " cost=" << rat_to_string(s.cost) << "\n";
  }
  std::cout << "total_cost=" << rat_to_string(trace.total_cost) << " ("
            << rat_to_double(trace.total_cost) << ")\n";
  return kExitOk;
}

int cmd_generate(const GeneratorConfig& cfg, const std::string& out_path) {
  OnlineInstance inst = generate(cfg);
  std::string text = instance_to_string(inst);
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
  return kExitOk;
}

int cmd_verify_bounds(const std::string& family, int max_n, int max_k, std::uint64_t seed,
                      int cases, int workers, const std::string& out_base, bool no_timestamp,
                      bool unsafe_large) {
  if (!unsafe_large) {
    if (max_n > 5 || max_k > 6) {
      std::cerr << "size limits exceed the exhaustive-search guard"
                << " (pass --unsafe-large to override)\n";
      return kExitUsage;
    }
  }
  SweepReport report;
  if (family == "sd-tstrong") {
    report = run_family_sd_tstrong(std::min(max_n, unsafe_large ? max_n : 5), workers);
  } else if (family == "bstar-omms") {
    report = run_family_bstar_omms(cases > 0 ? cases : 200, seed, workers);
  } else if (family == "pipeline-otr") {
    report = run_family_pipeline_otr(cases > 0 ? cases : 100, seed, workers);
  } else if (family == "hybrid-lemmas") {
    report = run_family_hybrid_lemmas(std::min(max_n, 6), seed, cases > 0 ? cases : 2000, workers);
  } else {
    std::cerr << "unknown family '" << family << "'\n";
    return kExitUsage;
  }
  write_text(out_base + ".csv", report_to_csv(report));
  write_text(out_base + ".json", report_to_json(report, !no_timestamp).dump(2) + "\n");
  std::cout << "family=" << report.family << " rows=" << report.rows.size()
            << " max_ratio=" << rat_to_string(report.max_ratio()) << " all_pass="
            << (report.all_pass() ? "yes" : "no") << "\n";
  if (!report.all_pass()) {
    const SweepRow* fail = report.first_failure();
    std::cerr << "bound violation in row " << fail->digest << " ratio="
              << rat_to_string(fail->ratio) << " bound=" << rat_to_string(fail->bound) << "\n";
    if (!fail->witness.empty()) {
      write_text(out_base + "-witness.json", fail->witness + "\n");
      std::cerr << "witness written to " << out_base << "-witness.json\n";
    }
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_ratio_table(const std::vector<std::string>& algs, int min_m, int max_m,
                    std::uint64_t seed, const std::string& out_path, bool unsafe_large) {
  if (!unsafe_large && max_m > 6) {
    std::cerr << "ratio-table sizes are capped at 6 (pass --unsafe-large to override)\n";
    return kExitUsage;
  }
  std::ostringstream out;
  out << "algorithm,m,k,worst_ratio,worst_ratio_float,mean_ratio_float\n";
  for (int m = min_m; m <= max_m; ++m) {
    // Doubling-weight path: weights 1, 2, 4, ...
    std::vector<TreeEdge> edges;
    Rat w = 1;
    for (int v = 1; v < m; ++v, w *= 2) edges.push_back({v - 1, v, w});
    WeightedTree tree(m, edges, 0);
    OnlineInstance skeleton = tree_instance(tree, std::vector<int>(m, 0));
    std::vector<int> verts(m);
    std::iota(verts.begin(), verts.end(), 0);
    for (const std::string& name : algs) {
      std::unique_ptr<OnlineAlgorithm> alg = make_algorithm(name, skeleton);
      if (!alg) {
        std::cerr << "unknown algorithm '" << name << "'\n";
        return kExitUnknownAlgorithm;
      }
      SequenceEnumerator seqs(verts, m);
      std::vector<int> seq;
      Rat worst = 0, sum = 0;
      long long counted = 0;
      OnlineInstance inst = skeleton;
      while (seqs.next(seq)) {
        inst.requests = seq;
        Rat alg_cost = run_online(inst, *alg).total_cost;
        Rat opt = opt_cost(inst, CostModel::tree_path());
        if (opt == 0) continue;
        Rat ratio = alg_cost / opt;
        worst = std::max(worst, ratio);
        sum += ratio;
        ++counted;
      }
      Rat mean = counted > 0 ? sum / Rat(counted) : Rat(0);
      out << name << ',' << m << ',' << m << ',' << rat_to_string(worst) << ','
          << rat_to_double(worst) << ',' << rat_to_double(mean) << '\n';
    }
  }
  if (out_path.empty())
    std::cout << out.str();
  else
    write_text(out_path, out.str());
  return kExitOk;
}

int cmd_bench(const std::vector<int>& sizes, int repeats) {
  std::cout << "n,per_request_ns_median,runs\n";
  for (int n : sizes) {
    BenchRow row = bench_sd_uniform_path(n, repeats);
    std::cout << row.n << ',' << row.per_request_ns_median << ',';
    for (std::size_t i = 0; i < row.per_request_ns_runs.size(); ++i) {
      if (i) std::cout << ';';
      std::cout << row.per_request_ns_runs[i];
    }
    std::cout << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online transportation laboratory"};
  app.require_subcommand(1);

  std::string instance_path, alg_name = "sd";
  auto* run = app.add_subcommand("run", "run one algorithm on an instance file");
  run->add_option("--instance", instance_path, "instance JSON file")->required();
  run->add_option("--alg", alg_name, "sd | greedy | permutation | bstar");

  GeneratorConfig gen_cfg;
  std::string gen_out, gen_shape = "random-tree", gen_kind = "OMT_S2", gen_caps = "balanced";
  auto* gen = app.add_subcommand("generate", "write a seeded instance file");
  gen->add_option("--shape", gen_shape, "random-tree | path | star | random-metric");
  gen->add_option("--kind", gen_kind, "OTR | OMM | OMM_S | OMT_S2");
  gen->add_option("--n", gen_cfg.n, "points");
  gen->add_option("--m", gen_cfg.m, "sites");
  gen->add_option("--k", gen_cfg.k, "requests");
  gen->add_option("--seed", gen_cfg.seed, "generator seed");
  gen->add_option("--exp-lo", gen_cfg.exp_lo, "minimum weight exponent");
  gen->add_option("--exp-hi", gen_cfg.exp_hi, "maximum weight exponent");
  gen->add_option("--caps", gen_caps, "balanced | random");
  gen->add_option("--out", gen_out, "output path (stdout when omitted)");

  std::string family = "sd-tstrong", out_base = "report";
  int max_n = 4, max_k = 5, cases = 0, workers = 1;
  std::uint64_t seed = 1;
  bool no_timestamp = false, unsafe_large = false;
  auto* verify = app.add_subcommand("verify-bounds", "run a bound-verification sweep");
  verify->add_option("--family", family, "sd-tstrong | bstar-omms | pipeline-otr | hybrid-lemmas");
  verify->add_option("--max-n", max_n, "largest tree size in exhaustive sweeps");
  verify->add_option("--max-k", max_k, "largest request-sequence length");
  verify->add_option("--seed", seed, "sweep seed");
  verify->add_option("--cases", cases, "seeded case count (family default when 0)");
  verify->add_option("--workers", workers, "worker threads");
  verify->add_option("--out", out_base, "report base path (.csv/.json)");
  verify->add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");
  verify->add_flag("--unsafe-large", unsafe_large, "lift the exhaustive-search guards");

  std::string table_algs = "sd,greedy", table_out;
  int table_min = 2, table_max = 6;
  std::uint64_t table_seed = 1;
  bool table_unsafe = false;
  auto* table = app.add_subcommand("ratio-table", "empirical ratios on the doubling path");
  table->add_option("--algs", table_algs, "comma-separated algorithm names");
  table->add_option("--min-m", table_min, "smallest site count");
  table->add_option("--max-m", table_max, "largest site count");
  table->add_option("--seed", table_seed, "unused for the exhaustive table; echoed");
  table->add_option("--out", table_out, "CSV path (stdout when omitted)");
  table->add_flag("--unsafe-large", table_unsafe, "lift the size guard");

  std::vector<int> bench_sizes{1000, 2000, 4000};
  int bench_repeats = 5;
  auto* bench = app.add_subcommand("bench", "per-request timing of sd on uniform paths");
  bench->add_option("--n-list", bench_sizes, "path sizes");
  bench->add_option("--repeats", bench_repeats, "runs per size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(instance_path, alg_name);
    if (gen->parsed()) {
      gen_cfg.kind = kind_from_name(gen_kind);
      if (gen_shape == "random-tree")
        gen_cfg.shape = InstanceShape::RandomTree;
      else if (gen_shape == "path")
        gen_cfg.shape = InstanceShape::Path;
      else if (gen_shape == "star")
        gen_cfg.shape = InstanceShape::Star;
      else if (gen_shape == "random-metric")
        gen_cfg.shape = InstanceShape::RandomMetric;
      else
        throw std::invalid_argument("unknown shape '" + gen_shape + "'");
      gen_cfg.capacity_scheme =
          gen_caps == "random" ? CapacityScheme::Random : CapacityScheme::Balanced;
      return cmd_generate(gen_cfg, gen_out);
    }
    if (verify->parsed())
      return cmd_verify_bounds(family, max_n, max_k, seed, cases, workers, out_base,
                               no_timestamp, unsafe_large);
    if (table->parsed()) {
      std::vector<std::string> algs;
      std::stringstream ss(table_algs);
      std::string piece;
      while (std::getline(ss, piece, ','))
        if (!piece.empty()) algs.push_back(piece);
      return cmd_ratio_table(algs, table_min, table_max, table_seed, table_out, table_unsafe);
    }
    if (bench->parsed()) return cmd_bench(bench_sizes, bench_repeats);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
