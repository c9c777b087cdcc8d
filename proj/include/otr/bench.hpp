#pragma once

#include <algorithm>
#include <chrono>
#include <vector>

#include "otr/instance.hpp"
#include "otr/subtree_decomposition.hpp"

namespace otr {

struct BenchRow {
  int n = 0;
  double per_request_ns_median = 0;
  std::vector<double> per_request_ns_runs;
};

// Total sd runtime on a uniform path with every request at the far end; the
// per-request work is the linearity contract under test, so decomposition
// construction happens outside the timed region.
inline BenchRow bench_sd_uniform_path(int n, int repeats = 5) {
  std::vector<TreeEdge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({v - 1, v, Rat(1)});
  WeightedTree tree(n, edges, 0);
  SdAlgorithm sd(tree);
  OnlineInstance inst = tree_instance(tree, std::vector<int>(n, n - 1));
  RunOptions opts;
  opts.record_free_sets = false;

  BenchRow row;
  row.n = n;
  for (int rep = 0; rep < repeats; ++rep) {
    auto start = std::chrono::steady_clock::now();
    AssignmentTrace trace = run_online(inst, sd, opts);
    auto stop = std::chrono::steady_clock::now();
    if (trace.steps.size() != static_cast<std::size_t>(n))
      throw std::logic_error("bench run lost requests");
    double ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
    row.per_request_ns_runs.push_back(ns / n);
  }
  std::vector<double> sorted = row.per_request_ns_runs;
  std::sort(sorted.begin(), sorted.end());
  row.per_request_ns_median = sorted[sorted.size() / 2];
  return row;
}

}  // namespace otr
