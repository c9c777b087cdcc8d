#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "otr/min_cost_matching.hpp"
#include "otr/mpfs.hpp"

namespace otr {

struct WorstCaseResult {
  Rat ratio;                    // max over sequences of alg(num) / opt(den); 0 if none positive
  std::vector<int> witness;     // lexicographically smallest maximizing sequence
  unsigned long long sequences = 0;
};

// Exhaustive worst case over all request sequences of the instance's length
// drawn from `positions`. Sequences where both sides are zero are skipped; a
// positive algorithm cost against a zero optimum would disprove
// competitiveness and trips an exception.
inline WorstCaseResult worst_case_ratio(const OnlineInstance& skeleton,
                                        const std::vector<int>& positions,
                                        const OnlineAlgorithm& alg, const CostModel& num_cost,
                                        const CostModel& den_cost,
                                        unsigned long long guard = 2'000'000ULL) {
  int k = skeleton.num_requests();
  SequenceEnumerator seqs(positions, k);
  if (seqs.count() > guard) throw std::invalid_argument("sequence space exceeds guard");

  WorstCaseResult out;
  out.ratio = 0;
  OnlineInstance inst = skeleton;
  std::vector<int> seq;
  RunOptions opts;
  opts.record_free_sets = false;
  while (seqs.next(seq)) {
    ++out.sequences;
    inst.requests = seq;
    AssignmentTrace trace = run_online(inst, alg, opts);
    Rat alg_cost = 0;
    for (const auto& step : trace.steps) alg_cost += num_cost.cost(inst, step.request, step.site);
    Rat opt = opt_cost(inst, den_cost);
    if (opt == 0) {
      if (alg_cost > 0)
        throw std::logic_error("positive algorithm cost with zero optimum");
      continue;
    }
    Rat ratio = alg_cost / opt;
    if (ratio > out.ratio) {
      out.ratio = ratio;
      out.witness = seq;
    }
  }
  return out;
}

}  // namespace otr
