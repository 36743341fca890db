#pragma once

// prune -> reduce -> warm start -> exact solve -> lift back, with each stage
// switchable for ablation. Every switch leaves the optimal objective alone.

#include <optional>

#include "rnfmp/heuristic.hpp"
#include "rnfmp/instance.hpp"
#include "rnfmp/prune.hpp"
#include "rnfmp/reduce.hpp"
#include "rnfmp/solution.hpp"
#include "rnfmp/solver.hpp"

namespace rnfmp {

struct PipelineOptions {
  bool prune = true;
  bool reduce = true;
  bool warm_start = true;
  bool valid_inequalities = true;
  SolveOptions solve;
};

struct PipelineResult {
  Solution solution;         // on the input network
  Solution working_solution; // on the network the solver saw
  ProblemInstance working;
  std::optional<PrunedNetwork> pruned;
  std::optional<Reductions> reductions;
  std::optional<GreedySolution> greedy;
};

inline PipelineResult run_pipeline(const ProblemInstance& inst, const PipelineOptions& opt = {},
                                   const PrunedNetwork* reuse_prune = nullptr) {
  PipelineResult r;
  if (opt.prune) {
    r.pruned = reuse_prune ? *reuse_prune : prune_all(inst.network);
    r.working = with_network(inst, r.pruned->network);
  } else {
    r.working = inst;
  }
  SolveOptions so = opt.solve;
  if (!opt.valid_inequalities) {
    so.use_exit_vis = false;
    so.use_triangle_vis = false;
  }
  if (opt.reduce || opt.valid_inequalities) {
    ReduceOptions ro;
    ro.prop1 = true;  // exit cuts come from the same scan as the fixings
    ro.prop2 = opt.reduce;
    ro.prop3 = opt.reduce;
    ro.triangle_vis = opt.valid_inequalities;
    r.reductions = reduce_all(r.working, ro);
    if (!opt.reduce) r.reductions->fixed.forced_y.clear();
    if (!opt.reduce) r.reductions->fixed.budget_delta = r.reductions->fixed.offset_delta = 0.0;
    if (!opt.reduce) r.reductions->fixed.infeasible = false;
    if (!opt.valid_inequalities) r.reductions->fixed.exit_vis.clear();
  }
  if (opt.warm_start) {
    r.greedy = greedy_initial(r.working);
    if (r.greedy->feasible) so.warm_start = to_solution(*r.greedy);
  }
  r.working_solution = solve_exact(r.working, r.reductions ? &*r.reductions : nullptr, so);
  r.solution = r.pruned ? expand_solution(r.working_solution, r.pruned->log, inst.network) : r.working_solution;
  return r;
}

}  // namespace rnfmp
