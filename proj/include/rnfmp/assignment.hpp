#pragma once

// Exact capacitated assignment: each job goes to exactly one agent, agent
// loads stay within capacity, total cost is minimal. Depth-first search with
// a capacity-relaxed bound; jobs are branched in descending size so that
// capacity conflicts surface early.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rnfmp/network.hpp"

namespace rnfmp {

struct AssignmentProblem {
  std::vector<double> size;                // per job
  std::vector<double> capacity;            // per agent
  std::vector<std::vector<double>> cost;   // [job][agent]; inf = forbidden
};

struct AssignmentResult {
  bool feasible = false;
  double cost = kInfinity;
  std::vector<std::size_t> agent_of;  // per job
  long long nodes = 0;
};

// Sum of per-job cheapest agents, ignoring capacities.
inline AssignmentResult relaxed_assignment(const AssignmentProblem& p) {
  AssignmentResult r;
  r.agent_of.assign(p.size.size(), kNone);
  r.cost = 0.0;
  r.feasible = true;
  for (std::size_t j = 0; j < p.size.size(); ++j) {
    std::size_t best = kNone;
    for (std::size_t g = 0; g < p.capacity.size(); ++g)
      if (std::isfinite(p.cost[j][g]) && (best == kNone || p.cost[j][g] < p.cost[j][best])) best = g;
    if (best == kNone) {
      r.feasible = false;
      r.cost = kInfinity;
      return r;
    }
    r.agent_of[j] = best;
    r.cost += p.cost[j][best];
  }
  return r;
}

namespace detail {

inline bool fits(double load, double size, double capacity) {
  return load + size <= capacity + 1e-9 * std::max(1.0, capacity);
}

class AssignmentSearch {
 public:
  AssignmentSearch(const AssignmentProblem& p, double cutoff) : p_(p), best_cost_(cutoff) {
    const std::size_t n = p.size.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return p.size[a] > p.size[b]; });
    choices_.resize(n);
    min_cost_.assign(n, kInfinity);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t g = 0; g < p.capacity.size(); ++g)
        if (std::isfinite(p.cost[j][g]) && p.size[j] <= p.capacity[g] + 1e-9 * std::max(1.0, p.capacity[g]))
          choices_[j].push_back(g);
      std::stable_sort(choices_[j].begin(), choices_[j].end(),
                       [&](std::size_t a, std::size_t b) { return p.cost[j][a] < p.cost[j][b]; });
      if (!choices_[j].empty()) min_cost_[j] = p.cost[j][choices_[j].front()];
    }
    suffix_.assign(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix_[i] = suffix_[i + 1] + min_cost_[order_[i]];
    suffix_size_.assign(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix_size_[i] = suffix_size_[i + 1] + p.size[order_[i]];
    load_.assign(p.capacity.size(), 0.0);
    current_.assign(n, kNone);
  }

  AssignmentResult run() {
    AssignmentResult r;
    if (std::isfinite(suffix_[0])) dfs(0, 0.0);
    r.nodes = nodes_;
    if (!best_.empty()) {
      r.feasible = true;
      r.cost = best_cost_;
      r.agent_of = best_;
    }
    return r;
  }

 private:
  void dfs(std::size_t depth, double cost) {
    ++nodes_;
    if (depth == order_.size()) {
      if (best_.empty() ? cost <= best_cost_ : cost < best_cost_) {
        best_cost_ = cost;
        best_ = current_;
      }
      return;
    }
    const double bound = cost + suffix_[depth];
    if (!best_.empty() ? bound >= best_cost_ - 1e-12 * std::max(1.0, std::abs(best_cost_)) : bound > best_cost_)
      return;
    double free = 0.0;
    for (std::size_t g = 0; g < load_.size(); ++g) free += std::max(0.0, p_.capacity[g] - load_[g]);
    if (suffix_size_[depth] > free + 1e-9 * std::max(1.0, free)) return;
    const std::size_t j = order_[depth];
    for (std::size_t g : choices_[j]) {
      if (!fits(load_[g], p_.size[j], p_.capacity[g])) continue;
      load_[g] += p_.size[j];
      current_[j] = g;
      dfs(depth + 1, cost + p_.cost[j][g]);
      load_[g] -= p_.size[j];
      current_[j] = kNone;
    }
  }

  const AssignmentProblem& p_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> choices_;
  std::vector<double> min_cost_;
  std::vector<double> suffix_;
  std::vector<double> suffix_size_;
  std::vector<double> load_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
  double best_cost_;
  long long nodes_ = 0;
};

}  // namespace detail

// Optimal assignment with cost at most `cutoff` (inf = no cutoff). Ties keep
// the first one found, which is deterministic for a given problem.
inline AssignmentResult solve_assignment(const AssignmentProblem& p, double cutoff = kInfinity) {
  if (p.size.empty()) {
    AssignmentResult r;
    r.feasible = true;
    r.cost = 0.0;
    return r;
  }
  return detail::AssignmentSearch(p, cutoff).run();
}

}  // namespace rnfmp
