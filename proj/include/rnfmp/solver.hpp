#pragma once

// Exact solver. With the upgrade set fixed, every origin travels on a
// shortest path and what remains is a capacitated assignment, so the search
// branches on upgrade units only:
//
//   node bound   exact assignment on the optimistic network (every undecided
//                affordable unit treated as bought), which is never above
//                any completion of the node;
//   node leaf    the bound's own routes fit the budget -> optimal for the
//                subtree;
//   incumbent    assignment on the committed units alone.
//
// Open nodes are processed best-bound first, ties by creation order.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "rnfmp/assignment.hpp"
#include "rnfmp/instance.hpp"
#include "rnfmp/network.hpp"
#include "rnfmp/reduce.hpp"
#include "rnfmp/solution.hpp"

namespace rnfmp {

struct SolveOptions {
  double time_limit_s = 300.0;
  double gap_tol = 0.0;
  std::optional<Solution> warm_start;
  bool use_triangle_vis = true;
  bool use_exit_vis = true;
  std::optional<bool> segment_coupling;  // overrides the instance spec when set
  std::uint64_t seed = 0;                // the search is deterministic; kept for reporting

  void validate() const {
    if (!(time_limit_s > 0)) throw Error("time_limit_s must be positive");
    if (!(gap_tol >= 0 && gap_tol < 1)) throw Error("gap_tol must lie in [0, 1)");
  }
};

enum class UnitState : std::int8_t { Undecided = 0, In = 1, Out = 2 };

// Root-level classification shared by the solver and its tests. Ignores
// masks: they never change which destinations an origin can reach.
inline std::optional<SolveStatus> classify_connectivity(const ProblemInstance& inst, bool coupling) {
  const Network& net = inst.network;
  const UpgradeUnits units = upgrade_units(net, coupling);
  const std::int64_t budget = to_cents(inst.budget);
  auto full = ArcFilter::all().admissible(net);
  std::vector<char> affordable(net.arc_count(), 0);
  for (ArcIndex a = 0; a < net.arc_count(); ++a)
    affordable[a] = !net.arc(a).vulnerable || units.units[units.of_arc[a]].cost_cents <= budget;
  bool budget_cut = false;
  for (NodeIndex k : net.origins()) {
    auto reaches = [&](const std::vector<char>& ok) {
      auto tree = shortest_path_tree(net, k, ok);
      for (NodeIndex g : net.destinations())
        if (tree.reachable(g)) return true;
      return false;
    };
    if (!reaches(full)) return SolveStatus::Infeasible;
    if (!reaches(affordable)) budget_cut = true;
  }
  if (budget_cut) return SolveStatus::BudgetDisconnected;
  return std::nullopt;
}

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const ProblemInstance& inst, const Reductions* red, const SolveOptions& opt)
      : inst_(inst),
        net_(inst.network),
        red_(red),
        opt_(opt),
        coupling_(opt.segment_coupling.value_or(inst.spec.segment_coupling)),
        units_(upgrade_units(inst.network, coupling_)),
        budget_(to_cents(inst.budget)) {
    const std::size_t rows = net_.origins().size();
    if (red_ && !red_->mask.empty_shape() && red_->mask.origin_rows() != rows)
      throw Error("reductions do not match the instance");
    allowed_.assign(rows, std::vector<char>(net_.arc_count(), 1));
    if (red_ && !red_->mask.empty_shape())
      for (std::size_t r = 0; r < rows; ++r)
        for (ArcIndex a = 0; a < net_.arc_count(); ++a) allowed_[r][a] = !red_->mask.masked(r, a);
    for (std::size_t u = 0; u < units_.size(); ++u) branch_order_.push_back(u);
    std::stable_sort(branch_order_.begin(), branch_order_.end(), [&](std::size_t a, std::size_t b) {
      return units_.units[a].cost_cents > units_.units[b].cost_cents;
    });
    rank_.assign(units_.size(), 0);
    for (std::size_t i = 0; i < branch_order_.size(); ++i) rank_[branch_order_[i]] = i;
    if (red_ && opt_.use_exit_vis) {
      for (const auto& cut : red_->fixed.exit_vis) {
        std::vector<std::size_t> us;
        for (const auto& id : cut.arcs) us.push_back(units_.of_arc[net_.arc_index(id)]);
        std::sort(us.begin(), us.end());
        us.erase(std::unique(us.begin(), us.end()), us.end());
        exit_cuts_.push_back(std::move(us));
      }
    }
  }

  Solution run() {
    const auto start = std::chrono::steady_clock::now();
    Solution out;
    out.best_bound = kInfinity;
    if (auto cls = classify_connectivity(inst_, coupling_)) {
      out.status = *cls;
      return finish(out, start);
    }
    std::vector<UnitState> root(units_.size(), UnitState::Undecided);
    std::int64_t committed = 0;
    if (red_) {
      if (red_->fixed.infeasible) {
        out.status = SolveStatus::Infeasible;
        return finish(out, start);
      }
      for (const auto& id : red_->fixed.forced_y) {
        const std::size_t u = units_.of_arc[net_.arc_index(id)];
        if (root[u] != UnitState::In) committed += units_.units[u].cost_cents;
        root[u] = UnitState::In;
      }
      if (committed > budget_) {
        out.status = SolveStatus::Infeasible;
        return finish(out, start);
      }
    }
    if (opt_.warm_start) consider_warm_start(*opt_.warm_start);

    struct Open {
      double priority;
      long long id;
      bool fresh_commit;
      std::int64_t committed;
      std::vector<UnitState> state;
    };
    auto later = [](const Open& a, const Open& b) {
      if (a.priority != b.priority) return a.priority > b.priority;
      return a.id > b.id;
    };
    std::priority_queue<Open, std::vector<Open>, decltype(later)> open(later);
    long long next_id = 0;
    open.push({-kInfinity, next_id++, true, committed, std::move(root)});
    bool timed_out = false;
    double frontier = kInfinity;
    while (!open.empty()) {
      if (std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > opt_.time_limit_s) {
        timed_out = true;
        frontier = open.top().priority;
        break;
      }
      Open node = open.top();
      open.pop();
      if (cut(node.priority)) continue;
      ++nodes_;
      auto eval = evaluate(node.state, node.committed, node.fresh_commit);
      if (!eval.branch) continue;
      const std::size_t u = *eval.branch;
      Open in{eval.bound, next_id++, true, node.committed + units_.units[u].cost_cents, node.state};
      in.state[u] = UnitState::In;
      Open excl{eval.bound, next_id++, false, node.committed, std::move(node.state)};
      excl.state[u] = UnitState::Out;
      open.push(std::move(in));
      open.push(std::move(excl));
    }
    if (timed_out) {
      out.status = SolveStatus::TimeLimit;
      out.best_bound = std::min({frontier, floor_, best_.objective});
    } else if (has_incumbent_) {
      out.status = SolveStatus::Optimal;
      out.best_bound = std::min(floor_, best_.objective);
    } else {
      out.status = SolveStatus::Infeasible;
    }
    if (has_incumbent_) {
      out.upgrades = best_.upgrades;
      out.assignment = best_.assignment;
      out.paths = best_.paths;
      out.objective = best_.objective;
      if (out.status == SolveStatus::TimeLimit && !std::isfinite(out.best_bound)) out.best_bound = -kInfinity;
      out.gap = relative_gap(out.objective, out.best_bound);
      if (out.gap <= 1e-9) out.gap = 0.0;  // within the comparison tolerance
    }
    return finish(out, start);
  }

  // Bound of the subproblem in which units marked In are available, units
  // marked Out are not, and the rest are open. Infinite when provably empty.
  double node_bound(std::vector<UnitState> state) {
    std::int64_t committed = 0;
    for (std::size_t u = 0; u < units_.size(); ++u)
      if (state[u] == UnitState::In) committed += units_.units[u].cost_cents;
    if (committed > budget_) return kInfinity;
    return bound_only(state, committed);
  }

 private:
  struct Incumbent {
    double objective = kInfinity;
    std::vector<std::string> upgrades;
    std::map<std::string, std::string> assignment;
    std::map<std::string, std::vector<std::string>> paths;
  };

  struct Eval {
    double bound = kInfinity;
    std::optional<std::size_t> branch;
  };

  static double relative_gap(double obj, double bound) {
    if (!std::isfinite(obj) || !std::isfinite(bound)) return kInfinity;
    return std::max(0.0, obj - bound) / std::max(1e-12, std::abs(obj));
  }

  Solution& finish(Solution& s, std::chrono::steady_clock::time_point start) {
    s.stats.nodes_explored = nodes_;
    s.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return s;
  }

  double slack() const {
    const double inc = best_.objective;
    return std::max(1e-9 * std::max(1.0, std::abs(inc)), opt_.gap_tol * std::abs(inc));
  }

  bool prunable(double bound) const { return has_incumbent_ && bound >= best_.objective - slack(); }

  // prunable(), remembering the weakest bound discarded for gap reporting.
  bool cut(double bound) {
    if (!prunable(bound)) return false;
    floor_ = std::min(floor_, bound);
    return true;
  }

  std::vector<char> admissible_arcs(const std::vector<UnitState>& state, bool optimistic, std::size_t row) const {
    std::vector<char> ok(net_.arc_count(), 0);
    for (ArcIndex a = 0; a < net_.arc_count(); ++a) {
      if (!allowed_[row][a]) continue;
      if (!net_.arc(a).vulnerable) {
        ok[a] = 1;
        continue;
      }
      const UnitState s = state[units_.of_arc[a]];
      ok[a] = s == UnitState::In || (optimistic && s == UnitState::Undecided);
    }
    return ok;
  }

  struct Routing {
    std::vector<ShortestPathTree> trees;  // per origin row
    AssignmentProblem problem;
  };

  Routing routing(const std::vector<UnitState>& state, bool optimistic) const {
    Routing r;
    const auto& origins = net_.origins();
    const auto& dests = net_.destinations();
    for (NodeIndex g : dests) r.problem.capacity.push_back(net_.node(g).capacity);
    for (std::size_t row = 0; row < origins.size(); ++row) {
      const NodeIndex k = origins[row];
      r.trees.push_back(shortest_path_tree(net_, k, admissible_arcs(state, optimistic, row)));
      r.problem.size.push_back(net_.node(k).residents);
      std::vector<double> c;
      for (NodeIndex g : dests) c.push_back(net_.node(k).weight * r.trees.back().dist[g]);
      r.problem.cost.push_back(std::move(c));
    }
    return r;
  }

  void tighten(std::vector<UnitState>& state, std::int64_t committed) const {
    for (std::size_t u = 0; u < units_.size(); ++u)
      if (state[u] == UnitState::Undecided && committed + units_.units[u].cost_cents > budget_)
        state[u] = UnitState::Out;
  }

  bool violates_exit_cuts(const std::vector<UnitState>& state) const {
    for (const auto& cut : exit_cuts_) {
      bool open_exit = false;
      for (std::size_t u : cut) open_exit |= state[u] != UnitState::Out;
      if (!open_exit) return true;
    }
    return false;
  }

  double bound_only(std::vector<UnitState> state, std::int64_t committed) {
    tighten(state, committed);
    if (violates_exit_cuts(state)) return kInfinity;
    Routing r = routing(state, true);
    auto exact = solve_assignment(r.problem);
    return exact.feasible ? exact.cost : kInfinity;
  }

  Eval evaluate(std::vector<UnitState> state, std::int64_t committed, bool fresh_commit) {
    Eval e;
    tighten(state, committed);
    if (violates_exit_cuts(state)) return e;
    Routing r = routing(state, true);
    auto relaxed = relaxed_assignment(r.problem);
    if (!relaxed.feasible || cut(relaxed.cost)) return e;
    if (fresh_commit) try_committed_only(state);
    const double cutoff = has_incumbent_ ? best_.objective : kInfinity;
    auto exact = solve_assignment(r.problem, cutoff);
    if (!exact.feasible || cut(exact.cost)) return e;
    e.bound = exact.cost;
    std::set<std::size_t> extra;
    std::int64_t extra_cost = 0;
    for (std::size_t row = 0; row < r.trees.size(); ++row) {
      const NodeIndex g = net_.destinations()[exact.agent_of[row]];
      for (ArcIndex a : r.trees[row].path_to(net_, g)) {
        if (!net_.arc(a).vulnerable) continue;
        const std::size_t u = units_.of_arc[a];
        if (state[u] == UnitState::Undecided && extra.insert(u).second) extra_cost += units_.units[u].cost_cents;
      }
    }
    if (committed + extra_cost <= budget_) {
      offer(r, exact);
      return e;
    }
    std::size_t pick = kNone;
    for (std::size_t u : extra)
      if (pick == kNone || rank_[u] < rank_[pick]) pick = u;
    e.branch = pick;
    return e;
  }

  void try_committed_only(const std::vector<UnitState>& state) {
    Routing r = routing(state, false);
    const double cutoff = has_incumbent_ ? best_.objective : kInfinity;
    auto res = solve_assignment(r.problem, cutoff);
    if (res.feasible) offer(r, res);
  }

  // Turns a routed assignment into a candidate incumbent. Upgrades are the
  // units the routes actually traverse.
  void offer(const Routing& r, const AssignmentResult& res) {
    Incumbent c;
    std::set<std::size_t> used;
    std::vector<double> times(r.trees.size(), 0.0);
    for (std::size_t row = 0; row < r.trees.size(); ++row) {
      const NodeIndex k = net_.origins()[row];
      const NodeIndex g = net_.destinations()[res.agent_of[row]];
      std::vector<std::string> ids;
      double t = 0.0;
      for (ArcIndex a : r.trees[row].path_to(net_, g)) {
        ids.push_back(net_.arc(a).id);
        t += net_.arc(a).travel_time;
        if (net_.arc(a).vulnerable) used.insert(units_.of_arc[a]);
      }
      times[row] = t;
      c.assignment[net_.node(k).id] = net_.node(g).id;
      c.paths[net_.node(k).id] = std::move(ids);
    }
    c.objective = 0.0;
    for (std::size_t row = 0; row < times.size(); ++row) c.objective += net_.node(net_.origins()[row]).weight * times[row];
    for (std::size_t u : used)
      for (ArcIndex a : units_.units[u].arcs) c.upgrades.push_back(net_.arc(a).id);
    std::sort(c.upgrades.begin(), c.upgrades.end());
    accept(std::move(c));
  }

  void accept(Incumbent c) {
    if (has_incumbent_) {
      const double tol = 1e-12 * std::max(1.0, std::abs(best_.objective));
      if (c.objective > best_.objective + tol) return;
      if (c.objective >= best_.objective - tol && !(c.upgrades < best_.upgrades)) return;
    }
    best_ = std::move(c);
    has_incumbent_ = true;
  }

  void consider_warm_start(const Solution& ws) {
    if (!has_solution(ws.status)) return;
    ProblemInstance probe = inst_;
    probe.spec.segment_coupling = coupling_;
    if (!validate_solution(probe, ws).ok()) return;
    const auto& origins = net_.origins();
    for (std::size_t row = 0; row < origins.size(); ++row) {
      const auto& path = ws.paths.at(net_.node(origins[row]).id);
      for (const auto& id : path)
        if (!allowed_[row][net_.arc_index(id)]) return;
    }
    Incumbent c;
    c.assignment = ws.assignment;
    c.paths = ws.paths;
    std::set<std::size_t> used;
    c.objective = 0.0;
    for (NodeIndex k : origins) {
      double t = 0.0;
      for (const auto& id : ws.paths.at(net_.node(k).id)) {
        const ArcIndex a = net_.arc_index(id);
        t += net_.arc(a).travel_time;
        if (net_.arc(a).vulnerable) used.insert(units_.of_arc[a]);
      }
      c.objective += net_.node(k).weight * t;
    }
    if (red_)
      for (const auto& id : red_->fixed.forced_y)
        if (!used.count(units_.of_arc[net_.arc_index(id)])) return;
    for (std::size_t u : used)
      for (ArcIndex a : units_.units[u].arcs) c.upgrades.push_back(net_.arc(a).id);
    std::sort(c.upgrades.begin(), c.upgrades.end());
    accept(std::move(c));
  }

  const ProblemInstance& inst_;
  const Network& net_;
  const Reductions* red_;
  SolveOptions opt_;
  bool coupling_;
  UpgradeUnits units_;
  std::int64_t budget_;
  std::vector<std::vector<char>> allowed_;
  std::vector<std::size_t> branch_order_;
  std::vector<std::size_t> rank_;
  std::vector<std::vector<std::size_t>> exit_cuts_;
  Incumbent best_;
  bool has_incumbent_ = false;
  double floor_ = kInfinity;
  long long nodes_ = 0;
};

}  // namespace detail

inline Solution solve_exact(const ProblemInstance& inst, const Reductions* red = nullptr,
                            const SolveOptions& opt = {}) {
  opt.validate();
  return detail::BranchAndBound(inst, red, opt).run();
}

inline Solution solve_exact(const ProblemInstance& inst, const SolveOptions& opt) {
  return solve_exact(inst, nullptr, opt);
}

// Lower bound of the search node described by `state` (one entry per upgrade
// unit, in unit id order).
inline double subproblem_bound(const ProblemInstance& inst, const Reductions* red,
                               const std::vector<UnitState>& state, const SolveOptions& opt = {}) {
  detail::BranchAndBound bb(inst, red, opt);
  return bb.node_bound(state);
}

inline bool triangle_cuts_hold(const Solution& sol, const std::vector<TriangleVi>& vis) {
  for (const auto& [origin, path] : sol.paths) {
    std::set<std::string> used(path.begin(), path.end());
    for (const auto& v : vis)
      if (used.count(v.arc_ij) + used.count(v.arc_ih) + used.count(v.arc_jh) > 1) return false;
  }
  return true;
}

}  // namespace rnfmp
