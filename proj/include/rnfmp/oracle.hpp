#pragma once

// Exhaustive reference solver for small instances, independent of the
// branch-and-bound code: it lists every simple path from each origin, then
// for every affordable upgrade subset tries every assignment. Intended for
// tests and cross-checks only.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rnfmp/instance.hpp"
#include "rnfmp/network.hpp"
#include "rnfmp/prune.hpp"
#include "rnfmp/reduce.hpp"
#include "rnfmp/solution.hpp"

namespace rnfmp {

struct OracleLimits {
  std::size_t max_units = 20;
  std::size_t max_origins = 8;
  std::size_t max_destinations = 4;
  std::size_t max_paths = 200000;  // simple paths per origin
};

struct OracleOptions {
  OracleLimits limits;
  const Reductions* reductions = nullptr;  // masks, forced units and exit cuts to honor
  bool triangle_vis = false;               // drop paths using two arcs of one triangle cut
  std::optional<bool> segment_coupling;
};

namespace detail {

struct OraclePath {
  std::size_t dest = 0;  // destination position
  double time = 0.0;
  std::uint64_t units = 0;
  std::vector<ArcIndex> arcs;
};

// Every simple path from k to each destination, in lexicographic arc order.
// Paths may run through other destinations. `ok` masks arcs for this origin;
// paths violating a triangle cut are dropped when `vis` is non-empty.
inline std::vector<OraclePath> oracle_paths(const Network& net, const UpgradeUnits& units, NodeIndex k,
                                            const std::vector<char>& ok,
                                            const std::vector<std::array<ArcIndex, 3>>& vis,
                                            std::size_t max_paths) {
  std::vector<std::size_t> dest_pos(net.node_count(), kNone);
  for (std::size_t g = 0; g < net.destinations().size(); ++g) dest_pos[net.destinations()[g]] = g;
  std::vector<OraclePath> out;
  std::vector<char> on_path(net.node_count(), 0), arc_used(net.arc_count(), 0);
  std::vector<ArcIndex> stack;
  auto violates = [&]() {
    for (const auto& tri : vis)
      if (arc_used[tri[0]] + arc_used[tri[1]] + arc_used[tri[2]] > 1) return true;
    return false;
  };
  auto dfs = [&](auto&& self, NodeIndex u) -> void {
    if (dest_pos[u] != kNone && !stack.empty() && !violates()) {
      OraclePath p;
      p.dest = dest_pos[u];
      for (ArcIndex a : stack) {
        p.time += net.arc(a).travel_time;
        if (net.arc(a).vulnerable) p.units |= std::uint64_t{1} << units.of_arc[a];
      }
      p.arcs = stack;
      out.push_back(std::move(p));
      if (out.size() > max_paths) throw Error("oracle scale");
    }
    for (ArcIndex a : net.out_arcs(u)) {
      const NodeIndex v = net.head(a);
      if (!ok[a] || on_path[v]) continue;
      on_path[v] = 1;
      arc_used[a] = 1;
      stack.push_back(a);
      self(self, v);
      stack.pop_back();
      arc_used[a] = 0;
      on_path[v] = 0;
    }
  };
  on_path[k] = 1;
  dfs(dfs, k);
  return out;
}

inline bool oracle_reaches_any(const Network& net, NodeIndex k, const std::vector<char>& ok) {
  std::vector<char> seen(net.node_count(), 0);
  std::vector<NodeIndex> stack{k};
  seen[k] = 1;
  while (!stack.empty()) {
    NodeIndex u = stack.back();
    stack.pop_back();
    if (net.node(u).kind == NodeKind::Destination) return true;
    for (ArcIndex a : net.out_arcs(u))
      if (ok[a] && !seen[net.head(a)]) {
        seen[net.head(a)] = 1;
        stack.push_back(net.head(a));
      }
  }
  return false;
}

}  // namespace detail

inline Solution brute_force_oracle(const ProblemInstance& inst, const OracleOptions& opt = {}) {
  const Network& net = inst.network;
  const bool coupling = opt.segment_coupling.value_or(inst.spec.segment_coupling);
  const UpgradeUnits units = upgrade_units(net, coupling);
  if (units.size() > opt.limits.max_units || net.origins().size() > opt.limits.max_origins ||
      net.destinations().size() > opt.limits.max_destinations)
    throw Error("oracle scale");
  const std::int64_t budget = to_cents(inst.budget);
  const std::size_t n_units = units.size();
  const auto& origins = net.origins();
  const auto& dests = net.destinations();

  Solution sol;
  sol.best_bound = kInfinity;
  {
    std::vector<char> all(net.arc_count(), 1), cheap(net.arc_count(), 1);
    for (ArcIndex a = 0; a < net.arc_count(); ++a)
      if (net.arc(a).vulnerable) cheap[a] = units.units[units.of_arc[a]].cost_cents <= budget;
    bool cut = false;
    for (NodeIndex k : origins) {
      if (!detail::oracle_reaches_any(net, k, all)) {
        sol.status = SolveStatus::Infeasible;
        return sol;
      }
      cut |= !detail::oracle_reaches_any(net, k, cheap);
    }
    if (cut) {
      sol.status = SolveStatus::BudgetDisconnected;
      return sol;
    }
  }

  const Reductions* red = opt.reductions;
  std::uint64_t required = 0;
  std::vector<std::uint64_t> exit_sets;
  std::vector<std::array<ArcIndex, 3>> vis;
  if (red) {
    if (red->fixed.infeasible) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
    for (const auto& id : red->fixed.forced_y) required |= std::uint64_t{1} << units.of_arc[net.arc_index(id)];
    for (const auto& cut : red->fixed.exit_vis) {
      std::uint64_t s = 0;
      for (const auto& id : cut.arcs) s |= std::uint64_t{1} << units.of_arc[net.arc_index(id)];
      exit_sets.push_back(s);
    }
  }
  if (opt.triangle_vis) {
    const auto tri = red ? red->triangle_vis : triangle_inequalities(net);
    for (const auto& t : tri)
      vis.push_back({net.arc_index(t.arc_ij), net.arc_index(t.arc_ih), net.arc_index(t.arc_jh)});
  }

  std::vector<std::vector<detail::OraclePath>> paths;
  for (std::size_t row = 0; row < origins.size(); ++row) {
    std::vector<char> ok(net.arc_count(), 1);
    if (red && !red->mask.empty_shape())
      for (ArcIndex a = 0; a < net.arc_count(); ++a) ok[a] = !red->mask.masked(row, a);
    paths.push_back(detail::oracle_paths(net, units, origins[row], ok, vis, opt.limits.max_paths));
  }

  double best = kInfinity;
  std::vector<std::size_t> best_assign;
  std::vector<std::vector<ArcIndex>> best_paths;
  std::vector<std::string> best_upgrades;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_units); ++mask) {
    if ((mask & required) != required) continue;
    bool exits_ok = true;
    for (auto s : exit_sets) exits_ok &= (mask & s) != 0;
    if (!exits_ok) continue;
    std::int64_t cost = 0;
    for (std::size_t u = 0; u < n_units; ++u)
      if (mask >> u & 1) cost += units.units[u].cost_cents;
    if (cost > budget) continue;

    // Fastest admissible path per (origin, destination); first found wins ties.
    std::vector<std::vector<const detail::OraclePath*>> route(origins.size(),
                                                              std::vector<const detail::OraclePath*>(dests.size(), nullptr));
    for (std::size_t row = 0; row < origins.size(); ++row)
      for (const auto& p : paths[row])
        if ((p.units & ~mask) == 0 && (!route[row][p.dest] || p.time < route[row][p.dest]->time))
          route[row][p.dest] = &p;
    // Every assignment, as a mixed-radix counter over destinations.
    std::vector<std::size_t> pick(origins.size(), 0);
    for (;;) {
      std::vector<double> load(dests.size(), 0.0);
      double obj = 0.0;
      bool ok = true;
      for (std::size_t row = 0; row < origins.size() && ok; ++row) {
        if (!route[row][pick[row]]) ok = false;
        load[pick[row]] += net.node(origins[row]).residents;
      }
      for (std::size_t g = 0; g < dests.size() && ok; ++g)
        if (load[g] > net.node(dests[g]).capacity + 1e-9 * std::max(1.0, net.node(dests[g]).capacity)) ok = false;
      if (ok) {
        for (std::size_t row = 0; row < origins.size(); ++row)
          obj += net.node(origins[row]).weight * route[row][pick[row]]->time;
        if (obj < best - 1e-12 * std::max(1.0, std::abs(obj))) {
          best = obj;
          best_assign = pick;
          best_paths.clear();
          std::set<std::size_t> used;
          for (std::size_t row = 0; row < origins.size(); ++row) {
            best_paths.push_back(route[row][pick[row]]->arcs);
            for (ArcIndex a : best_paths.back())
              if (net.arc(a).vulnerable) used.insert(units.of_arc[a]);
          }
          best_upgrades.clear();
          for (std::size_t u : used)
            for (ArcIndex a : units.units[u].arcs) best_upgrades.push_back(net.arc(a).id);
          std::sort(best_upgrades.begin(), best_upgrades.end());
        }
      }
      std::size_t pos = 0;
      while (pos < pick.size() && ++pick[pos] == dests.size()) pick[pos++] = 0;
      if (pos == pick.size()) break;
    }
  }
  if (!std::isfinite(best)) {
    sol.status = SolveStatus::Infeasible;
    return sol;
  }
  sol.status = SolveStatus::Optimal;
  sol.objective = best;
  sol.best_bound = best;
  sol.gap = 0.0;
  sol.upgrades = best_upgrades;
  for (std::size_t row = 0; row < origins.size(); ++row) {
    const std::string& k = net.node(origins[row]).id;
    sol.assignment[k] = net.node(dests[best_assign[row]]).id;
    std::vector<std::string> ids;
    for (ArcIndex a : best_paths[row]) ids.push_back(net.arc(a).id);
    sol.paths[k] = std::move(ids);
  }
  return sol;
}

}  // namespace rnfmp
