#pragma once

// Reference computations for the tests. Each one is written from the
// definitions with the simplest algorithm that works at test scale
// (Floyd-Warshall, exhaustive enumeration, plain graph search) and shares
// no code with the library beyond the Network container.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rnfmp/gap.hpp"
#include "rnfmp/instance.hpp"
#include "rnfmp/network.hpp"
#include "rnfmp/solution.hpp"

namespace rnfmp::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Matrix = std::vector<std::vector<double>>;

// All-pairs shortest times over arcs with ok[a] set.
inline Matrix floyd_warshall(const Network& net, const std::vector<char>& ok) {
  const std::size_t n = net.node_count();
  Matrix d(n, std::vector<double>(n, kInf));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0.0;
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    if (!ok[a]) continue;
    auto& cell = d[net.tail(a)][net.head(a)];
    cell = std::min(cell, net.arc(a).travel_time);
  }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][m] + d[m][j] < d[i][j]) d[i][j] = d[i][m] + d[m][j];
  return d;
}

inline std::vector<char> arcs_where(const Network& net, const std::function<bool(const RoadArc&)>& pred) {
  std::vector<char> ok(net.arc_count(), 0);
  for (std::size_t a = 0; a < net.arc_count(); ++a) ok[a] = pred(net.arc(a));
  return ok;
}

// Shortest time from s to every node by listing all simple paths.
inline std::vector<double> path_enumeration_distances(const Network& net, std::size_t s, const std::vector<char>& ok) {
  std::vector<double> best(net.node_count(), kInf);
  std::vector<char> on(net.node_count(), 0);
  std::function<void(std::size_t, double)> go = [&](std::size_t u, double t) {
    best[u] = std::min(best[u], t);
    for (std::size_t a = 0; a < net.arc_count(); ++a) {
      if (!ok[a] || net.tail(a) != u || on[net.head(a)]) continue;
      on[net.head(a)] = 1;
      go(net.head(a), t + net.arc(a).travel_time);
      on[net.head(a)] = 0;
    }
  };
  on[s] = 1;
  go(s, 0.0);
  return best;
}

// Number of connected components of the undirected graph, skipping `removed`.
inline std::size_t undirected_components(const Network& net, std::optional<std::size_t> removed = std::nullopt) {
  const std::size_t n = net.node_count();
  std::vector<std::size_t> parent(n);
  for (std::size_t v = 0; v < n; ++v) parent[v] = v;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    const std::size_t u = net.tail(a), v = net.head(a);
    if (removed && (u == *removed || v == *removed)) continue;
    parent[find(u)] = find(v);
  }
  std::set<std::size_t> roots;
  for (std::size_t v = 0; v < n; ++v)
    if (!removed || v != *removed) roots.insert(find(v));
  return roots.size();
}

inline std::set<std::string> brute_force_articulation_points(const Network& net) {
  std::set<std::string> out;
  const std::size_t base = undirected_components(net);
  for (std::size_t v = 0; v < net.node_count(); ++v)
    if (undirected_components(net, v) > base) out.insert(net.node(v).id);
  return out;
}

// Vulnerable arcs whose removal from the full network leaves some origin
// with no route to any destination.
inline std::set<std::string> brute_force_critical_arcs(const Network& net) {
  std::set<std::string> out;
  for (std::size_t cut = 0; cut < net.arc_count(); ++cut) {
    if (!net.arc(cut).vulnerable) continue;
    std::vector<char> ok(net.arc_count(), 1);
    ok[cut] = 0;
    const Matrix d = floyd_warshall(net, ok);
    for (std::size_t k : net.origins()) {
      bool any = false;
      for (std::size_t g : net.destinations()) any |= std::isfinite(d[k][g]);
      if (!any) {
        out.insert(net.arc(cut).id);
        break;
      }
    }
  }
  return out;
}

struct ReferenceEwtt {
  double ewtt = 0.0;
  bool disconnecting = false;
};

// Sum over every reachable OD pair of w^k times the increase in shortest
// time when the arc is removed; pairs left with no route are flagged.
inline std::map<std::string, ReferenceEwtt> brute_force_ewtt(const Network& net) {
  std::map<std::string, ReferenceEwtt> out;
  const std::vector<char> all(net.arc_count(), 1);
  const Matrix base = floyd_warshall(net, all);
  const auto critical = brute_force_critical_arcs(net);
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    if (!net.arc(a).vulnerable || critical.count(net.arc(a).id)) continue;
    std::vector<char> ok = all;
    ok[a] = 0;
    const Matrix without = floyd_warshall(net, ok);
    ReferenceEwtt r;
    for (std::size_t k : net.origins())
      for (std::size_t g : net.destinations()) {
        if (!std::isfinite(base[k][g])) continue;
        if (!std::isfinite(without[k][g])) {
          r.disconnecting = true;
          continue;
        }
        r.ewtt += net.node(k).weight * (without[k][g] - base[k][g]);
      }
    out[net.arc(a).id] = r;
  }
  return out;
}

struct ReferenceResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = kInf;
  std::vector<std::string> upgrades;  // one optimal upgrade set (units used)
};

struct ReferenceOptions {
  bool segment_coupling = false;
  std::set<std::string> must_upgrade;  // arc ids whose unit must be bought
  std::set<std::string> forbidden;     // arc ids whose unit must not be bought
  bool classify = true;                // apply the connectivity status rules first
};

inline std::int64_t cents(double dollars) { return std::llround(dollars * 100.0); }

// Minimum weighted time over every pair (affordable unit subset, assignment).
inline ReferenceResult reference_optimum(const ProblemInstance& inst, const ReferenceOptions& opt = {}) {
  const Network& net = inst.network;
  // Upgrade units: each vulnerable arc, or each vulnerable segment.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t a = 0; a < net.arc_count(); ++a)
    if (net.arc(a).vulnerable) groups[opt.segment_coupling ? net.arc(a).segment_id : net.arc(a).id].push_back(a);
  std::vector<std::vector<std::size_t>> unit_arcs;
  std::vector<std::int64_t> unit_cost;
  for (auto& [key, arcs] : groups) {
    std::int64_t c = 0;
    for (std::size_t a : arcs) c = std::max(c, cents(net.arc(a).mitigation_cost));
    unit_arcs.push_back(arcs);
    unit_cost.push_back(c);
  }
  const std::int64_t budget = cents(inst.budget);
  const std::size_t units = unit_arcs.size();

  auto reaches_any = [&](const Matrix& d, std::size_t k) {
    for (std::size_t g : net.destinations())
      if (std::isfinite(d[k][g])) return true;
    return false;
  };
  ReferenceResult res;
  if (opt.classify) {
    const Matrix full = floyd_warshall(net, std::vector<char>(net.arc_count(), 1));
    std::vector<char> cheap(net.arc_count(), 1);
    for (std::size_t u = 0; u < units; ++u)
      for (std::size_t a : unit_arcs[u]) cheap[a] = unit_cost[u] <= budget;
    const Matrix affordable = floyd_warshall(net, cheap);
    bool cut = false;
    for (std::size_t k : net.origins()) {
      if (!reaches_any(full, k)) return res;  // Infeasible
      cut |= !reaches_any(affordable, k);
    }
    if (cut) {
      res.status = SolveStatus::BudgetDisconnected;
      return res;
    }
  }

  const auto& origins = net.origins();
  const auto& dests = net.destinations();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << units); ++mask) {
    std::int64_t cost = 0;
    bool ok_mask = true;
    std::vector<char> ok(net.arc_count(), 1);
    for (std::size_t u = 0; u < units; ++u) {
      const bool on = mask >> u & 1;
      if (on) cost += unit_cost[u];
      for (std::size_t a : unit_arcs[u]) {
        ok[a] = on;
        if (on && opt.forbidden.count(net.arc(a).id)) ok_mask = false;
        if (!on && opt.must_upgrade.count(net.arc(a).id)) ok_mask = false;
      }
    }
    if (!ok_mask || cost > budget) continue;
    const Matrix d = floyd_warshall(net, ok);
    // Exhaustive assignment.
    std::vector<double> load(dests.size(), 0.0);
    double best_here = kInf;
    std::function<void(std::size_t, double)> assign = [&](std::size_t r, double acc) {
      if (r == origins.size()) {
        best_here = std::min(best_here, acc);
        return;
      }
      const std::size_t k = origins[r];
      for (std::size_t g = 0; g < dests.size(); ++g) {
        const double t = d[k][dests[g]];
        if (!std::isfinite(t)) continue;
        const double h = net.node(k).residents;
        if (load[g] + h > net.node(dests[g]).capacity + 1e-9) continue;
        load[g] += h;
        assign(r + 1, acc + net.node(k).weight * t);
        load[g] -= h;
      }
    };
    assign(0, 0.0);
    if (best_here < res.objective - 1e-12) {
      res.objective = best_here;
      res.status = SolveStatus::Optimal;
      res.upgrades.clear();
      for (std::size_t u = 0; u < units; ++u)
        if (mask >> u & 1)
          for (std::size_t a : unit_arcs[u]) res.upgrades.push_back(net.arc(a).id);
      std::sort(res.upgrades.begin(), res.upgrades.end());
    }
  }
  return res;
}

// Exhaustive GAP: minimum total cost with every job placed within capacity.
inline std::optional<double> brute_force_gap(const GapInstance& g) {
  const std::size_t jobs = g.job_size.size(), agents = g.agent_capacity.size();
  std::vector<double> load(agents, 0.0);
  double best = kInf;
  std::function<void(std::size_t, double)> go = [&](std::size_t j, double acc) {
    if (j == jobs) {
      best = std::min(best, acc);
      return;
    }
    for (std::size_t a = 0; a < agents; ++a) {
      if (!std::isfinite(g.cost[j][a]) || load[a] + g.job_size[j] > g.agent_capacity[a] + 1e-9) continue;
      load[a] += g.job_size[j];
      go(j + 1, acc + g.cost[j][a]);
      load[a] -= g.job_size[j];
    }
  };
  go(0, 0.0);
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

}  // namespace rnfmp::testing
