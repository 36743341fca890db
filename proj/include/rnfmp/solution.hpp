#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnfmp/instance.hpp"
#include "rnfmp/network.hpp"

namespace rnfmp {

enum class SolveStatus { Optimal, Feasible, Infeasible, BudgetDisconnected, TimeLimit };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::BudgetDisconnected: return "BudgetDisconnected";
    case SolveStatus::TimeLimit: return "TimeLimit";
  }
  return "Infeasible";
}

inline SolveStatus solve_status_from_string(std::string_view s) {
  for (SolveStatus st : {SolveStatus::Optimal, SolveStatus::Feasible, SolveStatus::Infeasible,
                         SolveStatus::BudgetDisconnected, SolveStatus::TimeLimit})
    if (to_string(st) == s) return st;
  throw Error("unknown solve status: " + std::string(s));
}

inline bool has_solution(SolveStatus s) {
  return s == SolveStatus::Optimal || s == SolveStatus::Feasible;
}

struct SolveStats {
  long long nodes_explored = 0;
  double wall_seconds = 0.0;
};

struct Solution {
  std::vector<std::string> upgrades;  // vulnerable arc ids with y = 1, sorted
  std::map<std::string, std::string> assignment;          // origin -> destination
  std::map<std::string, std::vector<std::string>> paths;  // origin -> arc ids
  double objective = kInfinity;
  double best_bound = -kInfinity;
  double gap = kInfinity;
  SolveStatus status = SolveStatus::Infeasible;
  SolveStats stats;
  bool heuristic = false;
};

struct Violation {
  int tag = 0;  // constraint family tag, as in the LP row names
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  double recomputed_objective = 0.0;

  bool ok() const { return violations.empty(); }
  bool has(int tag) const {
    for (const auto& v : violations)
      if (v.tag == tag) return true;
    return false;
  }
};

// Feasibility check of a solution against the instance, constraint by
// constraint:
//   (1) reported objective, (2)-(4) path shape, (5) budget,
//   (6) flooded arcs only when upgraded, (7) no unused upgrades,
//   (8) capacities, (10) only vulnerable arcs upgraded.
inline ValidationReport validate_solution(const ProblemInstance& inst, const Solution& sol) {
  const Network& net = inst.network;
  ValidationReport rep;
  auto add = [&](int tag, std::string msg) { rep.violations.push_back({tag, std::move(msg)}); };

  const UpgradeUnits units = upgrade_units(net, inst.spec.segment_coupling);
  std::set<ArcIndex> upgraded;
  std::set<std::size_t> upgraded_units;
  for (const auto& id : sol.upgrades) {
    auto a = net.find_arc(id);
    if (!a) {
      add(10, "upgrade of unknown arc " + id);
      continue;
    }
    if (!net.arc(*a).vulnerable) {
      add(10, "upgrade of non-vulnerable arc " + id);
      continue;
    }
    upgraded.insert(*a);
    upgraded_units.insert(units.of_arc[*a]);
  }
  if (inst.spec.segment_coupling) {
    for (std::size_t u : upgraded_units)
      for (ArcIndex a : units.units[u].arcs) upgraded.insert(a);
  }
  std::int64_t spent = 0;
  for (std::size_t u : upgraded_units) spent += units.units[u].cost_cents;
  if (spent > to_cents(inst.budget)) add(5, "upgrade cost exceeds budget");

  std::map<NodeIndex, double> load;
  std::set<std::size_t> used_units;
  double objective = 0.0;
  for (NodeIndex k : net.origins()) {
    const RoadNode& origin = net.node(k);
    auto as = sol.assignment.find(origin.id);
    if (as == sol.assignment.end()) {
      add(2, "origin " + origin.id + " is not assigned");
      continue;
    }
    auto dest = net.find_node(as->second);
    if (!dest || net.node(*dest).kind != NodeKind::Destination) {
      add(3, "origin " + origin.id + " assigned to non-destination " + as->second);
      continue;
    }
    auto pit = sol.paths.find(origin.id);
    if (pit == sol.paths.end()) {
      add(2, "origin " + origin.id + " has no path");
      continue;
    }
    NodeIndex at = k;
    double t = 0.0;
    bool broken = false;
    for (const auto& arc_id : pit->second) {
      auto a = net.find_arc(arc_id);
      if (!a) {
        add(4, "path of " + origin.id + " uses unknown arc " + arc_id);
        broken = true;
        break;
      }
      if (net.tail(*a) != at) {
        add(4, "path of " + origin.id + " is not contiguous at arc " + arc_id);
        broken = true;
        break;
      }
      if (net.arc(*a).vulnerable) {
        if (!upgraded.count(*a)) add(6, "origin " + origin.id + " uses flooded arc " + arc_id + " without upgrade");
        used_units.insert(units.of_arc[*a]);
      }
      t += net.arc(*a).travel_time;
      at = net.head(*a);
    }
    if (broken) continue;
    if (at != *dest) {
      add(3, "path of " + origin.id + " does not end at its assigned destination");
      continue;
    }
    objective += origin.weight * t;
    load[*dest] += origin.residents;
  }
  for (std::size_t u : upgraded_units)
    if (!used_units.count(u)) add(7, "upgraded unit " + units.units[u].id + " is not used by any origin");
  for (auto [d, l] : load)
    if (l > net.node(d).capacity + 1e-9 * std::max(1.0, net.node(d).capacity))
      add(8, "destination " + net.node(d).id + " over capacity");
  rep.recomputed_objective = objective;
  if (has_solution(sol.status) &&
      std::abs(objective - sol.objective) > 1e-9 * std::max(1.0, std::abs(objective)))
    add(1, "reported objective differs from recomputed objective");
  return rep;
}

inline nlohmann::ordered_json solution_to_json(const Solution& sol, bool include_timing = false) {
  nlohmann::ordered_json j;
  j["status"] = std::string(to_string(sol.status));
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  j["objective"] = num(sol.objective);
  j["bound"] = num(sol.best_bound);
  j["gap"] = num(sol.gap);
  j["heuristic"] = sol.heuristic;
  j["upgrades"] = sol.upgrades;
  j["assignment"] = sol.assignment;
  j["paths"] = sol.paths;
  nlohmann::ordered_json stats;
  stats["nodes_explored"] = sol.stats.nodes_explored;
  if (include_timing) stats["wall_seconds"] = sol.stats.wall_seconds;
  j["stats"] = std::move(stats);
  return j;
}

template <class Json>
Solution solution_from_json(const Json& j) {
  Solution s;
  s.status = solve_status_from_string(j.at("status").template get<std::string>());
  auto num = [&](const char* key, double fallback) {
    return j.contains(key) && !j[key].is_null() ? j[key].template get<double>() : fallback;
  };
  s.objective = num("objective", kInfinity);
  s.best_bound = num("bound", -kInfinity);
  s.gap = num("gap", kInfinity);
  s.heuristic = j.value("heuristic", false);
  s.upgrades = j.value("upgrades", std::vector<std::string>{});
  s.assignment = j.value("assignment", std::map<std::string, std::string>{});
  s.paths = j.value("paths", std::map<std::string, std::vector<std::string>>{});
  if (j.contains("stats")) s.stats.nodes_explored = j["stats"].value("nodes_explored", 0LL);
  return s;
}

}  // namespace rnfmp
