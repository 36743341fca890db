#pragma once

// Greedy warm start. Origins are served in descending population; each takes
// the nearest destination it can reach on the flooded network with enough
// residual capacity, and otherwise the nearest one on the fully upgraded
// network, buying whatever vulnerable arcs that route needs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rnfmp/instance.hpp"
#include "rnfmp/network.hpp"
#include "rnfmp/solution.hpp"

namespace rnfmp {

struct DistanceEntry {
  NodeIndex destination = kNone;
  double distance = kInfinity;
};

struct DistanceVectors {
  std::vector<DistanceEntry> d;        // fully upgraded network, every destination
  std::vector<DistanceEntry> d_prime;  // flooded network, reachable destinations only
};

namespace detail {

inline void sort_entries(std::vector<DistanceEntry>& v) {
  std::stable_sort(v.begin(), v.end(), [](const DistanceEntry& a, const DistanceEntry& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.destination < b.destination;
  });
}

}  // namespace detail

inline DistanceVectors build_distance_vectors(const Network& net, NodeIndex k,
                                              const ShortestPathTree& full,
                                              const ShortestPathTree& flooded) {
  if (net.node(k).kind != NodeKind::Origin) throw Error("node " + net.node(k).id + " is not an origin");
  DistanceVectors dv;
  for (NodeIndex g : net.destinations()) {
    dv.d.push_back({g, full.dist[g]});
    if (flooded.reachable(g)) dv.d_prime.push_back({g, flooded.dist[g]});
  }
  detail::sort_entries(dv.d);
  detail::sort_entries(dv.d_prime);
  return dv;
}

inline DistanceVectors build_distance_vectors(const ProblemInstance& inst, std::string_view origin) {
  const Network& net = inst.network;
  const NodeIndex k = net.node_index(origin);
  auto full = shortest_path_tree(net, k, ArcFilter::all().admissible(net));
  auto flooded = shortest_path_tree(net, k, ArcFilter::non_vulnerable_only().admissible(net));
  return build_distance_vectors(net, k, full, flooded);
}

struct GreedySolution {
  std::map<std::string, std::string> assignment;
  std::map<std::string, std::vector<std::string>> paths;
  std::vector<std::string> upgrades;  // sorted arc ids
  double objective = 0.0;
  double upgrade_cost = 0.0;
  bool feasible = false;
  std::map<std::string, double> residual_capacities;
  std::vector<std::string> unplaced;  // origins with no admissible destination
  double budget_shortfall = 0.0;      // dollars above B, when over budget
};

inline GreedySolution greedy_initial(const ProblemInstance& inst) {
  const Network& net = inst.network;
  const UpgradeUnits units = upgrade_units(net, inst.spec.segment_coupling);
  const auto full_ok = ArcFilter::all().admissible(net);
  const auto flood_ok = ArcFilter::non_vulnerable_only().admissible(net);

  std::vector<double> residual(net.node_count(), 0.0);
  for (NodeIndex g : net.destinations()) residual[g] = net.node(g).capacity;

  std::vector<NodeIndex> order = net.origins();
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    return net.node(a).residents > net.node(b).residents;
  });

  GreedySolution gs;
  std::set<std::size_t> bought;
  std::int64_t spent = 0;
  std::map<NodeIndex, double> path_time;
  for (NodeIndex k : order) {
    const RoadNode& origin = net.node(k);
    auto full = shortest_path_tree(net, k, full_ok);
    auto flooded = shortest_path_tree(net, k, flood_ok);
    DistanceVectors dv = build_distance_vectors(net, k, full, flooded);
    const ShortestPathTree* tree = nullptr;
    NodeIndex chosen = kNone;
    auto fits = [&](NodeIndex g) { return residual[g] + 1e-9 * std::max(1.0, residual[g]) >= origin.residents; };
    for (const auto& e : dv.d_prime)
      if (fits(e.destination)) {
        chosen = e.destination;
        tree = &flooded;
        break;
      }
    if (chosen == kNone) {
      for (const auto& e : dv.d)
        if (std::isfinite(e.distance) && fits(e.destination)) {
          chosen = e.destination;
          tree = &full;
          break;
        }
    }
    if (chosen == kNone) {
      gs.unplaced.push_back(origin.id);
      continue;
    }
    residual[chosen] -= origin.residents;
    std::vector<std::string> ids;
    for (ArcIndex a : tree->path_to(net, chosen)) {
      ids.push_back(net.arc(a).id);
      if (net.arc(a).vulnerable && bought.insert(units.of_arc[a]).second)
        spent += units.units[units.of_arc[a]].cost_cents;
    }
    gs.assignment[origin.id] = net.node(chosen).id;
    gs.paths[origin.id] = std::move(ids);
    path_time[k] = tree->dist[chosen];
  }

  // Summed in origin index order, matching validate_solution.
  for (NodeIndex k : net.origins())
    if (auto it = path_time.find(k); it != path_time.end()) gs.objective += net.node(k).weight * it->second;
  for (std::size_t u : bought) {
    gs.upgrade_cost += units.units[u].cost;
    for (ArcIndex a : units.units[u].arcs) gs.upgrades.push_back(net.arc(a).id);
  }
  std::sort(gs.upgrades.begin(), gs.upgrades.end());
  for (NodeIndex g : net.destinations()) gs.residual_capacities[net.node(g).id] = residual[g];
  const std::int64_t budget = to_cents(inst.budget);
  if (spent > budget) gs.budget_shortfall = static_cast<double>(spent - budget) / 100.0;
  gs.feasible = gs.unplaced.empty() && spent <= budget;
  return gs;
}

inline Solution to_solution(const GreedySolution& gs) {
  Solution s;
  s.upgrades = gs.upgrades;
  s.assignment = gs.assignment;
  s.paths = gs.paths;
  s.heuristic = true;
  if (gs.feasible) {
    s.status = SolveStatus::Feasible;
    s.objective = gs.objective;
  } else {
    s.status = SolveStatus::Infeasible;
  }
  return s;
}

}  // namespace rnfmp
