#pragma once

// A generalized assignment problem written as a flood-mitigation instance:
// one origin per job, one destination per agent, a direct flood-free arc per
// feasible (job, agent) pair, no vulnerable arcs and a zero budget. With
// unit weights the optimal objective is the GAP optimum.

#include <string>
#include <vector>

#include "rnfmp/instance.hpp"
#include "rnfmp/network.hpp"

namespace rnfmp {

struct GapInstance {
  std::vector<double> job_size;
  std::vector<double> agent_capacity;
  std::vector<std::vector<double>> cost;  // [job][agent]; inf = forbidden pair
};

inline std::string gap_job_id(std::size_t j) { return "j" + std::to_string(j); }
inline std::string gap_agent_id(std::size_t g) { return "g" + std::to_string(g); }

inline ProblemInstance gap_to_rnfmp(const GapInstance& gap) {
  if (gap.cost.size() != gap.job_size.size()) throw Error("GAP cost matrix has the wrong number of rows");
  std::vector<RoadNode> nodes;
  std::vector<RoadArc> arcs;
  for (std::size_t j = 0; j < gap.job_size.size(); ++j) {
    RoadNode n;
    n.id = gap_job_id(j);
    n.kind = NodeKind::Origin;
    n.residents = gap.job_size[j];
    n.weight = 1.0;
    nodes.push_back(std::move(n));
  }
  for (std::size_t g = 0; g < gap.agent_capacity.size(); ++g) {
    RoadNode n;
    n.id = gap_agent_id(g);
    n.kind = NodeKind::Destination;
    n.capacity = gap.agent_capacity[g];
    n.facility = true;
    nodes.push_back(std::move(n));
  }
  for (std::size_t j = 0; j < gap.cost.size(); ++j) {
    if (gap.cost[j].size() != gap.agent_capacity.size()) throw Error("GAP cost matrix has the wrong number of columns");
    for (std::size_t g = 0; g < gap.cost[j].size(); ++g) {
      const double c = gap.cost[j][g];
      if (std::isinf(c)) continue;
      if (!(c >= 0)) throw Error("GAP costs must be nonnegative");
      RoadArc a;
      a.id = gap_job_id(j) + "-" + gap_agent_id(g);
      a.tail = gap_job_id(j);
      a.head = gap_agent_id(g);
      a.travel_time = c;
      arcs.push_back(std::move(a));
    }
  }
  ProblemInstance inst;
  inst.network = Network(std::move(nodes), std::move(arcs));
  inst.budget = 0.0;
  inst.b_hat = 0.0;
  inst.spec.budget_fraction = 0.0;
  inst.spec.weight_policy = WeightPolicy::Uniform;
  inst.provenance.source = "gap";
  return inst;
}

// Inverse direction with upgrades fixed: shortest-path times under the given
// admissible arcs become assignment costs, weighted per origin.
inline GapInstance rnfmp_to_gap(const Network& net, std::span<const char> admissible) {
  GapInstance gap;
  for (NodeIndex g : net.destinations()) gap.agent_capacity.push_back(net.node(g).capacity);
  for (NodeIndex k : net.origins()) {
    gap.job_size.push_back(net.node(k).residents);
    auto tree = shortest_path_tree(net, k, admissible);
    std::vector<double> row;
    for (NodeIndex g : net.destinations()) row.push_back(net.node(k).weight * tree.dist[g]);
    gap.cost.push_back(std::move(row));
  }
  return gap;
}

}  // namespace rnfmp
