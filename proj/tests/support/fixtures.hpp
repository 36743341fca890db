#pragma once

#include <string>

#include "rnfmp/instance_io.hpp"
#include "support/generators.hpp"

namespace rnfmp::testing {

inline std::string data_path(const std::string& name) { return std::string(RNFMP_DATA_DIR) + "/" + name; }

// The five-node fixture: o1, o2 origins; t1 transshipment; d1 (H=12), d2 (H=20).
inline ProblemInstance f1(double budget = 9.0) {
  ProblemInstance inst = load_instance(data_path("f1_instance.json"), InstanceSpec{});
  inst.budget = budget;
  inst.spec.budget_fraction = budget / inst.b_hat;
  return inst;
}

inline Network with_capacity(const Network& net, const std::string& node, double capacity) {
  std::vector<RoadNode> nodes(net.nodes().begin(), net.nodes().end());
  for (auto& n : nodes)
    if (n.id == node) n.capacity = capacity;
  return Network(std::move(nodes), std::vector<RoadArc>(net.arcs().begin(), net.arcs().end()));
}

inline ProblemInstance f1_with_capacity(const std::string& node, double capacity, double budget) {
  ProblemInstance inst = f1(budget);
  inst.network = with_capacity(inst.network, node, capacity);
  return inst;
}

inline RoadNode node(const std::string& id, NodeKind kind, double residents = 0.0, double capacity = kInfinity) {
  RoadNode n;
  n.id = id;
  n.kind = kind;
  n.residents = kind == NodeKind::Origin ? residents : 0.0;
  n.weight = n.residents;
  n.capacity = kind == NodeKind::Destination ? capacity : kInfinity;
  n.facility = kind == NodeKind::Destination;
  return n;
}

inline RoadArc arc(const std::string& id, const std::string& from, const std::string& to, double t,
                   bool vulnerable = false, double cost = 0.0, const std::string& segment = {}) {
  RoadArc a;
  a.id = id;
  a.tail = from;
  a.head = to;
  a.travel_time = t;
  a.vulnerable = vulnerable;
  a.mitigation_cost = vulnerable ? cost : 0.0;
  a.segment_id = segment;
  return a;
}

}  // namespace rnfmp::testing
