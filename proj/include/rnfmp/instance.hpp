#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rnfmp/network.hpp"

namespace rnfmp {

enum class CapacityPolicy { Identical, BedProportional };
enum class WeightPolicy { WEqualsH, Uniform };

inline std::string_view to_string(CapacityPolicy p) {
  return p == CapacityPolicy::Identical ? "identical" : "bed_proportional";
}
inline std::string_view to_string(WeightPolicy p) {
  return p == WeightPolicy::WEqualsH ? "w_equals_h" : "uniform";
}
inline CapacityPolicy capacity_policy_from_string(std::string_view s) {
  if (s == "identical" || s == "Identical") return CapacityPolicy::Identical;
  if (s == "bed_proportional" || s == "BedProportional" || s == "different")
    return CapacityPolicy::BedProportional;
  throw Error("unknown capacity policy: " + std::string(s));
}
inline WeightPolicy weight_policy_from_string(std::string_view s) {
  if (s == "w_equals_h" || s == "WEqualsH") return WeightPolicy::WEqualsH;
  if (s == "uniform" || s == "Uniform") return WeightPolicy::Uniform;
  throw Error("unknown weight policy: " + std::string(s));
}

struct InstanceSpec {
  int p = 0;  // population-center threshold
  double alpha = 0.15;
  CapacityPolicy capacity_policy = CapacityPolicy::Identical;
  double budget_fraction = 1.0;
  WeightPolicy weight_policy = WeightPolicy::WEqualsH;
  double unit_cost = 32000.0;  // dollars per mile per lane
  bool segment_coupling = false;
  // Restrict destinations to these facility ids; empty means every facility.
  std::vector<std::string> facility_subset;

  void validate() const {
    if (p < 0) throw Error("population threshold p must be nonnegative");
    if (!(alpha >= 0)) throw Error("alpha must be nonnegative");
    if (!(budget_fraction >= 0 && budget_fraction <= 1))
      throw Error("budget_fraction must lie in [0, 1]");
    if (!(unit_cost >= 0)) throw Error("unit_cost must be nonnegative");
  }
};

struct Provenance {
  std::string source;
  std::vector<std::string> log;
};

struct ProblemInstance {
  Network network;
  double budget = 0.0;  // dollars
  double b_hat = 0.0;   // cost of upgrading every vulnerable unit
  InstanceSpec spec;
  Provenance provenance;
};

inline std::int64_t to_cents(double dollars) { return std::llround(dollars * 100.0); }

// The object a single y decision buys: one vulnerable arc, or every
// vulnerable arc of a road segment when segment coupling is on.
struct UpgradeUnit {
  std::string id;
  std::vector<ArcIndex> arcs;
  double cost = 0.0;
  std::int64_t cost_cents = 0;
};

struct UpgradeUnits {
  std::vector<UpgradeUnit> units;   // sorted by id
  std::vector<std::size_t> of_arc;  // unit index per arc, kNone when not vulnerable

  std::size_t size() const { return units.size(); }
};

inline UpgradeUnits upgrade_units(const Network& net, bool segment_coupling) {
  UpgradeUnits out;
  out.of_arc.assign(net.arc_count(), kNone);
  std::map<std::string, UpgradeUnit> by_id;
  for (ArcIndex a = 0; a < net.arc_count(); ++a) {
    const RoadArc& arc = net.arc(a);
    if (!arc.vulnerable) continue;
    const std::string& key = segment_coupling ? arc.segment_id : arc.id;
    UpgradeUnit& u = by_id[key];
    u.id = key;
    u.arcs.push_back(a);
    // A coupled segment is charged once, at its most expensive direction.
    u.cost = std::max(u.cost, arc.mitigation_cost);
  }
  for (auto& [key, unit] : by_id) {
    unit.cost_cents = to_cents(unit.cost);
    for (ArcIndex a : unit.arcs) out.of_arc[a] = out.units.size();
    out.units.push_back(std::move(unit));
  }
  return out;
}

inline double total_upgrade_cost(const Network& net, bool segment_coupling) {
  double total = 0.0;
  for (const auto& u : upgrade_units(net, segment_coupling).units) total += u.cost;
  return total;
}

}  // namespace rnfmp
