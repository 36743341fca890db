#pragma once

// Instance reductions that keep at least one optimal solution intact:
//   - origins whose every exit is vulnerable: a single exit is forced into
//     the upgrade set, several exits yield a "buy at least one" cut;
//   - per-origin arc masks from shortest-path bounds;
//   - per-origin arc masks for destination-free pockets behind an
//     articulation point.

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnfmp/instance.hpp"
#include "rnfmp/network.hpp"
#include "rnfmp/prune.hpp"

namespace rnfmp {

// Shortest-path distances from every origin, on the flooded network (sp_n)
// and on the fully upgraded network (sp_f). Rows follow net.origins().
struct SpTables {
  std::vector<std::vector<double>> sp_n;
  std::vector<std::vector<double>> sp_f;
  std::vector<double> ub;             // max over destinations of sp_n; inf if one is unreachable
  std::vector<char> reaches_all_n;    // every destination reachable on the flooded network
};

inline SpTables compute_sp_tables(const Network& net) {
  SpTables t;
  const auto flooded = ArcFilter::non_vulnerable_only().admissible(net);
  const auto full = ArcFilter::all().admissible(net);
  for (NodeIndex k : net.origins()) {
    auto tn = shortest_path_tree(net, k, flooded);
    auto tf = shortest_path_tree(net, k, full);
    double ub = 0.0;
    bool all = true;
    for (NodeIndex g : net.destinations()) {
      if (!tn.reachable(g)) all = false;
      ub = std::max(ub, tn.dist[g]);
    }
    if (!all) ub = kInfinity;
    t.sp_n.push_back(std::move(tn.dist));
    t.sp_f.push_back(std::move(tf.dist));
    t.ub.push_back(ub);
    t.reaches_all_n.push_back(all ? 1 : 0);
  }
  return t;
}

enum class MaskReason : std::uint8_t { None = 0, SpBound = 1, Pocket = 2 };

// Per-origin exclusion of flow variables x_ij^k. Rows follow net.origins().
class VariableMask {
 public:
  VariableMask() = default;
  VariableMask(std::size_t origins, std::size_t arcs)
      : reason_(origins, std::vector<std::uint8_t>(arcs, 0)) {}

  bool empty_shape() const { return reason_.empty(); }
  std::size_t origin_rows() const { return reason_.size(); }

  bool masked(std::size_t origin_row, ArcIndex a) const {
    return !reason_.empty() && reason_[origin_row][a] != 0;
  }
  MaskReason reason(std::size_t origin_row, ArcIndex a) const {
    return reason_.empty() ? MaskReason::None : static_cast<MaskReason>(reason_[origin_row][a]);
  }

  // Returns true when the entry is new.
  bool add(std::size_t origin_row, ArcIndex a, MaskReason why) {
    auto& r = reason_.at(origin_row).at(a);
    if (r != 0) return false;
    r = static_cast<std::uint8_t>(why);
    return true;
  }

  std::size_t count(MaskReason why) const {
    std::size_t n = 0;
    for (const auto& row : reason_)
      for (auto r : row) n += r == static_cast<std::uint8_t>(why);
    return n;
  }
  std::size_t size() const { return count(MaskReason::SpBound) + count(MaskReason::Pocket); }

  // Arc admissibility for one origin: `base` minus that origin's masked arcs.
  std::vector<char> restrict(std::size_t origin_row, std::span<const char> base) const {
    std::vector<char> ok(base.begin(), base.end());
    if (reason_.empty()) return ok;
    for (ArcIndex a = 0; a < ok.size(); ++a)
      if (reason_[origin_row][a]) ok[a] = 0;
    return ok;
  }

 private:
  std::vector<std::vector<std::uint8_t>> reason_;
};

struct ExitCut {
  std::string origin;
  std::vector<std::string> arcs;  // every outgoing arc, all vulnerable
};

struct FixedUpgrades {
  std::vector<std::string> forced_y;  // vulnerable arc ids fixed to 1
  double budget_delta = 0.0;
  double offset_delta = 0.0;          // weight * t of each forced exit
  std::vector<ExitCut> exit_vis;
  bool infeasible = false;
};

inline FixedUpgrades prop1_origin_exit(const ProblemInstance& inst) {
  const Network& net = inst.network;
  const UpgradeUnits units = upgrade_units(net, inst.spec.segment_coupling);
  FixedUpgrades f;
  std::set<std::size_t> forced_units;
  for (NodeIndex i : net.origins()) {
    std::vector<ArcIndex> exits;
    bool any_safe = false;
    for (ArcIndex a : net.out_arcs(i)) {
      if (net.head(a) == i) continue;
      exits.push_back(a);
      any_safe |= !net.arc(a).vulnerable;
    }
    if (exits.empty() || any_safe) continue;
    if (exits.size() == 1) {
      const ArcIndex a = exits[0];
      f.forced_y.push_back(net.arc(a).id);
      f.offset_delta += net.node(i).weight * net.arc(a).travel_time;
      if (forced_units.insert(units.of_arc[a]).second) f.budget_delta += units.units[units.of_arc[a]].cost;
    } else {
      ExitCut cut;
      cut.origin = net.node(i).id;
      for (ArcIndex a : exits) cut.arcs.push_back(net.arc(a).id);
      f.exit_vis.push_back(std::move(cut));
    }
  }
  std::sort(f.forced_y.begin(), f.forced_y.end());
  std::int64_t cents = 0;
  for (std::size_t u : forced_units) cents += units.units[u].cost_cents;
  f.infeasible = cents > to_cents(inst.budget);
  return f;
}

inline std::size_t prop2_sp_bound(const Network& net, const SpTables& sp, VariableMask& mask) {
  std::size_t added = 0;
  for (std::size_t row = 0; row < net.origins().size(); ++row) {
    // Zero-weight origins are indifferent to path length; leave them alone.
    if (!sp.reaches_all_n[row] || !(net.node(net.origins()[row]).weight > 0)) continue;
    const double ub = sp.ub[row];
    for (ArcIndex a = 0; a < net.arc_count(); ++a) {
      const double reach = sp.sp_f[row][net.tail(a)];
      if (!std::isfinite(reach) || reach + net.arc(a).travel_time > ub + kTolerance)
        added += mask.add(row, a, MaskReason::SpBound);
    }
  }
  return added;
}

inline VariableMask prop2_sp_bound(const ProblemInstance& inst) {
  const Network& net = inst.network;
  VariableMask mask(net.origins().size(), net.arc_count());
  prop2_sp_bound(net, compute_sp_tables(net), mask);
  return mask;
}

inline std::size_t prop3_component_mask(const Network& net, VariableMask& mask) {
  std::vector<std::size_t> row_of(net.node_count(), kNone);
  for (std::size_t r = 0; r < net.origins().size(); ++r) row_of[net.origins()[r]] = r;
  std::size_t added = 0;
  for (NodeIndex v : articulation_point_indices(net)) {
    for (const Component& c : components_without(net, v)) {
      bool has_dest = false;
      std::vector<char> inside(net.node_count(), 0);
      for (NodeIndex u : c.nodes) {
        inside[u] = 1;
        has_dest |= net.node(u).kind == NodeKind::Destination;
      }
      if (has_dest || c.arcs.empty()) continue;
      for (NodeIndex k : net.origins()) {
        if (inside[k]) continue;
        for (ArcIndex a : c.arcs) added += mask.add(row_of[k], a, MaskReason::Pocket);
      }
    }
  }
  return added;
}

inline VariableMask prop3_component_mask(const ProblemInstance& inst) {
  const Network& net = inst.network;
  VariableMask mask(net.origins().size(), net.arc_count());
  prop3_component_mask(net, mask);
  return mask;
}

struct Reductions {
  VariableMask mask;
  FixedUpgrades fixed;
  std::vector<TriangleVi> triangle_vis;
  std::size_t prop2_masked = 0;
  std::size_t prop3_masked = 0;
};

struct ReduceOptions {
  bool prop1 = true;
  bool prop2 = true;
  bool prop3 = true;
  bool triangle_vis = true;
};

// Fixings and masks for `inst`. An empty Reductions (all options off) leaves
// the instance untouched.
inline Reductions reduce_all(const ProblemInstance& inst, const ReduceOptions& opt = {}) {
  const Network& net = inst.network;
  Reductions r;
  r.mask = VariableMask(net.origins().size(), net.arc_count());
  if (opt.prop1) r.fixed = prop1_origin_exit(inst);
  if (opt.prop2) r.prop2_masked = prop2_sp_bound(net, compute_sp_tables(net), r.mask);
  if (opt.prop3) r.prop3_masked = prop3_component_mask(net, r.mask);
  if (opt.triangle_vis) r.triangle_vis = triangle_inequalities(net);
  // A forced exit must stay usable by its own origin.
  for (const auto& id : r.fixed.forced_y) {
    ArcIndex a = net.arc_index(id);
    const NodeIndex i = net.tail(a);
    for (std::size_t row = 0; row < net.origins().size(); ++row)
      if (net.origins()[row] == i && r.mask.masked(row, a)) r.fixed.infeasible = true;
  }
  return r;
}

inline nlohmann::ordered_json reductions_to_json(const ProblemInstance& inst, const Reductions& r) {
  nlohmann::ordered_json j;
  j["forced_y"] = r.fixed.forced_y;
  j["budget_delta"] = r.fixed.budget_delta;
  j["offset_delta"] = r.fixed.offset_delta;
  nlohmann::ordered_json cuts = nlohmann::ordered_json::array();
  for (const auto& c : r.fixed.exit_vis) cuts.push_back({{"origin", c.origin}, {"arcs", c.arcs}});
  j["exit_vis"] = std::move(cuts);
  j["infeasible"] = r.fixed.infeasible;
  j["masked_sp_bound"] = r.prop2_masked;
  j["masked_pocket"] = r.prop3_masked;
  j["triangle_vis"] = r.triangle_vis.size();
  j["remaining_variables"] = static_cast<long long>(inst.network.origins().size() * inst.network.arc_count()) -
                             static_cast<long long>(r.mask.size()) +
                             static_cast<long long>(inst.network.vulnerable_count()) -
                             static_cast<long long>(r.fixed.forced_y.size());
  return j;
}

}  // namespace rnfmp
