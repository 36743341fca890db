#pragma once

// Evaluation tools built on the solver: lower bound and extra travel time,
// budget sweeps, extra weighted travel time per vulnerable road, roads that
// keep origins connected, upgrade frequencies across batches, and scenario
// grids. CSV emitters use fixed headers and round-trip number formatting.

#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rnfmp/ingest.hpp"
#include "rnfmp/instance.hpp"
#include "rnfmp/model.hpp"
#include "rnfmp/network.hpp"
#include "rnfmp/pipeline.hpp"
#include "rnfmp/prune.hpp"
#include "rnfmp/reduce.hpp"
#include "rnfmp/solution.hpp"

namespace rnfmp {

inline std::string csv_number(double v) { return std::isfinite(v) ? format_number(v) : ""; }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct LowerBound {
  double lb = kInfinity;
  Solution solution;
};

inline ProblemInstance with_budget_fraction(const ProblemInstance& inst, double fraction) {
  ProblemInstance out = inst;
  out.spec.budget_fraction = fraction;
  out.budget = fraction * inst.b_hat;
  return out;
}

inline LowerBound lower_bound(const ProblemInstance& inst, const PipelineOptions& opt = {},
                              const PrunedNetwork* reuse = nullptr) {
  LowerBound r;
  r.solution = run_pipeline(with_budget_fraction(inst, 1.0), opt, reuse).solution;
  if (has_solution(r.solution.status)) r.lb = r.solution.objective;
  return r;
}

struct UpgradeFootprint {
  std::size_t roads = 0;  // distinct segments
  double miles = 0.0;     // once per segment
};

inline UpgradeFootprint upgrade_footprint(const Network& net, const std::vector<std::string>& upgrades) {
  UpgradeFootprint f;
  std::map<std::string, double> seg_miles;
  for (const auto& id : upgrades) {
    const RoadArc& a = net.arc(net.arc_index(id));
    double len = a.meta ? a.meta->length_miles : 0.0;
    auto [it, inserted] = seg_miles.emplace(a.segment_id, len);
    if (!inserted) it->second = std::max(it->second, len);
  }
  f.roads = seg_miles.size();
  for (auto& [seg, len] : seg_miles) f.miles += len;
  return f;
}

struct SweepRow {
  double budget_fraction = 0.0;
  double budget_dollars = 0.0;
  double objective = kInfinity;
  double ett = kInfinity;
  std::size_t upgraded_road_count = 0;
  double upgraded_miles = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<std::string> upgrades;
};

struct SweepResult {
  double lb = kInfinity;
  SolveStatus lb_status = SolveStatus::Infeasible;
  std::vector<SweepRow> rows;
};

inline SweepResult budget_sweep(const ProblemInstance& inst, const std::vector<double>& fractions,
                                const PipelineOptions& opt = {}) {
  if (!std::is_sorted(fractions.begin(), fractions.end())) throw Error("sweep fractions must be sorted ascending");
  std::optional<PrunedNetwork> pruned;
  if (opt.prune) pruned = prune_all(inst.network);
  const PrunedNetwork* reuse = pruned ? &*pruned : nullptr;
  SweepResult out;
  auto lb = lower_bound(inst, opt, reuse);
  out.lb = lb.lb;
  out.lb_status = lb.solution.status;
  for (double f : fractions) {
    ProblemInstance cell = with_budget_fraction(inst, f);
    Solution s = run_pipeline(cell, opt, reuse).solution;
    SweepRow row;
    row.budget_fraction = f;
    row.budget_dollars = cell.budget;
    row.status = s.status;
    if (has_solution(s.status) || s.status == SolveStatus::TimeLimit) {
      row.objective = s.objective;
      if (std::isfinite(s.objective) && std::isfinite(out.lb)) row.ett = s.objective - out.lb;
      auto fp = upgrade_footprint(inst.network, s.upgrades);
      row.upgraded_road_count = fp.roads;
      row.upgraded_miles = fp.miles;
      row.upgrades = s.upgrades;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline std::string sweep_csv(const SweepResult& r) {
  std::ostringstream o;
  o << "budget_fraction,budget,objective,ett,upgraded_roads,upgraded_miles,status\n";
  for (const auto& row : r.rows)
    o << csv_number(row.budget_fraction) << ',' << csv_number(row.budget_dollars) << ',' << csv_number(row.objective)
      << ',' << csv_number(row.ett) << ',' << row.upgraded_road_count << ',' << csv_number(row.upgraded_miles) << ','
      << to_string(row.status) << '\n';
  return o.str();
}

// Vulnerable arcs whose loss from the fully upgraded network strands some
// origin from every destination.
inline std::set<std::string> connectivity_critical(const ProblemInstance& inst) {
  const Network& net = inst.network;
  std::set<std::string> out;
  for (ArcIndex cut = 0; cut < net.arc_count(); ++cut) {
    if (!net.arc(cut).vulnerable) continue;
    // Reverse search from all destinations.
    std::vector<char> seen(net.node_count(), 0);
    std::vector<NodeIndex> stack;
    for (NodeIndex g : net.destinations()) {
      seen[g] = 1;
      stack.push_back(g);
    }
    while (!stack.empty()) {
      NodeIndex v = stack.back();
      stack.pop_back();
      for (ArcIndex a : net.in_arcs(v)) {
        if (a == cut || seen[net.tail(a)]) continue;
        seen[net.tail(a)] = 1;
        stack.push_back(net.tail(a));
      }
    }
    for (NodeIndex k : net.origins())
      if (!seen[k]) {
        out.insert(net.arc(cut).id);
        break;
      }
  }
  return out;
}

struct EwttRow {
  std::string id;  // arc id, or segment id for the rolled-up form
  std::string name;
  double ewtt = 0.0;
  double upgrading_cost = 0.0;
  std::size_t rank = 0;
  bool disconnecting = false;  // some OD pair has no alternative route
  std::size_t excluded_pairs = 0;
};

struct EwttOptions {
  // Only pair each origin with its destination in this solution instead of
  // with every destination. Not the default; offered for comparison.
  const Solution* assigned_pairs_only = nullptr;
};

namespace detail {

inline void rank_ewtt(std::vector<EwttRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const EwttRow& a, const EwttRow& b) {
    if (a.ewtt != b.ewtt) return a.ewtt > b.ewtt;
    return a.id < b.id;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
}

}  // namespace detail

inline std::vector<EwttRow> ewtt_ranking(const ProblemInstance& inst, const EwttOptions& opt = {}) {
  const Network& net = inst.network;
  const auto critical = connectivity_critical(inst);
  const auto full = ArcFilter::all().admissible(net);
  const auto& origins = net.origins();
  const auto& dests = net.destinations();

  std::vector<std::vector<char>> paired(origins.size(), std::vector<char>(dests.size(), 1));
  if (opt.assigned_pairs_only)
    for (std::size_t r = 0; r < origins.size(); ++r)
      for (std::size_t g = 0; g < dests.size(); ++g) {
        auto it = opt.assigned_pairs_only->assignment.find(net.node(origins[r]).id);
        paired[r][g] = it != opt.assigned_pairs_only->assignment.end() && it->second == net.node(dests[g]).id;
      }

  std::vector<ShortestPathTree> base;
  // Arcs on each pair's fully upgraded shortest route.
  std::vector<std::vector<std::vector<ArcIndex>>> route(origins.size());
  for (std::size_t r = 0; r < origins.size(); ++r) {
    base.push_back(shortest_path_tree(net, origins[r], full));
    for (NodeIndex g : dests) route[r].push_back(base.back().path_to(net, g));
  }

  std::vector<EwttRow> rows;
  for (ArcIndex a = 0; a < net.arc_count(); ++a) {
    const RoadArc& arc = net.arc(a);
    if (!arc.vulnerable || critical.count(arc.id)) continue;
    EwttRow row;
    row.id = arc.id;
    row.name = arc.meta ? arc.meta->name : "";
    row.upgrading_cost = arc.mitigation_cost;
    std::vector<char> without = full;
    without[a] = 0;
    for (std::size_t r = 0; r < origins.size(); ++r) {
      std::optional<ShortestPathTree> alt;
      for (std::size_t g = 0; g < dests.size(); ++g) {
        if (!paired[r][g] || !base[r].reachable(dests[g])) continue;
        const auto& p = route[r][g];
        if (std::find(p.begin(), p.end(), a) == p.end()) continue;
        if (!alt) alt = shortest_path_tree(net, origins[r], without);
        if (!alt->reachable(dests[g])) {
          row.disconnecting = true;
          ++row.excluded_pairs;
          continue;
        }
        row.ewtt += net.node(origins[r]).weight * (alt->dist[dests[g]] - base[r].dist[dests[g]]);
      }
    }
    row.ewtt = std::max(0.0, row.ewtt);
    rows.push_back(std::move(row));
  }
  detail::rank_ewtt(rows);
  return rows;
}

// Road-level roll-up: a segment's value is the sum over its directed arcs.
inline std::vector<EwttRow> ewtt_by_segment(const Network& net, const std::vector<EwttRow>& arc_rows) {
  std::map<std::string, EwttRow> by_seg;
  for (const auto& r : arc_rows) {
    const RoadArc& a = net.arc(net.arc_index(r.id));
    EwttRow& s = by_seg[a.segment_id];
    s.id = a.segment_id;
    if (s.name.empty()) s.name = r.name;
    s.ewtt += r.ewtt;
    s.upgrading_cost += r.upgrading_cost;
    s.disconnecting |= r.disconnecting;
    s.excluded_pairs += r.excluded_pairs;
  }
  std::vector<EwttRow> rows;
  for (auto& [id, r] : by_seg) rows.push_back(std::move(r));
  detail::rank_ewtt(rows);
  return rows;
}

inline std::string ewtt_csv(const std::vector<EwttRow>& rows) {
  std::ostringstream o;
  o << "rank,id,name,ewtt,upgrading_cost,disconnecting\n";
  for (const auto& r : rows)
    o << r.rank << ',' << csv_field(r.id) << ',' << csv_field(r.name) << ',' << csv_number(r.ewtt) << ','
      << csv_number(r.upgrading_cost) << ',' << (r.disconnecting ? "true" : "false") << '\n';
  return o.str();
}

struct FrequencyRow {
  std::string group;
  std::string id;
  std::size_t upgrade_count = 0;
  std::size_t instance_count = 0;
  double frequency = 0.0;
};

struct FrequencyOptions {
  const Network* roll_up_segments = nullptr;  // count by segment id when set
  std::vector<std::string> universe;          // ids to report even when never upgraded
};

// `batch` pairs a group key with a solution. Only solutions carrying an
// upgrade decision (Optimal or Feasible) count towards a group's size.
inline std::vector<FrequencyRow> upgrade_frequency(const std::vector<std::pair<std::string, Solution>>& batch,
                                                   const FrequencyOptions& opt = {}) {
  std::map<std::string, std::size_t> sizes;
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const auto& [group, sol] : batch) {
    if (!has_solution(sol.status)) continue;
    ++sizes[group];
    std::set<std::string> ids;
    for (const auto& a : sol.upgrades) {
      if (opt.roll_up_segments) ids.insert(opt.roll_up_segments->arc(opt.roll_up_segments->arc_index(a)).segment_id);
      else ids.insert(a);
    }
    for (const auto& id : ids) ++counts[group][id];
  }
  std::vector<FrequencyRow> rows;
  for (const auto& [group, n] : sizes) {
    auto& c = counts[group];
    for (const auto& id : opt.universe) c.emplace(id, 0);
    std::vector<FrequencyRow> g;
    for (const auto& [id, count] : c)
      g.push_back({group, id, count, n, static_cast<double>(count) / static_cast<double>(n)});
    std::stable_sort(g.begin(), g.end(), [](const FrequencyRow& a, const FrequencyRow& b) {
      if (a.frequency != b.frequency) return a.frequency > b.frequency;
      return a.id < b.id;
    });
    rows.insert(rows.end(), g.begin(), g.end());
  }
  return rows;
}

inline std::string frequency_csv(const std::vector<FrequencyRow>& rows) {
  std::ostringstream o;
  o << "group,id,upgrade_count,instance_count,frequency\n";
  for (const auto& r : rows)
    o << csv_field(r.group) << ',' << csv_field(r.id) << ',' << r.upgrade_count << ',' << r.instance_count << ','
      << csv_number(r.frequency) << '\n';
  return o.str();
}

struct GridAxes {
  std::vector<double> budget_fractions{1.0};
  std::vector<double> alphas{0.15};
  std::vector<int> ps{0};
  std::vector<CapacityPolicy> capacity_policies{CapacityPolicy::Identical};
  std::vector<std::vector<std::string>> facility_subsets{{}};  // empty = all facilities
};

struct GridRow {
  std::size_t instance = 0;
  int p = 0;
  std::size_t hcfs = 0;
  std::string hcf_ids;
  CapacityPolicy capacity = CapacityPolicy::Identical;
  double alpha = 0.0;
  double budget_fraction = 0.0;
  double budget = 0.0;
  double objective = kInfinity;
  double ett = kInfinity;
  std::size_t roads = 0;
  double miles = 0.0;
  std::string status;
  Solution solution;
};

// Cartesian product of the axes over one raw network. Cells that cannot be
// derived report the derivation error as their status.
inline std::vector<GridRow> scenario_grid(const Network& raw, const InstanceSpec& base, const GridAxes& axes,
                                          const PipelineOptions& opt = {}) {
  std::vector<GridRow> rows;
  std::size_t index = 0;
  for (int p : axes.ps)
    for (const auto& subset : axes.facility_subsets)
      for (CapacityPolicy cap : axes.capacity_policies)
        for (double alpha : axes.alphas) {
          InstanceSpec spec = base;
          spec.p = p;
          spec.facility_subset = subset;
          spec.capacity_policy = cap;
          spec.alpha = alpha;
          std::optional<ProblemInstance> inst;
          std::string error;
          try {
            inst = derive_instance(raw, spec, "grid");
          } catch (const Error& e) {
            error = e.what();
          }
          double lb = kInfinity;
          std::optional<PrunedNetwork> pruned;
          if (inst) {
            if (opt.prune) pruned = prune_all(inst->network);
            lb = lower_bound(*inst, opt, pruned ? &*pruned : nullptr).lb;
          }
          for (double f : axes.budget_fractions) {
            GridRow row;
            row.instance = ++index;
            row.p = p;
            row.capacity = cap;
            row.alpha = alpha;
            row.budget_fraction = f;
            if (!inst) {
              row.status = "Error: " + error;
              rows.push_back(std::move(row));
              continue;
            }
            row.hcfs = inst->network.destinations().size();
            for (NodeIndex g : inst->network.destinations())
              row.hcf_ids += (row.hcf_ids.empty() ? "" : " ") + inst->network.node(g).id;
            ProblemInstance cell = with_budget_fraction(*inst, f);
            row.budget = cell.budget;
            row.solution = run_pipeline(cell, opt, pruned ? &*pruned : nullptr).solution;
            row.status = std::string(to_string(row.solution.status));
            if (std::isfinite(row.solution.objective)) {
              row.objective = row.solution.objective;
              if (std::isfinite(lb)) row.ett = row.objective - lb;
              auto fp = upgrade_footprint(inst->network, row.solution.upgrades);
              row.roads = fp.roads;
              row.miles = fp.miles;
            }
            rows.push_back(std::move(row));
          }
        }
  return rows;
}

inline std::string grid_csv(const std::vector<GridRow>& rows) {
  std::ostringstream o;
  o << "instance,p,hcfs,hcf_ids,capacity,alpha,budget_fraction,budget,objective,ett,roads,miles,status\n";
  for (const auto& r : rows)
    o << r.instance << ',' << r.p << ',' << r.hcfs << ',' << csv_field(r.hcf_ids) << ',' << to_string(r.capacity)
      << ',' << csv_number(r.alpha) << ',' << csv_number(r.budget_fraction) << ',' << csv_number(r.budget) << ','
      << csv_number(r.objective) << ',' << csv_number(r.ett) << ',' << r.roads << ',' << csv_number(r.miles) << ','
      << csv_field(r.status) << '\n';
  return o.str();
}

struct GroupSummary {
  std::string key;
  std::size_t cells = 0;
  std::size_t solved = 0;
  double mean_objective = 0.0;
  double mean_ett = 0.0;
  double mean_roads = 0.0;
  double mean_miles = 0.0;
};

// Averages over solved cells, grouped by `key_of` (e.g. capacity policy,
// number of facilities, alpha).
inline std::vector<GroupSummary> group_summary(const std::vector<GridRow>& rows,
                                               const std::function<std::string(const GridRow&)>& key_of) {
  std::map<std::string, GroupSummary> g;
  for (const auto& r : rows) {
    GroupSummary& s = g[key_of(r)];
    s.key = key_of(r);
    ++s.cells;
    if (!std::isfinite(r.objective) || !std::isfinite(r.ett)) continue;
    ++s.solved;
    s.mean_objective += r.objective;
    s.mean_ett += r.ett;
    s.mean_roads += static_cast<double>(r.roads);
    s.mean_miles += r.miles;
  }
  std::vector<GroupSummary> out;
  for (auto& [k, s] : g) {
    if (s.solved) {
      const double n = static_cast<double>(s.solved);
      s.mean_objective /= n;
      s.mean_ett /= n;
      s.mean_roads /= n;
      s.mean_miles /= n;
    }
    out.push_back(s);
  }
  return out;
}

inline std::string group_summary_csv(const std::vector<GroupSummary>& rows) {
  std::ostringstream o;
  o << "group,cells,solved,mean_objective,mean_ett,mean_roads,mean_miles\n";
  for (const auto& r : rows)
    o << csv_field(r.key) << ',' << r.cells << ',' << r.solved << ',' << csv_number(r.mean_objective) << ','
      << csv_number(r.mean_ett) << ',' << csv_number(r.mean_roads) << ',' << csv_number(r.mean_miles) << '\n';
  return o.str();
}

struct EliminationRow {
  std::string label;
  std::optional<SizeCounts> counts;  // nullopt cells print as N/A
  bool nodes_arcs_apply = true;
};

struct EliminationTable {
  SizeCounts original;
  std::vector<EliminationRow> rows;
  long long total_variables_eliminated = 0;
};

// Per-technique and per-proposition eliminations, in the column layout
// technique, variables, %, nodes, %, arcs, %.
inline EliminationTable elimination_table(const PrunedNetwork& pruned, const Reductions* red) {
  EliminationTable t;
  t.original = pruned.stats.original;
  t.rows.push_back({"Original", pruned.stats.original, true});
  for (int k = 1; k <= 8; ++k)
    t.rows.push_back({"Technique " + std::to_string(k), pruned.stats.eliminated[k - 1], true});
  SizeCounts total;
  total.nodes = pruned.stats.original.nodes - pruned.stats.pruned.nodes;
  total.arcs = pruned.stats.original.arcs - pruned.stats.pruned.arcs;
  total.variables = pruned.stats.original.variables - pruned.stats.pruned.variables;
  if (red) {
    SizeCounts p1, p2, p3;
    p1.variables = static_cast<long long>(red->fixed.forced_y.size());
    p2.variables = static_cast<long long>(red->prop2_masked);
    p3.variables = static_cast<long long>(red->prop3_masked);
    t.rows.push_back({"Proposition 1", p1, false});
    t.rows.push_back({"Proposition 2", p2, false});
    t.rows.push_back({"Proposition 3", p3, false});
    total.variables += p1.variables + p2.variables + p3.variables;
  } else {
    for (int k = 1; k <= 3; ++k) t.rows.push_back({"Proposition " + std::to_string(k), std::nullopt, false});
  }
  t.rows.push_back({"All", total, true});
  t.total_variables_eliminated = total.variables;
  return t;
}

inline std::string elimination_csv(const EliminationTable& t) {
  std::ostringstream o;
  o << "technique,variables,variables_pct,nodes,nodes_pct,arcs,arcs_pct\n";
  auto pct = [](long long part, long long whole) {
    if (whole == 0) return std::string("0");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * static_cast<double>(part) / static_cast<double>(whole));
    return std::string(buf);
  };
  for (const auto& r : t.rows) {
    o << r.label << ',';
    if (!r.counts) {
      o << "N/A,N/A,N/A,N/A,N/A,N/A\n";
      continue;
    }
    const SizeCounts& c = *r.counts;
    o << c.variables << ',' << pct(c.variables, t.original.variables) << ',';
    if (r.nodes_arcs_apply)
      o << c.nodes << ',' << pct(c.nodes, t.original.nodes) << ',' << c.arcs << ',' << pct(c.arcs, t.original.arcs);
    else
      o << "N/A,N/A,N/A,N/A";
    o << '\n';
  }
  return o.str();
}

}  // namespace rnfmp
