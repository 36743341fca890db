#pragma once

// Command-line front end. Every subcommand takes a network or instance file,
// an optional JSON config and flag overrides (flags win over the config),
// and writes its artifacts under --out with fixed file names.
//
// Exit codes: 0 success, 2 infeasible / input error / oracle scale,
// 3 time limit reached.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rnfmp/analysis.hpp"
#include "rnfmp/ingest.hpp"
#include "rnfmp/instance_io.hpp"
#include "rnfmp/model.hpp"
#include "rnfmp/oracle.hpp"
#include "rnfmp/pipeline.hpp"
#include "rnfmp/prune.hpp"
#include "rnfmp/reduce.hpp"
#include "rnfmp/synthetic.hpp"

namespace rnfmp {

inline constexpr std::uint64_t kDefaultSeed = 20240601;
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 2;
inline constexpr int kExitTimeLimit = 3;

inline int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
    case SolveStatus::Feasible:
      return kExitOk;
    case SolveStatus::TimeLimit:
      return kExitTimeLimit;
    default:
      return kExitFailure;
  }
}

struct RunConfig {
  std::string network;
  std::filesystem::path out_dir = ".";
  InstanceSpec spec;
  bool budget_fraction_given = false;
  std::optional<double> budget;  // dollars; overrides the fraction
  PipelineOptions pipeline;
  bool timing = false;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::optional<GridAxes> grid;
  std::vector<double> fractions{0.0, 0.25, 0.5, 0.75, 1.0};
  std::set<std::string> emit{"csv", "json", "lp"};

  bool emits(const std::string& format) const { return emit.count(format) > 0; }

  void validate() const {
    spec.validate();
    pipeline.solve.validate();
    if (network.empty()) throw Error("no network file given");
    if (!std::filesystem::exists(network)) throw Error("network file not found: " + network);
    if (grid && (grid->budget_fractions.empty() || grid->alphas.empty() || grid->ps.empty() ||
                 grid->capacity_policies.empty() || grid->facility_subsets.empty()))
      throw Error("grid axes must be non-empty");
    for (const auto& e : emit)
      if (e != "csv" && e != "json" && e != "lp") throw Error("unknown emit format: " + e);
  }
};

// Command-line values that override the config file when present.
struct CliOverrides {
  std::string network;
  std::string config;
  std::optional<std::string> out_dir;
  std::optional<int> p;
  std::optional<double> alpha;
  std::optional<std::string> capacity;
  std::optional<std::string> weights;
  std::optional<double> budget_fraction;
  std::optional<double> budget;
  std::optional<double> unit_cost;
  bool segment_coupling = false;
  std::vector<std::string> facilities;
  std::optional<double> time_limit;
  std::optional<double> gap;
  bool no_prune = false;
  bool no_reduce = false;
  bool no_warmstart = false;
  bool no_vis = false;
  bool timing = false;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::vector<double> fractions;
  std::vector<double> grid_budgets;
  std::vector<double> grid_alphas;
  std::vector<int> grid_ps;
  std::vector<std::string> grid_capacity;
  std::vector<std::string> grid_facilities;  // each entry a comma-separated subset
  std::vector<std::string> emit;
};

namespace detail {

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

template <class Json>
GridAxes grid_from_json(const Json& j) {
  GridAxes g;
  if (j.contains("budget_fractions")) g.budget_fractions = j["budget_fractions"].template get<std::vector<double>>();
  if (j.contains("alphas")) g.alphas = j["alphas"].template get<std::vector<double>>();
  if (j.contains("ps")) g.ps = j["ps"].template get<std::vector<int>>();
  if (j.contains("capacity_policies")) {
    g.capacity_policies.clear();
    for (const auto& c : j["capacity_policies"]) g.capacity_policies.push_back(capacity_policy_from_string(c.template get<std::string>()));
  }
  if (j.contains("facility_subsets"))
    g.facility_subsets = j["facility_subsets"].template get<std::vector<std::vector<std::string>>>();
  return g;
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
  const json j = read_json_file(path);
  if (!j.is_object()) throw Error("config must be a JSON object");
  if (j.contains("network")) {
    // Relative to the config file.
    std::filesystem::path p = j["network"].get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(path).parent_path() / p;
    cfg.network = p.string();
  }
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  if (j.contains("spec")) {
    cfg.spec = spec_from_json(j["spec"], cfg.spec);
    cfg.budget_fraction_given = j["spec"].contains("budget_fraction");
  }
  if (j.contains("budget")) cfg.budget = j["budget"].get<double>();
  if (j.contains("solve")) {
    const auto& s = j["solve"];
    cfg.pipeline.solve.time_limit_s = s.value("time_limit_s", cfg.pipeline.solve.time_limit_s);
    cfg.pipeline.solve.gap_tol = s.value("gap_tol", cfg.pipeline.solve.gap_tol);
    cfg.pipeline.prune = s.value("prune", cfg.pipeline.prune);
    cfg.pipeline.reduce = s.value("reduce", cfg.pipeline.reduce);
    cfg.pipeline.warm_start = s.value("warm_start", cfg.pipeline.warm_start);
    cfg.pipeline.valid_inequalities = s.value("valid_inequalities", cfg.pipeline.valid_inequalities);
    cfg.timing = s.value("timing", cfg.timing);
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
  if (j.contains("fractions")) cfg.fractions = j["fractions"].get<std::vector<double>>();
  if (j.contains("grid")) cfg.grid = grid_from_json(j["grid"]);
  if (j.contains("emit")) {
    auto e = j["emit"].get<std::vector<std::string>>();
    cfg.emit = {e.begin(), e.end()};
  }
}

inline RunConfig resolve_config(const CliOverrides& ov) {
  RunConfig cfg;
  if (!ov.config.empty()) apply_config_file(cfg, ov.config);
  if (!ov.network.empty()) cfg.network = ov.network;
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
  if (ov.p) cfg.spec.p = *ov.p;
  if (ov.alpha) cfg.spec.alpha = *ov.alpha;
  if (ov.capacity) cfg.spec.capacity_policy = capacity_policy_from_string(*ov.capacity);
  if (ov.weights) cfg.spec.weight_policy = weight_policy_from_string(*ov.weights);
  if (ov.budget_fraction) {
    cfg.spec.budget_fraction = *ov.budget_fraction;
    cfg.budget_fraction_given = true;
    cfg.budget.reset();
  }
  if (ov.budget) cfg.budget = *ov.budget;
  if (ov.unit_cost) cfg.spec.unit_cost = *ov.unit_cost;
  if (ov.segment_coupling) cfg.spec.segment_coupling = true;
  if (!ov.facilities.empty()) cfg.spec.facility_subset = ov.facilities;
  if (ov.time_limit) cfg.pipeline.solve.time_limit_s = *ov.time_limit;
  if (ov.gap) cfg.pipeline.solve.gap_tol = *ov.gap;
  if (ov.no_prune) cfg.pipeline.prune = false;
  if (ov.no_reduce) cfg.pipeline.reduce = false;
  if (ov.no_warmstart) cfg.pipeline.warm_start = false;
  if (ov.no_vis) cfg.pipeline.valid_inequalities = false;
  if (ov.timing) cfg.timing = true;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.threads) cfg.threads = std::max(1u, *ov.threads);
  if (!ov.fractions.empty()) cfg.fractions = ov.fractions;
  const bool grid_flags = !ov.grid_budgets.empty() || !ov.grid_alphas.empty() || !ov.grid_ps.empty() ||
                          !ov.grid_capacity.empty() || !ov.grid_facilities.empty();
  if (grid_flags) {
    GridAxes g = cfg.grid.value_or(GridAxes{});
    if (!cfg.grid) {
      g.budget_fractions = {cfg.spec.budget_fraction};
      g.alphas = {cfg.spec.alpha};
      g.ps = {cfg.spec.p};
      g.capacity_policies = {cfg.spec.capacity_policy};
      g.facility_subsets = {cfg.spec.facility_subset};
    }
    if (!ov.grid_budgets.empty()) g.budget_fractions = ov.grid_budgets;
    if (!ov.grid_alphas.empty()) g.alphas = ov.grid_alphas;
    if (!ov.grid_ps.empty()) g.ps = ov.grid_ps;
    if (!ov.grid_capacity.empty()) {
      g.capacity_policies.clear();
      for (const auto& c : ov.grid_capacity) g.capacity_policies.push_back(capacity_policy_from_string(c));
    }
    if (!ov.grid_facilities.empty()) {
      g.facility_subsets.clear();
      for (const auto& s : ov.grid_facilities) g.facility_subsets.push_back(split_commas(s));
    }
    cfg.grid = g;
  }
  if (!ov.emit.empty()) cfg.emit = {ov.emit.begin(), ov.emit.end()};
  cfg.pipeline.solve.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

inline ProblemInstance load_for(const RunConfig& cfg) {
  ProblemInstance inst = load_instance(cfg.network, cfg.spec, cfg.budget_fraction_given);
  if (cfg.budget) {
    if (!(*cfg.budget >= 0)) throw Error("budget must be nonnegative");
    inst.budget = *cfg.budget;
    inst.spec.budget_fraction = inst.b_hat > 0 ? std::min(1.0, *cfg.budget / inst.b_hat) : 1.0;
  }
  return inst;
}

inline Network load_raw(const RunConfig& cfg) {
  const json doc = read_json_file(cfg.network);
  if (is_instance_document(doc)) throw Error("this command needs a raw network file, not a derived instance");
  return parse_network(doc);
}

inline std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return cfg.out_dir / name;
}

inline void write_artifact(const RunConfig& cfg, const std::string& format, const std::string& name,
                           const std::string& text, std::ostream& out) {
  if (!cfg.emits(format)) return;
  const auto path = out_path(cfg, name);
  write_text_file(path, text);
  out << "wrote " << path.string() << "\n";
}

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

inline std::string money(double v) { return format_number(v); }

inline void print_summary(const ProblemInstance& inst, std::ostream& out) {
  const Network& net = inst.network;
  out << net.node_count() << " nodes, " << net.arc_count() << " arcs, " << net.vulnerable_count()
      << " vulnerable, B̂=" << money(inst.b_hat) << "\n";
  out << net.origins().size() << " origins, " << net.destinations().size() << " destinations, budget "
      << money(inst.budget) << "\n";
}

inline void print_solution(const Solution& s, std::ostream& out) {
  out << "status " << to_string(s.status) << "\n";
  if (std::isfinite(s.objective)) out << "objective " << format_number(s.objective) << "\n";
  if (std::isfinite(s.best_bound)) out << "best bound " << format_number(s.best_bound) << "\n";
  out << "upgrades " << s.upgrades.size();
  for (const auto& a : s.upgrades) out << " " << a;
  out << "\n";
}

inline void print_elimination(const EliminationTable& t, std::ostream& out) {
  out << "elimination stats\n" << elimination_csv(t);
}

inline std::vector<std::pair<std::string, InstanceSpec>> grid_specs(const RunConfig& cfg) {
  std::vector<std::pair<std::string, InstanceSpec>> cells;
  std::size_t index = 0;
  const GridAxes& g = *cfg.grid;
  for (int p : g.ps)
    for (const auto& fac : g.facility_subsets)
      for (CapacityPolicy cap : g.capacity_policies)
        for (double alpha : g.alphas)
          for (double f : g.budget_fractions) {
            InstanceSpec s = cfg.spec;
            s.p = p;
            s.facility_subset = fac;
            s.capacity_policy = cap;
            s.alpha = alpha;
            s.budget_fraction = f;
            char name[32];
            std::snprintf(name, sizeof name, "instance_%04zu.json", ++index);
            cells.emplace_back(name, s);
          }
  return cells;
}

// ---- subcommands ----

inline int cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  out << "seed " << cfg.seed << "\n";
  if (cfg.grid) {
    const Network raw = load_raw(cfg);
    for (const auto& [name, spec] : grid_specs(cfg)) {
      ProblemInstance inst = derive_instance(raw, spec, cfg.network);
      out << name << ": ";
      print_summary(inst, out);
      write_artifact(cfg, "json", name, dump(instance_to_json(inst)), out);
    }
    return kExitOk;
  }
  ProblemInstance inst = load_for(cfg);
  print_summary(inst, out);
  write_artifact(cfg, "json", "instance.json", dump(instance_to_json(inst)), out);
  return kExitOk;
}

inline int cmd_prune(const RunConfig& cfg, std::ostream& out) {
  out << "seed " << cfg.seed << "\n";
  ProblemInstance inst = load_for(cfg);
  print_summary(inst, out);
  PrunedNetwork pruned = prune_all(inst.network);
  ProblemInstance working = with_network(inst, pruned.network);
  out << "pruned to " << pruned.network.node_count() << " nodes, " << pruned.network.arc_count() << " arcs in "
      << pruned.stats.rounds << " rounds, objective offset " << format_number(pruned.log.objective_offset) << "\n";
  std::optional<Reductions> red;
  if (cfg.pipeline.reduce) red = reduce_all(working);
  const EliminationTable table = elimination_table(pruned, red ? &*red : nullptr);
  print_elimination(table, out);
  write_artifact(cfg, "json", "prunelog.json", dump(prune_log_to_json(pruned.log)), out);
  write_artifact(cfg, "csv", "prune_stats.csv", elimination_csv(table), out);
  write_artifact(cfg, "json", "pruned_instance.json", dump(instance_to_json(working)), out);
  if (red) write_artifact(cfg, "json", "reductions.json", dump(reductions_to_json(working, *red)), out);
  return kExitOk;
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  out << "seed " << cfg.seed << "\n";
  ProblemInstance inst = load_for(cfg);
  print_summary(inst, out);
  PipelineResult r = run_pipeline(inst, cfg.pipeline);
  if (r.pruned) {
    const EliminationTable table = elimination_table(*r.pruned, r.reductions ? &*r.reductions : nullptr);
    print_elimination(table, out);
  }
  if (r.greedy) {
    out << "warm start " << (r.greedy->feasible ? "feasible, objective " + format_number(r.greedy->objective)
                                                : std::string("not feasible"))
        << "\n";
  }
  print_solution(r.solution, out);
  out << "nodes explored " << r.solution.stats.nodes_explored << "\n";
  write_artifact(cfg, "json", "solution.json", dump(solution_to_json(r.solution, cfg.timing)), out);
  return exit_code(r.solution.status);
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  out << "seed " << cfg.seed << "\n";
  ProblemInstance inst = load_for(cfg);
  print_summary(inst, out);
  SweepResult r = budget_sweep(inst, cfg.fractions, cfg.pipeline);
  out << "LB " << (std::isfinite(r.lb) ? format_number(r.lb) : std::string(to_string(r.lb_status))) << "\n";
  out << sweep_csv(r);
  write_artifact(cfg, "csv", "sweep.csv", sweep_csv(r), out);
  bool time_limited = false;
  for (const auto& row : r.rows) time_limited |= row.status == SolveStatus::TimeLimit;
  return time_limited ? kExitTimeLimit : kExitOk;
}

inline int cmd_ewtt(const RunConfig& cfg, std::ostream& out, bool by_segment, bool assigned_pairs) {
  out << "seed " << cfg.seed << "\n";
  ProblemInstance inst = load_for(cfg);
  print_summary(inst, out);
  EwttOptions eo;
  std::optional<Solution> sol;
  if (assigned_pairs) {
    sol = run_pipeline(inst, cfg.pipeline).solution;
    if (!has_solution(sol->status)) {
      out << "status " << to_string(sol->status) << "\n";
      return exit_code(sol->status);
    }
    eo.assigned_pairs_only = &*sol;
  }
  auto rows = ewtt_ranking(inst, eo);
  const auto critical = connectivity_critical(inst);
  out << "connectivity-critical arcs " << critical.size();
  for (const auto& a : critical) out << " " << a;
  out << "\n";
  write_artifact(cfg, "csv", "ewtt.csv", ewtt_csv(rows), out);
  if (by_segment) write_artifact(cfg, "csv", "ewtt_segments.csv", ewtt_csv(ewtt_by_segment(inst.network, rows)), out);
  return kExitOk;
}

inline std::string grid_group_key(const GridRow& row, const std::string& by) {
  if (by == "p") return "p=" + std::to_string(row.p);
  if (by == "alpha") return "alpha=" + format_number(row.alpha);
  if (by == "capacity") return "capacity=" + std::string(to_string(row.capacity));
  if (by == "budget") return "budget_fraction=" + format_number(row.budget_fraction);
  if (by == "hcfs") return "hcfs=" + row.hcf_ids;
  if (by == "all") return "all";
  throw Error("unknown group key: " + by);
}

inline std::vector<GridRow> run_grid(const RunConfig& cfg) {
  const Network raw = load_raw(cfg);
  GridAxes axes = cfg.grid.value_or(GridAxes{{cfg.spec.budget_fraction},
                                             {cfg.spec.alpha},
                                             {cfg.spec.p},
                                             {cfg.spec.capacity_policy},
                                             {cfg.spec.facility_subset}});
  return scenario_grid(raw, cfg.spec, axes, cfg.pipeline);
}

inline int cmd_grid(const RunConfig& cfg, std::ostream& out, const std::string& group_by) {
  out << "seed " << cfg.seed << "\n";
  auto rows = run_grid(cfg);
  out << rows.size() << " cells\n";
  write_artifact(cfg, "csv", "grid.csv", grid_csv(rows), out);
  auto summary = group_summary(rows, [&](const GridRow& r) { return grid_group_key(r, group_by); });
  write_artifact(cfg, "csv", "grid_summary.csv", group_summary_csv(summary), out);
  bool time_limited = false;
  for (const auto& r : rows) time_limited |= r.status == to_string(SolveStatus::TimeLimit);
  return time_limited ? kExitTimeLimit : kExitOk;
}

inline int cmd_frequency(const RunConfig& cfg, std::ostream& out, const std::string& group_by, bool by_segment,
                         bool include_zero) {
  out << "seed " << cfg.seed << "\n";
  auto rows = run_grid(cfg);
  std::vector<std::pair<std::string, Solution>> batch;
  for (const auto& r : rows) batch.emplace_back(grid_group_key(r, group_by), r.solution);
  const Network raw = load_raw(cfg);
  FrequencyOptions fo;
  if (by_segment) fo.roll_up_segments = &raw;
  if (include_zero) {
    std::set<std::string> ids;
    for (const RoadArc& a : raw.arcs())
      if (a.vulnerable) ids.insert(by_segment ? a.segment_id : a.id);
    fo.universe = {ids.begin(), ids.end()};
  }
  auto freq = upgrade_frequency(batch, fo);
  out << rows.size() << " cells, " << freq.size() << " rows\n";
  write_artifact(cfg, "csv", "frequency.csv", frequency_csv(freq), out);
  write_artifact(cfg, "csv", "grid.csv", grid_csv(rows), out);
  return kExitOk;
}

inline int cmd_export_lp(const RunConfig& cfg, std::ostream& out) {
  out << "seed " << cfg.seed << "\n";
  ProblemInstance inst = load_for(cfg);
  ProblemInstance working = inst;
  if (cfg.pipeline.prune) working = with_network(inst, prune_all(inst.network).network);
  std::optional<Reductions> red;
  if (cfg.pipeline.reduce || cfg.pipeline.valid_inequalities) {
    ReduceOptions ro;
    ro.prop2 = ro.prop3 = cfg.pipeline.reduce;
    ro.triangle_vis = cfg.pipeline.valid_inequalities;
    red = reduce_all(working, ro);
    if (!cfg.pipeline.reduce) {
      red->fixed.forced_y.clear();
      red->fixed.budget_delta = red->fixed.offset_delta = 0.0;
      red->fixed.infeasible = false;
    }
  }
  ModelOptions mo;
  mo.triangle_vis = mo.exit_vis = cfg.pipeline.valid_inequalities;
  MipModel m = build_model(working, red ? &*red : nullptr, mo);
  out << m.vars.size() << " variables (" << m.x_count << " x, " << m.y_count << " y), " << m.constraints.size()
      << " constraints\n";
  write_artifact(cfg, "lp", "model.lp", to_lp_string(m), out);
  return kExitOk;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out, const OracleLimits& limits) {
  out << "seed " << cfg.seed << "\n";
  ProblemInstance inst = load_for(cfg);
  print_summary(inst, out);
  OracleOptions oo;
  oo.limits = limits;
  Solution s = brute_force_oracle(inst, oo);
  print_solution(s, out);
  write_artifact(cfg, "json", "oracle_solution.json", dump(solution_to_json(s)), out);
  return exit_code(s.status);
}

inline int cmd_generate(const SyntheticSpec& spec, bool paradox, const std::filesystem::path& out_file,
                        std::ostream& out) {
  out << "seed " << spec.seed << "\n";
  const auto doc = paradox ? budget_paradox_network() : grid_network(spec);
  if (out_file.has_parent_path()) std::filesystem::create_directories(out_file.parent_path());
  write_text_file(out_file, dump(doc));
  out << doc["nodes"].size() << " nodes, " << doc["arcs"].size() << " roads\nwrote " << out_file.string() << "\n";
  return kExitOk;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Road network flood mitigation toolkit"};
  app.require_subcommand(1);

  CliOverrides ov;
  auto common = [&](CLI::App* sub, bool needs_network = true) {
    auto* net = sub->add_option("network", ov.network, "raw network or derived instance JSON");
    if (!needs_network) net->description("raw network JSON");
    sub->add_option("-c,--config", ov.config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("-o,--out", ov.out_dir, "output directory (default .)");
    sub->add_option("--p", ov.p, "population threshold for origins");
    sub->add_option("--alpha", ov.alpha, "capacity slack alpha");
    sub->add_option("--capacity", ov.capacity, "identical | bed_proportional");
    sub->add_option("--weights", ov.weights, "w_equals_h | uniform");
    sub->add_option("--budget-fraction", ov.budget_fraction, "budget as a fraction of the full upgrade cost");
    sub->add_option("--budget", ov.budget, "budget in dollars");
    sub->add_option("--unit-cost", ov.unit_cost, "dollars per lane-mile");
    sub->add_flag("--segment-coupling", ov.segment_coupling, "upgrade both directions of a road together");
    sub->add_option("--facilities", ov.facilities, "facility subset")->delimiter(',');
    sub->add_option("--time-limit", ov.time_limit, "seconds per solve");
    sub->add_option("--gap", ov.gap, "relative optimality gap");
    sub->add_flag("--no-prune", ov.no_prune, "skip network pruning");
    sub->add_flag("--no-reduce", ov.no_reduce, "skip variable fixing and masking");
    sub->add_flag("--no-warmstart", ov.no_warmstart, "skip the greedy warm start");
    sub->add_flag("--no-vis", ov.no_vis, "skip valid inequalities");
    sub->add_flag("--timing", ov.timing, "include wall time in JSON output");
    sub->add_option("--seed", ov.seed, "random seed");
    sub->add_option("--threads", ov.threads, "parallelism degree");
    sub->add_option("--emit", ov.emit, "artifact formats to write: csv, json, lp")->delimiter(',');
  };
  auto grid_flags = [&](CLI::App* sub) {
    sub->add_option("--grid-budgets", ov.grid_budgets, "budget fractions")->delimiter(',');
    sub->add_option("--grid-alphas", ov.grid_alphas, "alpha values")->delimiter(',');
    sub->add_option("--grid-ps", ov.grid_ps, "population thresholds")->delimiter(',');
    sub->add_option("--grid-capacity", ov.grid_capacity, "capacity policies")->delimiter(',');
    sub->add_option("--grid-facilities", ov.grid_facilities, "facility subset, comma-separated; repeatable");
  };

  auto* ingest = app.add_subcommand("ingest", "derive an instance and print its size");
  common(ingest);
  grid_flags(ingest);
  auto* prune = app.add_subcommand("prune", "prune the network and report eliminations");
  common(prune);
  auto* solve = app.add_subcommand("solve", "solve one instance to optimality");
  common(solve);
  auto* sweep = app.add_subcommand("sweep", "solve across budget fractions");
  common(sweep);
  sweep->add_option("--fractions", ov.fractions, "budget fractions, ascending")->delimiter(',');
  bool by_segment = false, assigned_pairs = false;
  auto* ewtt = app.add_subcommand("ewtt", "rank vulnerable arcs by extra weighted travel time");
  common(ewtt);
  ewtt->add_flag("--by-segment", by_segment, "also roll arcs up to road segments");
  ewtt->add_flag("--assigned-pairs", assigned_pairs, "only origin-destination pairs of the optimal assignment");
  std::string group_by = "p";
  bool include_zero = false;
  auto* frequency = app.add_subcommand("frequency", "upgrade frequency over a scenario grid");
  common(frequency, false);
  grid_flags(frequency);
  frequency->add_option("--group-by", group_by, "p | alpha | capacity | budget | hcfs | all");
  frequency->add_flag("--by-segment", by_segment, "count road segments instead of arcs");
  frequency->add_flag("--include-zero", include_zero, "list arcs that were never upgraded");
  auto* grid = app.add_subcommand("grid", "solve a scenario grid");
  common(grid, false);
  grid_flags(grid);
  grid->add_option("--group-by", group_by, "p | alpha | capacity | budget | hcfs | all");
  auto* export_lp = app.add_subcommand("export-lp", "write the integer program in LP format");
  common(export_lp);
  OracleLimits limits;
  auto* oracle = app.add_subcommand("oracle", "solve by exhaustive enumeration (small instances only)");
  common(oracle);
  oracle->add_option("--max-units", limits.max_units, "largest number of upgrade units");
  oracle->add_option("--max-origins", limits.max_origins, "largest number of origins");
  oracle->add_option("--max-destinations", limits.max_destinations, "largest number of destinations");

  SyntheticSpec synth;
  bool paradox = false;
  std::string gen_out = "network.json";
  auto* generate = app.add_subcommand("generate", "write a seeded synthetic network");
  generate->add_option("--rows", synth.rows, "grid rows");
  generate->add_option("--cols", synth.cols, "grid columns");
  generate->add_option("--seed", synth.seed, "random seed")->default_val(kDefaultSeed);
  generate->add_option("--facilities", synth.facilities, "number of facilities");
  generate->add_flag("--paradox", paradox, "write the fixed budget-paradox network instead");
  generate->add_option("-o,--out", gen_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (generate->parsed()) return detail::cmd_generate(synth, paradox, gen_out, out);
    const RunConfig cfg = detail::resolve_config(ov);
    if (ingest->parsed()) return detail::cmd_ingest(cfg, out);
    if (prune->parsed()) return detail::cmd_prune(cfg, out);
    if (solve->parsed()) return detail::cmd_solve(cfg, out);
    if (sweep->parsed()) return detail::cmd_sweep(cfg, out);
    if (ewtt->parsed()) return detail::cmd_ewtt(cfg, out, by_segment, assigned_pairs);
    if (frequency->parsed()) return detail::cmd_frequency(cfg, out, group_by, by_segment, include_zero);
    if (grid->parsed()) return detail::cmd_grid(cfg, out, group_by);
    if (export_lp->parsed()) return detail::cmd_export_lp(cfg, out);
    if (oracle->parsed()) return detail::cmd_oracle(cfg, out, limits);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace rnfmp
