#pragma once

// The integer program in explicit form, for export to external MIP solvers.
// Constraint families carry numeric tags that appear in their row names:
//   2 origin supply, 3 destination absorption, 4 conservation, 5 budget,
//   6 flooded arc needs upgrade, 7 upgrade needs use, 8 capacity,
//   11 triangle cuts, 12 exit cuts.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rnfmp/instance.hpp"
#include "rnfmp/network.hpp"
#include "rnfmp/prune.hpp"
#include "rnfmp/reduce.hpp"

namespace rnfmp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
};

struct Constraint {
  int tag = 0;
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

struct Variable {
  std::string name;
  bool is_y = false;
  double objective = 0.0;
  bool fixed_one = false;
  std::size_t origin_row = kNone;  // x only
  ArcIndex arc = kNone;            // x only
  std::size_t unit = kNone;        // y only
};

struct MipModel {
  std::vector<Variable> vars;
  std::vector<Constraint> constraints;
  std::size_t x_count = 0;
  std::size_t y_count = 0;

  std::size_t count(int tag) const {
    std::size_t n = 0;
    for (const auto& c : constraints) n += c.tag == tag;
    return n;
  }
};

struct ModelOptions {
  bool triangle_vis = true;
  bool exit_vis = true;
  std::optional<bool> segment_coupling;
};

inline std::string sanitize_lp_name(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out;
}

inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

// Per-arc name stem "i_j", with "_p2", "_p3", ... on later parallel arcs and
// "_dup<n>" when sanitizing makes two stems collide.
inline std::vector<std::string> arc_stems(const Network& net) {
  std::vector<std::string> stems(net.arc_count());
  std::map<std::pair<NodeIndex, NodeIndex>, int> seen_pair;
  std::set<std::string> taken;
  for (ArcIndex a = 0; a < net.arc_count(); ++a) {
    std::string stem = sanitize_lp_name(net.node(net.tail(a)).id) + "_" + sanitize_lp_name(net.node(net.head(a)).id);
    const int n = ++seen_pair[{net.tail(a), net.head(a)}];
    if (n > 1) stem += "_p" + std::to_string(n);
    if (taken.count(stem)) {
      int d = 2;
      while (taken.count(stem + "_dup" + std::to_string(d))) ++d;
      stem += "_dup" + std::to_string(d);
    }
    taken.insert(stem);
    stems[a] = std::move(stem);
  }
  return stems;
}

inline std::vector<std::string> unique_names(std::vector<std::string> names) {
  std::set<std::string> taken;
  for (auto& n : names) {
    if (taken.count(n)) {
      int d = 2;
      while (taken.count(n + "_dup" + std::to_string(d))) ++d;
      n += "_dup" + std::to_string(d);
    }
    taken.insert(n);
  }
  return names;
}

}  // namespace detail

inline MipModel build_model(const ProblemInstance& inst, const Reductions* red = nullptr,
                            const ModelOptions& opt = {}) {
  const Network& net = inst.network;
  const bool coupling = opt.segment_coupling.value_or(inst.spec.segment_coupling);
  const UpgradeUnits units = upgrade_units(net, coupling);
  const auto& origins = net.origins();
  const auto stems = detail::arc_stems(net);
  std::vector<std::string> origin_names, node_names;
  for (NodeIndex v = 0; v < net.node_count(); ++v) node_names.push_back(sanitize_lp_name(net.node(v).id));
  for (NodeIndex k : origins) origin_names.push_back(node_names[k]);

  std::vector<char> forced(units.size(), 0);
  if (red)
    for (const auto& id : red->fixed.forced_y) {
      const ArcIndex a = net.arc_index(id);
      forced[units.of_arc[a]] = 1;
      for (std::size_t row = 0; row < origins.size(); ++row)
        if (origins[row] == net.tail(a) && !red->mask.empty_shape() && red->mask.masked(row, a))
          throw Error("inconsistent fixing: forced upgrade on masked arc " + id);
    }
  auto masked = [&](std::size_t row, ArcIndex a) {
    return red && !red->mask.empty_shape() && red->mask.masked(row, a);
  };

  MipModel m;
  std::vector<std::vector<std::size_t>> x(origins.size(), std::vector<std::size_t>(net.arc_count(), kNone));
  for (std::size_t row = 0; row < origins.size(); ++row) {
    const double w = net.node(origins[row]).weight;
    for (ArcIndex a = 0; a < net.arc_count(); ++a) {
      if (masked(row, a)) continue;
      Variable v;
      v.name = "x_" + origin_names[row] + "_" + stems[a];
      v.objective = w * net.arc(a).travel_time;
      v.origin_row = row;
      v.arc = a;
      // A forced single exit carries its own origin's flow.
      v.fixed_one = net.arc(a).vulnerable && forced[units.of_arc[a]] && net.tail(a) == origins[row];
      x[row][a] = m.vars.size();
      m.vars.push_back(std::move(v));
      ++m.x_count;
    }
  }
  std::vector<std::size_t> y(units.size(), kNone);
  {
    std::vector<std::string> names;
    for (std::size_t u = 0; u < units.size(); ++u)
      names.push_back(coupling ? "y_seg_" + sanitize_lp_name(units.units[u].id) : "y_" + stems[units.units[u].arcs.front()]);
    names = detail::unique_names(std::move(names));
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (forced[u]) continue;
      Variable v;
      v.name = names[u];
      v.is_y = true;
      v.unit = u;
      y[u] = m.vars.size();
      m.vars.push_back(std::move(v));
      ++m.y_count;
    }
  }

  auto add = [&](int tag, std::string name, std::vector<Term> terms, Sense sense, double rhs) {
    if (terms.empty()) {
      const bool holds = sense == Sense::LessEqual ? 0 <= rhs : sense == Sense::GreaterEqual ? 0 >= rhs : rhs == 0;
      if (holds) return;
    }
    m.constraints.push_back({tag, std::move(name), std::move(terms), sense, rhs});
  };
  auto balance = [&](std::size_t row, NodeIndex j, double scale) {
    std::vector<Term> t;
    for (ArcIndex a : net.in_arcs(j))
      if (x[row][a] != kNone) t.push_back({x[row][a], scale});
    for (ArcIndex a : net.out_arcs(j))
      if (x[row][a] != kNone) t.push_back({x[row][a], -scale});
    // A loop contributes +s and -s; drop both.
    std::map<std::size_t, double> acc;
    for (auto& term : t) acc[term.var] += term.coef;
    std::vector<Term> out;
    for (auto [v, c] : acc)
      if (c != 0.0) out.push_back({v, c});
    return out;
  };

  for (std::size_t row = 0; row < origins.size(); ++row) {
    const NodeIndex k = origins[row];
    add(2, "flow2_" + origin_names[row], balance(row, k, 1.0), Sense::Equal, -1.0);
    for (NodeIndex j : net.destinations())
      add(3, "dest3_" + origin_names[row] + "_" + node_names[j], balance(row, j, 1.0), Sense::GreaterEqual, 0.0);
    for (NodeIndex j = 0; j < net.node_count(); ++j) {
      if (j == k || net.node(j).kind == NodeKind::Destination) continue;
      add(4, "cons4_" + origin_names[row] + "_" + node_names[j], balance(row, j, 1.0), Sense::Equal, 0.0);
    }
  }
  if (units.size() > 0) {
    std::vector<Term> t;
    double rhs = inst.budget;
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (forced[u]) rhs -= units.units[u].cost;
      else t.push_back({y[u], units.units[u].cost});
    }
    add(5, "budget5", std::move(t), Sense::LessEqual, rhs);
  }
  for (std::size_t row = 0; row < origins.size(); ++row)
    for (ArcIndex a = 0; a < net.arc_count(); ++a) {
      if (!net.arc(a).vulnerable || x[row][a] == kNone) continue;
      const std::size_t u = units.of_arc[a];
      if (forced[u]) continue;
      add(6, "link6_" + origin_names[row] + "_" + stems[a], {{x[row][a], 1.0}, {y[u], -1.0}}, Sense::LessEqual, 0.0);
    }
  for (std::size_t u = 0; u < units.size(); ++u) {
    std::vector<Term> t;
    for (ArcIndex a : units.units[u].arcs)
      for (std::size_t row = 0; row < origins.size(); ++row)
        if (x[row][a] != kNone) t.push_back({x[row][a], 1.0});
    const std::string name = "use7_" + (coupling ? sanitize_lp_name(units.units[u].id) : stems[units.units[u].arcs.front()]);
    if (forced[u]) {
      add(7, name, std::move(t), Sense::GreaterEqual, 1.0);
    } else {
      t.push_back({y[u], -1.0});
      add(7, name, std::move(t), Sense::GreaterEqual, 0.0);
    }
  }
  for (NodeIndex j : net.destinations()) {
    if (!std::isfinite(net.node(j).capacity)) continue;
    std::vector<Term> t;
    for (std::size_t row = 0; row < origins.size(); ++row)
      for (auto term : balance(row, j, net.node(origins[row]).residents))
        if (term.coef != 0.0) t.push_back(term);
    add(8, "cap8_" + node_names[j], std::move(t), Sense::LessEqual, net.node(j).capacity);
  }
  if (opt.triangle_vis && red) {
    for (std::size_t n = 0; n < red->triangle_vis.size(); ++n) {
      const auto& vi = red->triangle_vis[n];
      for (std::size_t row = 0; row < origins.size(); ++row) {
        std::vector<Term> t;
        for (const auto* id : {&vi.arc_ij, &vi.arc_ih, &vi.arc_jh}) {
          const std::size_t v = x[row][net.arc_index(*id)];
          if (v != kNone) t.push_back({v, 1.0});
        }
        if (t.size() < 2) continue;
        add(11, "tri11_" + origin_names[row] + "_" + std::to_string(n), std::move(t), Sense::LessEqual, 1.0);
      }
    }
  }
  if (opt.exit_vis && red) {
    for (const auto& cut : red->fixed.exit_vis) {
      std::vector<Term> t;
      std::set<std::size_t> seen;
      double rhs = 1.0;
      for (const auto& id : cut.arcs) {
        const std::size_t u = units.of_arc[net.arc_index(id)];
        if (!seen.insert(u).second) continue;
        if (forced[u]) rhs -= 1.0;
        else t.push_back({y[u], 1.0});
      }
      add(12, "exit12_" + sanitize_lp_name(cut.origin), std::move(t), Sense::GreaterEqual, rhs);
    }
  }
  return m;
}

// CPLEX LP text. Deterministic: variable and constraint order follow the
// model, numbers use shortest round-trip formatting.
inline std::string to_lp_string(const MipModel& m) {
  std::ostringstream out;
  auto write_terms = [&](const std::vector<Term>& terms) {
    std::size_t on_line = 0;
    bool first = true;
    for (const auto& t : terms) {
      if (on_line == 8) {
        out << "\n   ";
        on_line = 0;
      }
      const double c = t.coef;
      if (first) out << (c < 0 ? "- " : "");
      else out << (c < 0 ? " - " : " + ");
      const double mag = std::abs(c);
      if (mag != 1.0) out << format_number(mag) << ' ';
      out << m.vars[t.var].name;
      first = false;
      ++on_line;
    }
    if (first) out << "0 " << (m.vars.empty() ? "dummy" : m.vars.front().name);
  };
  out << "\\ rnfmp model\n";
  out << "Minimize\n obj: ";
  std::vector<Term> obj;
  for (std::size_t v = 0; v < m.vars.size(); ++v)
    if (m.vars[v].objective != 0.0) obj.push_back({v, m.vars[v].objective});
  write_terms(obj);
  out << "\nSubject To\n";
  for (const auto& c : m.constraints) {
    out << ' ' << c.name << ": ";
    write_terms(c.terms);
    out << (c.sense == Sense::LessEqual ? " <= " : c.sense == Sense::GreaterEqual ? " >= " : " = ")
        << format_number(c.rhs) << '\n';
  }
  bool any_fixed = false;
  for (const auto& v : m.vars) any_fixed |= v.fixed_one;
  if (any_fixed) {
    out << "Bounds\n";
    for (const auto& v : m.vars)
      if (v.fixed_one) out << ' ' << v.name << " = 1\n";
  }
  out << "Binaries\n";
  for (const auto& v : m.vars) out << ' ' << v.name << '\n';
  out << "End\n";
  return out.str();
}

inline void export_lp(const MipModel& m, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write LP file: " + path.string());
  f << to_lp_string(m);
  if (!f) throw Error("failed writing LP file: " + path.string());
}

struct LpSummary {
  std::set<std::string> variables;  // every name seen in objective, rows, bounds or binaries
  std::set<std::string> binaries;
  std::vector<std::string> constraint_names;
  std::size_t objective_terms = 0;
};

// Reader for the subset of LP syntax written by to_lp_string.
inline LpSummary read_lp(std::string_view text) {
  LpSummary s;
  enum class Section { None, Objective, Constraints, Bounds, Binaries, End } section = Section::None;
  std::istringstream in{std::string(text)};
  std::string line;
  auto is_name = [](const std::string& tok) {
    if (tok.empty()) return false;
    const char c = tok.front();
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  auto scan = [&](const std::string& body, bool objective) {
    std::istringstream ts(body);
    std::string tok;
    while (ts >> tok) {
      if (is_name(tok)) {
        s.variables.insert(tok);
        if (objective) ++s.objective_terms;
      }
    }
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '\\') continue;
    std::string trimmed = line.substr(line.find_first_not_of(' ') == std::string::npos ? line.size() : line.find_first_not_of(' '));
    if (trimmed == "Minimize") { section = Section::Objective; continue; }
    if (trimmed == "Subject To") { section = Section::Constraints; continue; }
    if (trimmed == "Bounds") { section = Section::Bounds; continue; }
    if (trimmed == "Binaries") { section = Section::Binaries; continue; }
    if (trimmed == "End") { section = Section::End; continue; }
    const bool continuation = line.rfind("   ", 0) == 0;
    switch (section) {
      case Section::Objective:
      case Section::Constraints: {
        std::string body = trimmed;
        if (!continuation) {
          auto colon = trimmed.find(':');
          if (colon == std::string::npos) throw Error("LP parse error: missing row name in '" + line + "'");
          if (section == Section::Constraints) s.constraint_names.push_back(trimmed.substr(0, colon));
          body = trimmed.substr(colon + 1);
        }
        scan(body, section == Section::Objective);
        break;
      }
      case Section::Bounds: {
        std::istringstream ts(trimmed);
        std::string name;
        ts >> name;
        s.variables.insert(name);
        break;
      }
      case Section::Binaries:
        s.binaries.insert(trimmed);
        s.variables.insert(trimmed);
        break;
      default:
        throw Error("LP parse error: unexpected line '" + line + "'");
    }
  }
  if (section != Section::End) throw Error("LP parse error: missing End");
  return s;
}

}  // namespace rnfmp
