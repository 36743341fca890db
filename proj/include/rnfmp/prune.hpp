#pragma once

// Exactness-preserving network reductions. Every pass records what it did
// in a PruneLog, which is enough to replay the reductions on the original
// network and to lift a solution of the reduced network back onto it.
//
//   1  components behind an articulation point with no origin/destination
//   2  transshipment nodes without incoming or without outgoing arcs
//   3  pendant origins merged into their transshipment neighbor
//   4  transshipment apex of an isolated non-vulnerable triangle
//   5  dominated parallel non-vulnerable arcs
//   6  self loops
//   7  degree-2 transshipment contraction along non-vulnerable arcs
//   8  arcs dominated inside a non-vulnerable 3-clique (+ triangle cuts)

#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rnfmp/instance.hpp"
#include "rnfmp/network.hpp"
#include "rnfmp/solution.hpp"

namespace rnfmp {

struct MergeRecord {
  std::string origin;
  std::string host;
  std::string out_arc;  // origin -> host
  std::string in_arc;   // host -> origin
  double residents = 0.0;
  double weight = 0.0;
  double offset = 0.0;  // weight * t(origin, host)
};

struct Contraction {
  std::string new_arc;
  std::vector<std::string> chain;  // original arc ids, in travel order
};

struct PruneAction {
  int technique = 0;
  std::vector<std::string> removed_nodes;
  std::vector<std::string> removed_arcs;
  std::vector<RoadArc> added_arcs;
  std::vector<MergeRecord> merges;
  std::vector<Contraction> contractions;

  bool empty() const {
    return removed_nodes.empty() && removed_arcs.empty() && added_arcs.empty() && merges.empty();
  }
};

// Triple (i, j, h) of a non-vulnerable 3-clique with t_ih < t_ij + t_jh:
// x_ij + x_ih + x_jh <= 1 holds for every origin.
struct TriangleVi {
  std::string i, j, h;
  std::string arc_ij, arc_ih, arc_jh;

  auto operator<=>(const TriangleVi&) const = default;
};

// Original origin represented by a pruned node, plus the arcs walked from it
// to that node by pendant merges.
struct OriginLineage {
  std::string original;
  std::vector<std::string> prefix;
};

struct PruneLog {
  std::vector<PruneAction> actions;
  double objective_offset = 0.0;
  std::vector<TriangleVi> triangle_vis;
  std::map<std::string, std::vector<std::string>> contraction_map;
  std::map<std::string, OriginLineage> lineage;  // keyed by pruned host id
  std::size_t next_arc_serial = 0;

  std::vector<std::string> expand_arc(const std::string& arc) const {
    auto it = contraction_map.find(arc);
    if (it == contraction_map.end()) return {arc};
    return it->second;
  }
};

struct SizeCounts {
  long long variables = 0;
  long long nodes = 0;
  long long arcs = 0;
};

// Decision-variable accounting: |N_o| * |A| flow variables plus |A_v|
// upgrade variables.
inline SizeCounts size_counts(const Network& net) {
  SizeCounts c;
  c.nodes = static_cast<long long>(net.node_count());
  c.arcs = static_cast<long long>(net.arc_count());
  c.variables = static_cast<long long>(net.origins().size()) * c.arcs +
                static_cast<long long>(net.vulnerable_count());
  return c;
}

struct PruneStats {
  SizeCounts original;
  SizeCounts pruned;
  std::array<SizeCounts, 8> eliminated{};  // technique k at index k-1
  int rounds = 0;
};

struct PrunedNetwork {
  Network network;
  PruneLog log;
  PruneStats stats;
};

namespace detail {

// Mutable working copy used inside a pass; alive flags instead of erasure so
// indices stay stable while a pass runs.
class NetworkEditor {
 public:
  explicit NetworkEditor(const Network& net)
      : nodes_(net.nodes().begin(), net.nodes().end()),
        arcs_(net.arcs().begin(), net.arcs().end()),
        node_alive_(net.node_count(), 1),
        arc_alive_(net.arc_count(), 1),
        out_(net.node_count()),
        in_(net.node_count()) {
    for (ArcIndex a = 0; a < arcs_.size(); ++a) {
      tail_.push_back(net.tail(a));
      head_.push_back(net.head(a));
      out_[tail_[a]].push_back(a);
      in_[head_[a]].push_back(a);
    }
    for (NodeIndex v = 0; v < nodes_.size(); ++v) index_.emplace(nodes_[v].id, v);
  }

  std::size_t node_capacity() const { return nodes_.size(); }
  std::size_t arc_capacity() const { return arcs_.size(); }
  bool node_alive(NodeIndex v) const { return node_alive_[v]; }
  bool arc_alive(ArcIndex a) const { return arc_alive_[a]; }
  RoadNode& node(NodeIndex v) { return nodes_[v]; }
  const RoadNode& node(NodeIndex v) const { return nodes_[v]; }
  const RoadArc& arc(ArcIndex a) const { return arcs_[a]; }
  NodeIndex tail(ArcIndex a) const { return tail_[a]; }
  NodeIndex head(ArcIndex a) const { return head_[a]; }

  std::vector<ArcIndex> live_out(NodeIndex v) const { return live(out_[v]); }
  std::vector<ArcIndex> live_in(NodeIndex v) const { return live(in_[v]); }

  // Distinct undirected neighbors other than v itself, sorted.
  std::vector<NodeIndex> neighbors(NodeIndex v) const {
    std::vector<NodeIndex> nb;
    for (ArcIndex a : out_[v])
      if (arc_alive_[a] && head_[a] != v) nb.push_back(head_[a]);
    for (ArcIndex a : in_[v])
      if (arc_alive_[a] && tail_[a] != v) nb.push_back(tail_[a]);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    return nb;
  }

  bool has_loop(NodeIndex v) const {
    for (ArcIndex a : out_[v])
      if (arc_alive_[a] && head_[a] == v) return true;
    return false;
  }

  void remove_arc(ArcIndex a, PruneAction& act) {
    if (!arc_alive_[a]) return;
    arc_alive_[a] = 0;
    act.removed_arcs.push_back(arcs_[a].id);
  }

  void remove_node(NodeIndex v, PruneAction& act) {
    if (!node_alive_[v]) return;
    for (ArcIndex a : out_[v]) remove_arc(a, act);
    for (ArcIndex a : in_[v]) remove_arc(a, act);
    node_alive_[v] = 0;
    act.removed_nodes.push_back(nodes_[v].id);
  }

  ArcIndex add_arc(RoadArc arc, PruneAction& act) {
    ArcIndex a = arcs_.size();
    NodeIndex t = index_.at(arc.tail), h = index_.at(arc.head);
    act.added_arcs.push_back(arc);
    arcs_.push_back(std::move(arc));
    arc_alive_.push_back(1);
    tail_.push_back(t);
    head_.push_back(h);
    out_[t].push_back(a);
    in_[h].push_back(a);
    return a;
  }

  Network build() const {
    std::vector<RoadNode> nodes;
    std::vector<RoadArc> arcs;
    for (NodeIndex v = 0; v < nodes_.size(); ++v)
      if (node_alive_[v]) nodes.push_back(nodes_[v]);
    for (ArcIndex a = 0; a < arcs_.size(); ++a)
      if (arc_alive_[a]) arcs.push_back(arcs_[a]);
    return Network(std::move(nodes), std::move(arcs));
  }

 private:
  std::vector<ArcIndex> live(const std::vector<ArcIndex>& list) const {
    std::vector<ArcIndex> out;
    for (ArcIndex a : list)
      if (arc_alive_[a]) out.push_back(a);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<RoadNode> nodes_;
  std::vector<RoadArc> arcs_;
  std::vector<char> node_alive_;
  std::vector<char> arc_alive_;
  std::vector<NodeIndex> tail_;
  std::vector<NodeIndex> head_;
  std::vector<std::vector<ArcIndex>> out_;
  std::vector<std::vector<ArcIndex>> in_;
  std::map<std::string, NodeIndex> index_;
};

inline Network commit(const NetworkEditor& ed, PruneAction act, const Network& before, PruneLog& log) {
  if (act.empty()) return before;
  log.actions.push_back(std::move(act));
  return ed.build();
}

// Cheapest live arc from u to v among `candidates` (already filtered to the
// arcs leaving u); lowest index wins ties.
inline ArcIndex cheapest_arc_to(const NetworkEditor& ed, const std::vector<ArcIndex>& candidates,
                                NodeIndex v, bool non_vulnerable_only) {
  ArcIndex best = kNone;
  for (ArcIndex a : candidates) {
    if (ed.head(a) != v) continue;
    if (non_vulnerable_only && ed.arc(a).vulnerable) continue;
    if (best == kNone || ed.arc(a).travel_time < ed.arc(best).travel_time) best = a;
  }
  return best;
}

inline std::string fresh_arc_id(PruneLog& log, const NetworkEditor& ed, const std::string& tail,
                                const std::string& head) {
  for (;;) {
    std::string id = "~c" + std::to_string(log.next_arc_serial++) + ":" + tail + ">" + head;
    bool clash = false;
    for (ArcIndex a = 0; a < ed.arc_capacity() && !clash; ++a) clash = ed.arc(a).id == id;
    if (!clash) return id;
  }
}

}  // namespace detail

inline Network technique1(const Network& net, PruneLog& log) {
  PruneAction act;
  act.technique = 1;
  detail::NetworkEditor ed(net);
  std::set<NodeIndex> doomed;
  for (NodeIndex j : articulation_point_indices(net)) {
    for (const Component& c : components_without(net, j)) {
      bool has_od = false;
      for (NodeIndex v : c.nodes)
        if (net.node(v).kind != NodeKind::Transshipment) has_od = true;
      if (!has_od) doomed.insert(c.nodes.begin(), c.nodes.end());
    }
  }
  for (NodeIndex v : doomed) ed.remove_node(v, act);
  return detail::commit(ed, std::move(act), net, log);
}

inline Network technique2(const Network& net, PruneLog& log) {
  PruneAction act;
  act.technique = 2;
  detail::NetworkEditor ed(net);
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeIndex v = 0; v < ed.node_capacity(); ++v) {
      if (!ed.node_alive(v) || ed.node(v).kind != NodeKind::Transshipment) continue;
      if (ed.live_in(v).empty() || ed.live_out(v).empty()) {
        ed.remove_node(v, act);
        changed = true;
      }
    }
  }
  return detail::commit(ed, std::move(act), net, log);
}

inline Network technique3(const Network& net, PruneLog& log) {
  PruneAction act;
  act.technique = 3;
  detail::NetworkEditor ed(net);
  for (NodeIndex i = 0; i < ed.node_capacity(); ++i) {
    if (!ed.node_alive(i) || ed.node(i).kind != NodeKind::Origin) continue;
    auto outs = ed.live_out(i);
    auto ins = ed.live_in(i);
    if (outs.size() != 1 || ins.size() != 1) continue;
    const ArcIndex ij = outs[0], ji = ins[0];
    const NodeIndex j = ed.head(ij);
    if (j == i || ed.tail(ji) != j) continue;
    if (ed.arc(ij).vulnerable || ed.arc(ji).vulnerable) continue;
    if (ed.node(j).kind != NodeKind::Transshipment) continue;

    MergeRecord m;
    m.origin = ed.node(i).id;
    m.host = ed.node(j).id;
    m.out_arc = ed.arc(ij).id;
    m.in_arc = ed.arc(ji).id;
    m.residents = ed.node(i).residents;
    m.weight = ed.node(i).weight;
    m.offset = m.weight * ed.arc(ij).travel_time;

    OriginLineage lin;
    if (auto it = log.lineage.find(m.origin); it != log.lineage.end()) {
      lin = it->second;
      log.lineage.erase(it);
    } else {
      lin.original = m.origin;
    }
    for (auto& a : log.expand_arc(m.out_arc)) lin.prefix.push_back(a);
    log.lineage[m.host] = std::move(lin);
    log.objective_offset += m.offset;

    RoadNode& host = ed.node(j);
    host.kind = NodeKind::Origin;
    host.residents = m.residents;
    host.weight = m.weight;
    ed.remove_node(i, act);
    act.merges.push_back(std::move(m));
  }
  return detail::commit(ed, std::move(act), net, log);
}

inline Network technique4(const Network& net, PruneLog& log) {
  PruneAction act;
  act.technique = 4;
  detail::NetworkEditor ed(net);
  for (NodeIndex i = 0; i < ed.node_capacity(); ++i) {
    if (!ed.node_alive(i) || ed.node(i).kind != NodeKind::Transshipment || ed.has_loop(i)) continue;
    auto nb = ed.neighbors(i);
    if (nb.size() != 2) continue;
    auto outs = ed.live_out(i), ins = ed.live_in(i);
    bool all_safe = true;
    for (ArcIndex a : outs) all_safe &= !ed.arc(a).vulnerable;
    for (ArcIndex a : ins) all_safe &= !ed.arc(a).vulnerable;
    if (!all_safe) continue;
    const NodeIndex j = nb[0], k = nb[1];
    auto out_j = ed.live_out(j), out_k = ed.live_out(k);
    const bool triangle = detail::cheapest_arc_to(ed, out_j, k, true) != kNone ||
                          detail::cheapest_arc_to(ed, out_k, j, true) != kNone;
    if (!triangle) continue;
    // Every transit a -> i -> b must be matched by a direct a -> b arc that is
    // at least as fast.
    bool dominated = true;
    for (auto [a, b] : {std::pair{j, k}, std::pair{k, j}}) {
      std::vector<ArcIndex> into_i;
      for (ArcIndex x : ins)
        if (ed.tail(x) == a) into_i.push_back(x);
      ArcIndex ai = kNone;
      for (ArcIndex x : into_i)
        if (ai == kNone || ed.arc(x).travel_time < ed.arc(ai).travel_time) ai = x;
      ArcIndex ib = detail::cheapest_arc_to(ed, outs, b, true);
      if (ai == kNone || ib == kNone) continue;
      ArcIndex ab = detail::cheapest_arc_to(ed, a == j ? out_j : out_k, b, true);
      if (ab == kNone || ed.arc(ab).travel_time > ed.arc(ai).travel_time + ed.arc(ib).travel_time) {
        dominated = false;
        break;
      }
    }
    if (dominated) ed.remove_node(i, act);
  }
  return detail::commit(ed, std::move(act), net, log);
}

inline Network technique5(const Network& net, PruneLog& log) {
  PruneAction act;
  act.technique = 5;
  detail::NetworkEditor ed(net);
  std::map<std::pair<NodeIndex, NodeIndex>, ArcIndex> keep;
  for (ArcIndex a = 0; a < net.arc_count(); ++a) {
    if (net.arc(a).vulnerable) continue;
    auto key = std::pair{net.tail(a), net.head(a)};
    auto [it, inserted] = keep.emplace(key, a);
    if (inserted) continue;
    if (net.arc(a).travel_time < net.arc(it->second).travel_time) {
      ed.remove_arc(it->second, act);
      it->second = a;
    } else {
      ed.remove_arc(a, act);
    }
  }
  return detail::commit(ed, std::move(act), net, log);
}

inline Network technique6(const Network& net, PruneLog& log) {
  PruneAction act;
  act.technique = 6;
  detail::NetworkEditor ed(net);
  for (ArcIndex a = 0; a < net.arc_count(); ++a)
    if (net.tail(a) == net.head(a)) ed.remove_arc(a, act);
  return detail::commit(ed, std::move(act), net, log);
}

inline Network technique7(const Network& net, PruneLog& log) {
  PruneAction act;
  act.technique = 7;
  detail::NetworkEditor ed(net);
  for (NodeIndex j = 0; j < ed.node_capacity(); ++j) {
    if (!ed.node_alive(j) || ed.node(j).kind != NodeKind::Transshipment || ed.has_loop(j)) continue;
    auto nb = ed.neighbors(j);
    if (nb.empty() || nb.size() > 2) continue;
    auto outs = ed.live_out(j), ins = ed.live_in(j);
    bool all_safe = true;
    for (ArcIndex a : outs) all_safe &= !ed.arc(a).vulnerable;
    for (ArcIndex a : ins) all_safe &= !ed.arc(a).vulnerable;
    if (!all_safe) continue;
    if (nb.size() == 1) {  // i = k: only a detour back to the same node
      ed.remove_node(j, act);
      continue;
    }
    std::vector<RoadArc> created;
    std::vector<Contraction> chains;
    for (auto [a, b] : {std::pair{nb[0], nb[1]}, std::pair{nb[1], nb[0]}}) {
      ArcIndex in_arc = kNone;
      for (ArcIndex x : ins)
        if (ed.tail(x) == a && (in_arc == kNone || ed.arc(x).travel_time < ed.arc(in_arc).travel_time))
          in_arc = x;
      ArcIndex out_arc = detail::cheapest_arc_to(ed, outs, b, true);
      if (in_arc == kNone || out_arc == kNone) continue;
      const RoadArc& first = ed.arc(in_arc);
      const RoadArc& second = ed.arc(out_arc);
      RoadArc merged;
      merged.tail = ed.node(a).id;
      merged.head = ed.node(b).id;
      merged.id = detail::fresh_arc_id(log, ed, merged.tail, merged.head);
      merged.travel_time = first.travel_time + second.travel_time;
      merged.vulnerable = false;
      merged.segment_id = merged.id;
      if (first.meta && second.meta) {
        ArcMeta m = *first.meta;
        m.length_miles = first.meta->length_miles + second.meta->length_miles;
        m.oneway = true;
        m.has_bridge = first.meta->has_bridge || second.meta->has_bridge;
        if (second.meta->name != first.meta->name) m.name = first.meta->name + " / " + second.meta->name;
        merged.meta = m;
      }
      Contraction c;
      c.new_arc = merged.id;
      for (auto& x : log.expand_arc(first.id)) c.chain.push_back(x);
      for (auto& x : log.expand_arc(second.id)) c.chain.push_back(x);
      chains.push_back(std::move(c));
      created.push_back(std::move(merged));
    }
    ed.remove_node(j, act);
    for (auto& arc : created) ed.add_arc(std::move(arc), act);
    for (auto& c : chains) {
      log.contraction_map[c.new_arc] = c.chain;
      act.contractions.push_back(std::move(c));
    }
  }
  return detail::commit(ed, std::move(act), net, log);
}

namespace detail {

inline std::vector<TriangleVi> harvest_triangles(const NetworkEditor& ed, bool remove,
                                                 PruneAction* act) {
  std::vector<TriangleVi> vis;
  std::set<TriangleVi> seen;
  for (ArcIndex ih = 0; ih < ed.arc_capacity(); ++ih) {
    if (!ed.arc_alive(ih) || ed.arc(ih).vulnerable) continue;
    const NodeIndex i = ed.tail(ih), h = ed.head(ih);
    if (i == h) continue;
    bool removed = false;
    for (ArcIndex ij : ed.live_out(i)) {
      if (removed) break;
      const NodeIndex j = ed.head(ij);
      if (j == i || j == h || ed.arc(ij).vulnerable) continue;
      for (ArcIndex jh : ed.live_out(j)) {
        if (ed.head(jh) != h || ed.arc(jh).vulnerable) continue;
        const double detour = ed.arc(ij).travel_time + ed.arc(jh).travel_time;
        if (ed.arc(ih).travel_time >= detour) {
          if (remove) {
            const_cast<NetworkEditor&>(ed).remove_arc(ih, *act);
            removed = true;
            break;
          }
          continue;
        }
        TriangleVi vi{ed.node(i).id, ed.node(j).id, ed.node(h).id,
                      ed.arc(ij).id, ed.arc(ih).id, ed.arc(jh).id};
        if (seen.insert(vi).second) vis.push_back(std::move(vi));
      }
    }
  }
  return vis;
}

}  // namespace detail

// Non-vulnerable triangle cuts of a network, without removing anything.
inline std::vector<TriangleVi> triangle_inequalities(const Network& net) {
  detail::NetworkEditor ed(net);
  auto vis = detail::harvest_triangles(ed, false, nullptr);
  std::sort(vis.begin(), vis.end());
  return vis;
}

inline Network technique8(const Network& net, PruneLog& log) {
  PruneAction act;
  act.technique = 8;
  detail::NetworkEditor ed(net);
  detail::harvest_triangles(ed, true, &act);
  Network out = detail::commit(ed, std::move(act), net, log);
  log.triangle_vis = triangle_inequalities(out);
  return out;
}

inline Network apply_technique(int technique, const Network& net, PruneLog& log) {
  switch (technique) {
    case 1: return technique1(net, log);
    case 2: return technique2(net, log);
    case 3: return technique3(net, log);
    case 4: return technique4(net, log);
    case 5: return technique5(net, log);
    case 6: return technique6(net, log);
    case 7: return technique7(net, log);
    case 8: return technique8(net, log);
    default: throw Error("unknown technique " + std::to_string(technique));
  }
}

inline constexpr std::array<int, 8> kTechniqueOrder{6, 5, 2, 1, 3, 4, 7, 8};

// Round-robin over the techniques until a whole round changes nothing.
inline PrunedNetwork prune_all(const Network& net) {
  PrunedNetwork out;
  out.stats.original = size_counts(net);
  Network cur = net;
  bool changed = true;
  while (changed) {
    changed = false;
    ++out.stats.rounds;
    for (int t : kTechniqueOrder) {
      const std::size_t before_actions = out.log.actions.size();
      const SizeCounts before = size_counts(cur);
      cur = apply_technique(t, cur, out.log);
      if (out.log.actions.size() != before_actions) {
        changed = true;
        const SizeCounts after = size_counts(cur);
        SizeCounts& e = out.stats.eliminated[t - 1];
        e.variables += before.variables - after.variables;
        e.nodes += before.nodes - after.nodes;
        e.arcs += before.arcs - after.arcs;
      }
    }
  }
  out.stats.pruned = size_counts(cur);
  out.network = std::move(cur);
  return out;
}

inline ProblemInstance with_network(const ProblemInstance& inst, Network net) {
  ProblemInstance out;
  out.network = std::move(net);
  out.budget = inst.budget;
  out.b_hat = inst.b_hat;
  out.spec = inst.spec;
  out.provenance = inst.provenance;
  return out;
}

// Re-applies a log to the network it was produced from. Within an action the
// order is merges, added arcs, removed arcs, removed nodes; surviving entries
// keep their relative order and added arcs go last, as in the pruned network.
inline Network replay(const Network& original, const PruneLog& log) {
  std::vector<RoadNode> nodes(original.nodes().begin(), original.nodes().end());
  std::vector<RoadArc> arcs(original.arcs().begin(), original.arcs().end());
  auto find_node = [&](const std::string& id) {
    return std::find_if(nodes.begin(), nodes.end(), [&](const RoadNode& n) { return n.id == id; });
  };
  for (const PruneAction& act : log.actions) {
    for (const auto& m : act.merges) {
      auto host = find_node(m.host);
      if (host == nodes.end()) throw Error("prune log merges into unknown host " + m.host);
      host->kind = NodeKind::Origin;
      host->residents = m.residents;
      host->weight = m.weight;
    }
    for (const auto& a : act.added_arcs) arcs.push_back(a);
    for (const auto& id : act.removed_arcs) {
      auto it = std::find_if(arcs.begin(), arcs.end(), [&](const RoadArc& a) { return a.id == id; });
      if (it == arcs.end()) throw Error("prune log removes unknown arc " + id);
      arcs.erase(it);
    }
    for (const auto& id : act.removed_nodes) {
      auto it = find_node(id);
      if (it == nodes.end()) throw Error("prune log removes unknown node " + id);
      nodes.erase(it);
    }
  }
  return Network(std::move(nodes), std::move(arcs));
}

// Lifts a solution of the pruned network onto the original one: contracted
// arcs expand to their chains, merged origins regain their pendant hops, and
// the objective picks up the merge offset.
inline Solution expand_solution(const Solution& sol, const PruneLog& log, const Network& original) {
  Solution out = sol;
  if (!has_solution(sol.status) && sol.assignment.empty()) {
    if (std::isfinite(out.best_bound)) out.best_bound += log.objective_offset;
    return out;
  }
  out.assignment.clear();
  out.paths.clear();
  for (const auto& [origin, dest] : sol.assignment) {
    std::string original_origin = origin;
    std::vector<std::string> path;
    if (auto it = log.lineage.find(origin); it != log.lineage.end()) {
      original_origin = it->second.original;
      path = it->second.prefix;
    }
    auto pit = sol.paths.find(origin);
    if (pit == sol.paths.end()) throw Error("solution has no path for origin " + origin);
    for (const auto& a : pit->second)
      for (auto& x : log.expand_arc(a)) path.push_back(x);
    for (const auto& a : path)
      if (!original.find_arc(a)) throw Error("prune log and solution disagree on arc " + a);
    if (!original.find_node(original_origin) || !original.find_node(dest))
      throw Error("prune log and solution disagree on origin " + origin);
    out.assignment[original_origin] = dest;
    out.paths[original_origin] = std::move(path);
  }
  if (std::isfinite(out.best_bound)) out.best_bound += log.objective_offset;
  // Equals the pruned objective plus the offset up to rounding; recomputed on
  // the original network so it matches an independent evaluation exactly.
  if (std::isfinite(out.objective)) {
    double total = 0.0;
    for (NodeIndex k : original.origins()) {
      auto it = out.paths.find(original.node(k).id);
      if (it == out.paths.end()) continue;
      double t = 0.0;
      for (const auto& a : it->second) t += original.arc(original.arc_index(a)).travel_time;
      total += original.node(k).weight * t;
    }
    out.objective = total;
  }
  return out;
}

inline nlohmann::ordered_json prune_log_to_json(const PruneLog& log) {
  nlohmann::ordered_json j;
  j["objective_offset"] = log.objective_offset;
  nlohmann::ordered_json acts = nlohmann::ordered_json::array();
  for (const auto& a : log.actions) {
    nlohmann::ordered_json ja;
    ja["technique"] = a.technique;
    ja["removed_nodes"] = a.removed_nodes;
    ja["removed_arcs"] = a.removed_arcs;
    nlohmann::ordered_json added = nlohmann::ordered_json::array();
    for (const auto& arc : a.added_arcs)
      added.push_back({{"id", arc.id}, {"from", arc.tail}, {"to", arc.head}, {"travel_time", arc.travel_time}});
    ja["added_arcs"] = std::move(added);
    nlohmann::ordered_json merges = nlohmann::ordered_json::array();
    for (const auto& m : a.merges)
      merges.push_back({{"origin", m.origin}, {"host", m.host}, {"out_arc", m.out_arc},
                        {"in_arc", m.in_arc}, {"offset", m.offset}});
    ja["merges"] = std::move(merges);
    nlohmann::ordered_json chains = nlohmann::ordered_json::array();
    for (const auto& c : a.contractions) chains.push_back({{"arc", c.new_arc}, {"chain", c.chain}});
    ja["contractions"] = std::move(chains);
    acts.push_back(std::move(ja));
  }
  j["actions"] = std::move(acts);
  nlohmann::ordered_json vis = nlohmann::ordered_json::array();
  for (const auto& v : log.triangle_vis) vis.push_back({v.i, v.j, v.h});
  j["triangle_vis"] = std::move(vis);
  return j;
}

}  // namespace rnfmp
