#pragma once

// Road network model: nodes, arcs, adjacency, and the graph primitives the
// rest of the library is built on (shortest paths, articulation points,
// components after a vertex deletion, reachability).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rnfmp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kTolerance = 1e-9;

using NodeIndex = std::size_t;
using ArcIndex = std::size_t;
inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { Origin, Transshipment, Destination };

inline std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Origin: return "origin";
    case NodeKind::Transshipment: return "transshipment";
    case NodeKind::Destination: return "destination";
  }
  return "transshipment";
}

inline NodeKind node_kind_from_string(std::string_view s) {
  if (s == "origin") return NodeKind::Origin;
  if (s == "transshipment") return NodeKind::Transshipment;
  if (s == "destination") return NodeKind::Destination;
  throw Error("unknown node kind: " + std::string(s));
}

struct RoadNode {
  std::string id;
  NodeKind kind = NodeKind::Transshipment;
  double residents = 0.0;
  double capacity = kInfinity;
  double weight = 0.0;
  // Designated healthcare facility (becomes a destination during derivation).
  bool facility = false;
  std::optional<double> beds;
  std::optional<double> lon;
  std::optional<double> lat;
};

// Descriptive road attributes; only length and lanes feed the cost model.
struct ArcMeta {
  std::string name;
  std::string osmid;
  double length_miles = 0.0;
  int lanes = 1;
  double speed_mph = 0.0;
  bool oneway = true;
  bool has_bridge = false;
};

struct RoadArc {
  std::string id;
  std::string tail;
  std::string head;
  double travel_time = 0.0;  // minutes
  bool vulnerable = false;
  double mitigation_cost = 0.0;  // dollars
  std::string segment_id;
  std::optional<ArcMeta> meta;
};

// Immutable directed multigraph. Nodes and arcs are stored sorted by id, so
// index order is id order and every traversal below is deterministic.
class Network {
 public:
  Network() = default;

  Network(std::vector<RoadNode> nodes, std::vector<RoadArc> arcs)
      : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
    std::sort(nodes_.begin(), nodes_.end(),
              [](const RoadNode& a, const RoadNode& b) { return a.id < b.id; });
    std::sort(arcs_.begin(), arcs_.end(),
              [](const RoadArc& a, const RoadArc& b) { return a.id < b.id; });
    for (NodeIndex v = 0; v < nodes_.size(); ++v) {
      const RoadNode& n = nodes_[v];
      if (!node_lookup_.emplace(n.id, v).second) throw Error("duplicate node id: " + n.id);
      if (n.residents < 0 || n.weight < 0 || n.capacity < 0)
        throw Error("negative node attribute on " + n.id);
      if (std::isfinite(n.capacity) && n.kind != NodeKind::Destination)
        throw Error("finite capacity on non-destination node " + n.id);
      if (n.weight > 0 && n.kind != NodeKind::Origin)
        throw Error("positive weight on non-origin node " + n.id);
      if (n.kind == NodeKind::Origin) origins_.push_back(v);
      if (n.kind == NodeKind::Destination) destinations_.push_back(v);
    }
    out_.resize(nodes_.size());
    in_.resize(nodes_.size());
    tails_.reserve(arcs_.size());
    heads_.reserve(arcs_.size());
    for (ArcIndex a = 0; a < arcs_.size(); ++a) {
      RoadArc& arc = arcs_[a];
      if (!arc_lookup_.emplace(arc.id, a).second) throw Error("duplicate arc id: " + arc.id);
      auto t = node_lookup_.find(arc.tail);
      auto h = node_lookup_.find(arc.head);
      if (t == node_lookup_.end() || h == node_lookup_.end())
        throw Error("arc " + arc.id + " references unknown node");
      if (!(arc.travel_time >= 0) || !std::isfinite(arc.travel_time))
        throw Error("invalid travel time on arc " + arc.id);
      if (!(arc.mitigation_cost >= 0)) throw Error("negative mitigation cost on arc " + arc.id);
      if (!arc.vulnerable && arc.mitigation_cost != 0.0)
        throw Error("non-vulnerable arc " + arc.id + " carries a mitigation cost");
      if (arc.segment_id.empty()) arc.segment_id = arc.id;
      tails_.push_back(t->second);
      heads_.push_back(h->second);
      out_[t->second].push_back(a);
      in_[h->second].push_back(a);
      if (arc.vulnerable) ++vulnerable_count_;
    }
  }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  std::size_t vulnerable_count() const { return vulnerable_count_; }

  std::span<const RoadNode> nodes() const { return nodes_; }
  std::span<const RoadArc> arcs() const { return arcs_; }
  const RoadNode& node(NodeIndex v) const { return nodes_.at(v); }
  const RoadArc& arc(ArcIndex a) const { return arcs_.at(a); }

  NodeIndex tail(ArcIndex a) const { return tails_[a]; }
  NodeIndex head(ArcIndex a) const { return heads_[a]; }
  std::span<const ArcIndex> out_arcs(NodeIndex v) const { return out_[v]; }
  std::span<const ArcIndex> in_arcs(NodeIndex v) const { return in_[v]; }

  std::optional<NodeIndex> find_node(std::string_view id) const {
    auto it = node_lookup_.find(std::string(id));
    if (it == node_lookup_.end()) return std::nullopt;
    return it->second;
  }
  NodeIndex node_index(std::string_view id) const {
    auto v = find_node(id);
    if (!v) throw Error("unknown node: " + std::string(id));
    return *v;
  }
  std::optional<ArcIndex> find_arc(std::string_view id) const {
    auto it = arc_lookup_.find(std::string(id));
    if (it == arc_lookup_.end()) return std::nullopt;
    return it->second;
  }
  ArcIndex arc_index(std::string_view id) const {
    auto a = find_arc(id);
    if (!a) throw Error("unknown arc: " + std::string(id));
    return *a;
  }

  const std::vector<NodeIndex>& origins() const { return origins_; }
  const std::vector<NodeIndex>& destinations() const { return destinations_; }

 private:
  std::vector<RoadNode> nodes_;
  std::vector<RoadArc> arcs_;
  std::vector<NodeIndex> tails_;
  std::vector<NodeIndex> heads_;
  std::vector<std::vector<ArcIndex>> out_;
  std::vector<std::vector<ArcIndex>> in_;
  std::unordered_map<std::string, NodeIndex> node_lookup_;
  std::unordered_map<std::string, ArcIndex> arc_lookup_;
  std::vector<NodeIndex> origins_;
  std::vector<NodeIndex> destinations_;
  std::size_t vulnerable_count_ = 0;
};

// Which arcs a traversal may use: the flooded network (non-vulnerable arcs
// only), the fully upgraded network, or the flooded network plus a chosen
// set of upgraded vulnerable arcs.
class ArcFilter {
 public:
  enum class Mode { NonVulnerableOnly, All, UpgradedSet };

  static ArcFilter non_vulnerable_only() { return ArcFilter(Mode::NonVulnerableOnly, {}); }
  static ArcFilter all() { return ArcFilter(Mode::All, {}); }
  static ArcFilter upgraded(std::set<std::string> arc_ids) {
    return ArcFilter(Mode::UpgradedSet, std::move(arc_ids));
  }

  Mode mode() const { return mode_; }
  const std::set<std::string>& upgraded_ids() const { return upgraded_; }

  // One flag per arc; throws if an upgraded id is unknown or not vulnerable.
  std::vector<char> admissible(const Network& net) const {
    std::vector<char> ok(net.arc_count(), 0);
    for (ArcIndex a = 0; a < net.arc_count(); ++a) {
      const bool vuln = net.arc(a).vulnerable;
      ok[a] = (mode_ == Mode::All || !vuln) ? 1 : 0;
    }
    if (mode_ == Mode::UpgradedSet) {
      for (const auto& id : upgraded_) {
        ArcIndex a = net.arc_index(id);
        if (!net.arc(a).vulnerable) throw Error("upgraded set contains non-vulnerable arc " + id);
        ok[a] = 1;
      }
    }
    return ok;
  }

 private:
  ArcFilter(Mode mode, std::set<std::string> ids) : mode_(mode), upgraded_(std::move(ids)) {}
  Mode mode_;
  std::set<std::string> upgraded_;
};

struct ShortestPathTree {
  NodeIndex source = kNone;
  std::vector<double> dist;
  std::vector<ArcIndex> pred_arc;

  bool reachable(NodeIndex v) const { return std::isfinite(dist[v]); }

  template <class Net>
  std::vector<ArcIndex> path_to(const Net& net, NodeIndex v) const {
    std::vector<ArcIndex> path;
    if (!reachable(v)) return path;
    while (v != source) {
      ArcIndex a = pred_arc[v];
      path.push_back(a);
      v = net.tail(a);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }
};

namespace detail {

inline bool nearly_equal_distance(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Lexicographic comparison of the arc sequences source->u + arc_u and
// source->w + arc_w. Used only to break exact distance ties.
inline bool lex_smaller_path(const Network& net, const ShortestPathTree& tree, NodeIndex u,
                             ArcIndex arc_u, NodeIndex w, ArcIndex arc_w) {
  auto seq = [&](NodeIndex x, ArcIndex last) {
    std::vector<ArcIndex> s = tree.path_to(net, x);
    s.push_back(last);
    return s;
  };
  auto a = seq(u, arc_u);
  auto b = seq(w, arc_w);
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

// Dijkstra over the admitted arcs. Distance ties are resolved towards the
// lexicographically smallest arc-index path (= arc-id path), so reported
// routes are reproducible.
inline ShortestPathTree shortest_path_tree(const Network& net, NodeIndex source,
                                           std::span<const char> admissible) {
  if (source >= net.node_count()) throw Error("unknown node");
  ShortestPathTree tree;
  tree.source = source;
  tree.dist.assign(net.node_count(), kInfinity);
  tree.pred_arc.assign(net.node_count(), kNone);
  std::vector<char> done(net.node_count(), 0);
  using Item = std::pair<double, NodeIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  tree.dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (done[u] || d > tree.dist[u]) continue;
    done[u] = 1;
    d = tree.dist[u];
    for (ArcIndex a : net.out_arcs(u)) {
      if (!admissible[a]) continue;
      NodeIndex v = net.head(a);
      if (done[v]) continue;
      double nd = d + net.arc(a).travel_time;
      if (!std::isfinite(tree.dist[v]) ||
          (nd < tree.dist[v] && !detail::nearly_equal_distance(nd, tree.dist[v]))) {
        tree.dist[v] = nd;
        tree.pred_arc[v] = a;
        heap.emplace(nd, v);
      } else if (detail::nearly_equal_distance(nd, tree.dist[v])) {
        ArcIndex cur = tree.pred_arc[v];
        if (detail::lex_smaller_path(net, tree, u, a, net.tail(cur), cur)) {
          // dist stays the exact sum along the recorded path
          tree.dist[v] = nd;
          tree.pred_arc[v] = a;
          heap.emplace(nd, v);  // the old entry may now look stale
        }
      }
    }
  }
  return tree;
}

inline std::map<std::string, double> shortest_paths(const Network& net, std::string_view source,
                                                    const ArcFilter& filter) {
  NodeIndex s = net.node_index(source);
  auto ok = filter.admissible(net);
  auto tree = shortest_path_tree(net, s, ok);
  std::map<std::string, double> out;
  for (NodeIndex v = 0; v < net.node_count(); ++v)
    if (tree.reachable(v)) out.emplace(net.node(v).id, tree.dist[v]);
  return out;
}

// Underlying undirected simple graph (parallel arcs and opposite directions
// collapse, loops dropped). Neighbor lists are sorted.
inline std::vector<std::vector<NodeIndex>> undirected_neighbors(const Network& net) {
  std::vector<std::vector<NodeIndex>> nb(net.node_count());
  for (ArcIndex a = 0; a < net.arc_count(); ++a) {
    NodeIndex u = net.tail(a), v = net.head(a);
    if (u == v) continue;
    nb[u].push_back(v);
    nb[v].push_back(u);
  }
  for (auto& list : nb) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return nb;
}

// Tarjan's low-link articulation points, iterative DFS, O(|N| + |A|).
inline std::vector<NodeIndex> articulation_point_indices(const Network& net) {
  const std::size_t n = net.node_count();
  auto nb = undirected_neighbors(net);
  std::vector<std::size_t> disc(n, kNone), low(n, 0), parent(n, kNone), next_child(n, 0);
  std::vector<std::size_t> child_count(n, 0);
  std::vector<char> is_ap(n, 0);
  std::size_t timer = 0;
  std::vector<NodeIndex> stack;
  for (NodeIndex root = 0; root < n; ++root) {
    if (disc[root] != kNone) continue;
    disc[root] = low[root] = timer++;
    stack.push_back(root);
    while (!stack.empty()) {
      NodeIndex u = stack.back();
      if (next_child[u] < nb[u].size()) {
        NodeIndex v = nb[u][next_child[u]++];
        if (disc[v] == kNone) {
          parent[v] = u;
          ++child_count[u];
          disc[v] = low[v] = timer++;
          stack.push_back(v);
        } else if (v != parent[u]) {
          low[u] = std::min(low[u], disc[v]);
        }
      } else {
        stack.pop_back();
        NodeIndex p = parent[u];
        if (p != kNone) {
          low[p] = std::min(low[p], low[u]);
          if (parent[p] != kNone && low[u] >= disc[p]) is_ap[p] = 1;
        }
      }
    }
    if (child_count[root] > 1) is_ap[root] = 1;
  }
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < n; ++v)
    if (is_ap[v]) out.push_back(v);
  return out;
}

inline std::set<std::string> articulation_points(const Network& net) {
  std::set<std::string> out;
  for (NodeIndex v : articulation_point_indices(net)) out.insert(net.node(v).id);
  return out;
}

struct Component {
  std::vector<NodeIndex> nodes;  // sorted
  std::vector<ArcIndex> arcs;    // arcs with both endpoints inside, sorted
};

// Connected components of the undirected graph G - removed, ordered by their
// smallest node index.
inline std::vector<Component> components_without(const Network& net, NodeIndex removed) {
  if (removed >= net.node_count()) throw Error("unknown node");
  const std::size_t n = net.node_count();
  auto nb = undirected_neighbors(net);
  std::vector<std::size_t> comp(n, kNone);
  std::vector<Component> out;
  for (NodeIndex s = 0; s < n; ++s) {
    if (s == removed || comp[s] != kNone) continue;
    const std::size_t id = out.size();
    out.emplace_back();
    std::vector<NodeIndex> queue{s};
    comp[s] = id;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      NodeIndex u = queue[qi];
      for (NodeIndex v : nb[u]) {
        if (v == removed || comp[v] != kNone) continue;
        comp[v] = id;
        queue.push_back(v);
      }
    }
    std::sort(queue.begin(), queue.end());
    out.back().nodes = std::move(queue);
  }
  for (ArcIndex a = 0; a < net.arc_count(); ++a) {
    NodeIndex u = net.tail(a), v = net.head(a);
    if (u == removed || v == removed) continue;
    if (comp[u] == comp[v]) out[comp[u]].arcs.push_back(a);
  }
  return out;
}

inline std::vector<Component> components_without(const Network& net, std::string_view removed) {
  return components_without(net, net.node_index(removed));
}

inline std::set<std::string> reachable_destinations(const Network& net, std::string_view origin,
                                                    const ArcFilter& filter) {
  NodeIndex k = net.node_index(origin);
  if (net.node(k).kind != NodeKind::Origin) throw Error("node " + std::string(origin) + " is not an origin");
  auto ok = filter.admissible(net);
  auto tree = shortest_path_tree(net, k, ok);
  std::set<std::string> out;
  for (NodeIndex d : net.destinations())
    if (tree.reachable(d)) out.insert(net.node(d).id);
  return out;
}

inline double path_time(const Network& net, std::span<const ArcIndex> path) {
  double t = 0.0;
  for (ArcIndex a : path) t += net.arc(a).travel_time;
  return t;
}

}  // namespace rnfmp
