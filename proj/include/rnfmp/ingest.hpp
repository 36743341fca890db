#pragma once

// Network file loading and instance derivation: travel times from length
// and speed, mitigation costs per mile per lane, population-center
// selection, facility capacities, and budgets as fractions of the full
// upgrade cost.

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnfmp/instance.hpp"
#include "rnfmp/network.hpp"

namespace rnfmp {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::string json_id(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error("id must be a string or integer");
}

template <class T>
T field_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return it->get<T>();
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline json read_json_file(const std::filesystem::path& path) {
  std::string text = detail::read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

// Raw network: every node is a transshipment node until derivation; the
// `facility` flag and bed counts carry the facility designation.
inline Network parse_network(const json& doc) {
  if (!doc.is_object()) throw Error("network file must be a JSON object");
  if (detail::field_or<int>(doc, "schema_version", -1) != kSchemaVersion)
    throw Error("unsupported or missing schema_version (expected 1)");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw Error("network file lacks a nodes array");
  if (!doc.contains("arcs") || !doc["arcs"].is_array()) throw Error("network file lacks an arcs array");

  std::vector<RoadNode> nodes;
  std::set<std::string> node_ids;
  const json& jnodes = doc["nodes"];
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    const json& r = jnodes[i];
    const std::string where = "nodes[" + std::to_string(i) + "]";
    try {
      RoadNode n;
      n.id = detail::json_id(r.at("id"));
      n.residents = detail::field_or<double>(r, "residents", 0.0);
      if (!(n.residents >= 0)) throw Error("negative residents");
      if (r.contains("facility_beds") && !r["facility_beds"].is_null()) {
        n.beds = r["facility_beds"].get<double>();
        if (!(*n.beds >= 0)) throw Error("negative facility_beds");
      }
      if (r.contains("lon") && !r["lon"].is_null()) n.lon = r["lon"].get<double>();
      if (r.contains("lat") && !r["lat"].is_null()) n.lat = r["lat"].get<double>();
      if (!node_ids.insert(n.id).second) throw Error("duplicate node id " + n.id);
      nodes.push_back(std::move(n));
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    } catch (const json::exception& e) {
      throw Error(where + ": " + e.what());
    }
  }

  if (doc.contains("facilities")) {
    for (const json& f : doc["facilities"]) {
      std::string id = detail::json_id(f);
      auto it = std::find_if(nodes.begin(), nodes.end(), [&](const RoadNode& n) { return n.id == id; });
      if (it == nodes.end()) throw Error("facility " + id + " does not appear in nodes");
      it->facility = true;
    }
  }

  std::vector<RoadArc> arcs;
  std::set<std::string> arc_ids;
  const json& jarcs = doc["arcs"];
  for (std::size_t i = 0; i < jarcs.size(); ++i) {
    const json& r = jarcs[i];
    std::string where = "arcs[" + std::to_string(i) + "]";
    try {
      std::string id = detail::json_id(r.at("id"));
      where += " (id " + id + ")";
      ArcMeta meta;
      meta.length_miles = r.at("length_miles").get<double>();
      meta.speed_mph = r.at("speed_mph").get<double>();
      meta.lanes = detail::field_or<int>(r, "lanes", 1);
      meta.oneway = detail::field_or<bool>(r, "oneway", true);
      meta.has_bridge = detail::field_or<bool>(r, "has_bridge", false);
      meta.name = detail::field_or<std::string>(r, "name", "");
      if (r.contains("osmid") && !r["osmid"].is_null()) meta.osmid = detail::json_id(r["osmid"]);
      if (!(meta.length_miles > 0)) throw Error("nonpositive length");
      if (!(meta.speed_mph > 0)) throw Error("nonpositive speed");
      if (meta.lanes < 1) throw Error("lanes must be at least 1");
      std::string from = detail::json_id(r.at("from"));
      std::string to = detail::json_id(r.at("to"));
      if (!node_ids.count(from) || !node_ids.count(to)) throw Error("endpoint not among nodes");
      RoadArc arc;
      arc.tail = from;
      arc.head = to;
      arc.travel_time = 60.0 * meta.length_miles / meta.speed_mph;
      arc.vulnerable = detail::field_or<bool>(r, "vulnerable", false);
      arc.segment_id = r.contains("segment_id") && !r["segment_id"].is_null()
                           ? detail::json_id(r["segment_id"])
                           : id;
      arc.meta = meta;
      if (meta.oneway) {
        arc.id = id;
        if (!arc_ids.insert(arc.id).second) throw Error("duplicate arc id");
        arcs.push_back(std::move(arc));
      } else {
        RoadArc rev = arc;
        arc.id = id + ":f";
        rev.id = id + ":r";
        std::swap(rev.tail, rev.head);
        if (!arc_ids.insert(id).second || !arc_ids.insert(arc.id).second ||
            !arc_ids.insert(rev.id).second)
          throw Error("duplicate arc id");
        arcs.push_back(std::move(arc));
        arcs.push_back(std::move(rev));
      }
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    } catch (const json::exception& e) {
      throw Error(where + ": " + e.what());
    }
  }
  return Network(std::move(nodes), std::move(arcs));
}

inline Network load_network(const std::filesystem::path& path) {
  return parse_network(read_json_file(path));
}

// c_ij = unit_cost * length * lanes for every vulnerable arc. With segment
// coupling the directed arcs of a segment keep the same per-arc figure and
// the upgrade unit charges it once.
inline Network derive_costs(const Network& net, double unit_cost, bool segment_coupling = false) {
  (void)segment_coupling;
  if (!(unit_cost >= 0)) throw Error("unit_cost must be nonnegative");
  std::vector<RoadNode> nodes(net.nodes().begin(), net.nodes().end());
  std::vector<RoadArc> arcs(net.arcs().begin(), net.arcs().end());
  for (RoadArc& a : arcs) {
    if (!a.vulnerable) {
      a.mitigation_cost = 0.0;
      continue;
    }
    if (!a.meta || !(a.meta->length_miles > 0) || a.meta->lanes < 1)
      throw Error("vulnerable arc " + a.id + " lacks length/lanes metadata");
    a.mitigation_cost = unit_cost * a.meta->length_miles * a.meta->lanes;
  }
  return Network(std::move(nodes), std::move(arcs));
}

inline Network restrict_facilities(const Network& net, const std::vector<std::string>& subset) {
  if (subset.empty()) return net;
  std::set<std::string> keep(subset.begin(), subset.end());
  for (const auto& id : keep) {
    auto v = net.find_node(id);
    if (!v || !net.node(*v).facility) throw Error("facility subset names a non-facility node: " + id);
  }
  std::vector<RoadNode> nodes(net.nodes().begin(), net.nodes().end());
  for (RoadNode& n : nodes) {
    if (n.facility && !keep.count(n.id)) {
      n.facility = false;
      if (n.kind == NodeKind::Destination) {
        n.kind = NodeKind::Transshipment;
        n.capacity = kInfinity;
      }
    }
  }
  return Network(std::move(nodes), std::vector<RoadArc>(net.arcs().begin(), net.arcs().end()));
}

// Nodes with residents >= p (and at least one resident) become origins;
// facilities become destinations; everything else is transshipment and its
// residents are dropped from the model.
inline Network select_origins(const Network& net, int p, WeightPolicy policy = WeightPolicy::WEqualsH) {
  if (p < 0) throw Error("population threshold p must be nonnegative");
  std::vector<RoadNode> nodes(net.nodes().begin(), net.nodes().end());
  for (RoadNode& n : nodes) {
    n.capacity = kInfinity;
    if (n.facility) {
      n.kind = NodeKind::Destination;
      n.residents = 0.0;
      n.weight = 0.0;
    } else if (n.residents > 0 && n.residents >= p) {
      n.kind = NodeKind::Origin;
      n.weight = policy == WeightPolicy::WEqualsH ? n.residents : 1.0;
    } else {
      n.kind = NodeKind::Transshipment;
      n.residents = 0.0;
      n.weight = 0.0;
    }
  }
  return Network(std::move(nodes), std::vector<RoadArc>(net.arcs().begin(), net.arcs().end()));
}

inline Network assign_capacities(const Network& net, double alpha, CapacityPolicy policy) {
  if (!(alpha >= 0)) throw Error("alpha must be nonnegative");
  if (net.destinations().empty()) throw Error("no destinations to receive capacity");
  double total_residents = 0.0;
  for (NodeIndex k : net.origins()) total_residents += net.node(k).residents;
  const double total_capacity = (1.0 + alpha) * total_residents;
  std::vector<RoadNode> nodes(net.nodes().begin(), net.nodes().end());
  if (policy == CapacityPolicy::Identical) {
    const double each = total_capacity / static_cast<double>(net.destinations().size());
    for (NodeIndex d : net.destinations()) nodes[d].capacity = each;
  } else {
    double beds = 0.0;
    for (NodeIndex d : net.destinations()) {
      if (!net.node(d).beds) throw Error("bed-proportional capacity needs beds for " + net.node(d).id);
      beds += *net.node(d).beds;
    }
    if (!(beds > 0)) throw Error("bed-proportional capacity needs a positive bed total");
    for (NodeIndex d : net.destinations()) nodes[d].capacity = total_capacity * *net.node(d).beds / beds;
  }
  return Network(std::move(nodes), std::vector<RoadArc>(net.arcs().begin(), net.arcs().end()));
}

inline ProblemInstance build_instance(Network net, const InstanceSpec& spec, Provenance provenance = {}) {
  spec.validate();
  if (net.origins().empty() || net.destinations().empty()) throw Error("degenerate instance");
  for (const RoadNode& n : net.nodes()) {
    if (n.residents > 0 && n.kind != NodeKind::Origin)
      throw Error("node " + n.id + " has residents but is not an origin");
    if (n.kind == NodeKind::Destination && !std::isfinite(n.capacity))
      throw Error("destination " + n.id + " has no capacity");
  }
  ProblemInstance inst;
  inst.b_hat = total_upgrade_cost(net, spec.segment_coupling);
  inst.budget = spec.budget_fraction * inst.b_hat;
  inst.network = std::move(net);
  inst.spec = spec;
  inst.provenance = std::move(provenance);
  return inst;
}

// Full derivation from a raw network for one parameter combination.
inline ProblemInstance derive_instance(const Network& raw, const InstanceSpec& spec,
                                       const std::string& source = {}) {
  spec.validate();
  Provenance prov;
  prov.source = source;
  Network net = restrict_facilities(raw, spec.facility_subset);
  if (!spec.facility_subset.empty())
    prov.log.push_back("facility subset of size " + std::to_string(spec.facility_subset.size()));
  net = select_origins(net, spec.p, spec.weight_policy);
  prov.log.push_back("origins selected with p=" + std::to_string(spec.p) + ": " +
                     std::to_string(net.origins().size()) + " origins, " +
                     std::to_string(net.destinations().size()) + " destinations");
  if (net.destinations().empty()) throw Error("degenerate instance");
  net = assign_capacities(net, spec.alpha, spec.capacity_policy);
  prov.log.push_back("capacities assigned (" + std::string(to_string(spec.capacity_policy)) + ")");
  net = derive_costs(net, spec.unit_cost, spec.segment_coupling);
  prov.log.push_back("mitigation costs derived");
  return build_instance(std::move(net), spec, std::move(prov));
}

}  // namespace rnfmp
