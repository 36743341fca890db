#pragma once

// JSON forms of a derived problem instance and of an InstanceSpec. The
// instance form is what `rnfmp ingest` writes and what every other command
// accepts in place of a raw network file.

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "rnfmp/ingest.hpp"
#include "rnfmp/instance.hpp"

namespace rnfmp {

using ojson = nlohmann::ordered_json;

inline ojson spec_to_json(const InstanceSpec& s) {
  ojson j;
  j["p"] = s.p;
  j["alpha"] = s.alpha;
  j["capacity_policy"] = std::string(to_string(s.capacity_policy));
  j["budget_fraction"] = s.budget_fraction;
  j["weight_policy"] = std::string(to_string(s.weight_policy));
  j["unit_cost"] = s.unit_cost;
  j["segment_coupling"] = s.segment_coupling;
  j["facility_subset"] = s.facility_subset;
  return j;
}

template <class Json>
InstanceSpec spec_from_json(const Json& j, InstanceSpec base = {}) {
  InstanceSpec s = base;
  if (j.contains("p")) s.p = j["p"].template get<int>();
  if (j.contains("alpha")) s.alpha = j["alpha"].template get<double>();
  if (j.contains("capacity_policy"))
    s.capacity_policy = capacity_policy_from_string(j["capacity_policy"].template get<std::string>());
  if (j.contains("budget_fraction")) s.budget_fraction = j["budget_fraction"].template get<double>();
  if (j.contains("weight_policy"))
    s.weight_policy = weight_policy_from_string(j["weight_policy"].template get<std::string>());
  if (j.contains("unit_cost")) s.unit_cost = j["unit_cost"].template get<double>();
  if (j.contains("segment_coupling")) s.segment_coupling = j["segment_coupling"].template get<bool>();
  if (j.contains("facility_subset"))
    s.facility_subset = j["facility_subset"].template get<std::vector<std::string>>();
  s.validate();
  return s;
}

inline ojson network_to_json(const Network& net) {
  ojson nodes = ojson::array();
  for (const RoadNode& n : net.nodes()) {
    ojson jn;
    jn["id"] = n.id;
    jn["kind"] = std::string(to_string(n.kind));
    jn["residents"] = n.residents;
    jn["weight"] = n.weight;
    if (std::isfinite(n.capacity)) jn["capacity"] = n.capacity;
    else jn["capacity"] = nullptr;
    jn["facility"] = n.facility;
    if (n.beds) jn["beds"] = *n.beds;
    if (n.lon) jn["lon"] = *n.lon;
    if (n.lat) jn["lat"] = *n.lat;
    nodes.push_back(std::move(jn));
  }
  ojson arcs = ojson::array();
  for (const RoadArc& a : net.arcs()) {
    ojson ja;
    ja["id"] = a.id;
    ja["from"] = a.tail;
    ja["to"] = a.head;
    ja["travel_time"] = a.travel_time;
    ja["vulnerable"] = a.vulnerable;
    ja["cost"] = a.mitigation_cost;
    ja["segment_id"] = a.segment_id;
    if (a.meta) {
      ojson m;
      m["name"] = a.meta->name;
      m["osmid"] = a.meta->osmid;
      m["length_miles"] = a.meta->length_miles;
      m["lanes"] = a.meta->lanes;
      m["speed_mph"] = a.meta->speed_mph;
      m["oneway"] = a.meta->oneway;
      m["has_bridge"] = a.meta->has_bridge;
      ja["meta"] = std::move(m);
    }
    arcs.push_back(std::move(ja));
  }
  ojson j;
  j["nodes"] = std::move(nodes);
  j["arcs"] = std::move(arcs);
  return j;
}

template <class Json>
Network network_from_instance_json(const Json& j) {
  std::vector<RoadNode> nodes;
  for (const auto& jn : j.at("nodes")) {
    RoadNode n;
    n.id = detail::json_id(jn.at("id"));
    n.kind = node_kind_from_string(jn.value("kind", std::string("transshipment")));
    n.residents = jn.value("residents", 0.0);
    n.weight = jn.value("weight", 0.0);
    if (jn.contains("capacity") && !jn["capacity"].is_null()) n.capacity = jn["capacity"].template get<double>();
    n.facility = jn.value("facility", n.kind == NodeKind::Destination);
    if (jn.contains("beds")) n.beds = jn["beds"].template get<double>();
    if (jn.contains("lon")) n.lon = jn["lon"].template get<double>();
    if (jn.contains("lat")) n.lat = jn["lat"].template get<double>();
    nodes.push_back(std::move(n));
  }
  std::vector<RoadArc> arcs;
  for (const auto& ja : j.at("arcs")) {
    RoadArc a;
    a.id = detail::json_id(ja.at("id"));
    a.tail = detail::json_id(ja.at("from"));
    a.head = detail::json_id(ja.at("to"));
    a.travel_time = ja.at("travel_time").template get<double>();
    a.vulnerable = ja.value("vulnerable", false);
    a.mitigation_cost = ja.value("cost", 0.0);
    a.segment_id = ja.contains("segment_id") ? detail::json_id(ja["segment_id"]) : a.id;
    if (ja.contains("meta")) {
      const auto& m = ja["meta"];
      ArcMeta meta;
      meta.name = m.value("name", std::string());
      meta.osmid = m.value("osmid", std::string());
      meta.length_miles = m.value("length_miles", 0.0);
      meta.lanes = m.value("lanes", 1);
      meta.speed_mph = m.value("speed_mph", 0.0);
      meta.oneway = m.value("oneway", true);
      meta.has_bridge = m.value("has_bridge", false);
      a.meta = meta;
    }
    arcs.push_back(std::move(a));
  }
  return Network(std::move(nodes), std::move(arcs));
}

inline ojson instance_to_json(const ProblemInstance& inst, bool with_provenance = true) {
  ojson j;
  j["format"] = "rnfmp-instance";
  j["schema_version"] = kSchemaVersion;
  j["budget"] = inst.budget;
  j["b_hat"] = inst.b_hat;
  j["spec"] = spec_to_json(inst.spec);
  ojson net = network_to_json(inst.network);
  j["nodes"] = std::move(net["nodes"]);
  j["arcs"] = std::move(net["arcs"]);
  if (with_provenance) {
    ojson p;
    p["source"] = inst.provenance.source;
    p["log"] = inst.provenance.log;
    j["provenance"] = std::move(p);
  }
  return j;
}

template <class Json>
ProblemInstance instance_from_json(const Json& j) {
  if (j.value("schema_version", -1) != kSchemaVersion)
    throw Error("unsupported or missing schema_version (expected 1)");
  ProblemInstance inst;
  inst.network = network_from_instance_json(j);
  inst.spec = j.contains("spec") ? spec_from_json(j["spec"]) : InstanceSpec{};
  inst.b_hat = j.contains("b_hat") ? j["b_hat"].template get<double>()
                                   : total_upgrade_cost(inst.network, inst.spec.segment_coupling);
  inst.budget = j.contains("budget") ? j["budget"].template get<double>()
                                     : inst.spec.budget_fraction * inst.b_hat;
  if (j.contains("provenance")) {
    inst.provenance.source = j["provenance"].value("source", std::string());
    if (j["provenance"].contains("log"))
      inst.provenance.log = j["provenance"]["log"].template get<std::vector<std::string>>();
  }
  if (inst.network.origins().empty() || inst.network.destinations().empty())
    throw Error("degenerate instance");
  return inst;
}

inline bool is_instance_document(const json& j) {
  return j.is_object() && j.value("format", std::string()) == "rnfmp-instance";
}

// Reads either a derived instance file (used as-is, with the budget
// re-derived only when a fraction override is given) or a raw network file
// (derived with `spec`).
inline ProblemInstance load_instance(const std::filesystem::path& path, const InstanceSpec& spec,
                                     bool override_budget_fraction = false) {
  json doc = read_json_file(path);
  if (is_instance_document(doc)) {
    ProblemInstance inst = instance_from_json(doc);
    if (override_budget_fraction) {
      inst.spec.budget_fraction = spec.budget_fraction;
      inst.budget = spec.budget_fraction * inst.b_hat;
    }
    if (inst.provenance.source.empty()) inst.provenance.source = path.string();
    return inst;
  }
  Network raw = parse_network(doc);
  return derive_instance(raw, spec, path.string());
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << text;
  if (!out) throw Error("failed writing file: " + path.string());
}

}  // namespace rnfmp
