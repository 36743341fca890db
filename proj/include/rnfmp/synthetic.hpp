#pragma once

// Seeded synthetic road networks in the raw network-file format.
//
// grid_network: a rows x cols street grid with a river running east-west
// through the middle. Every road crossing the river is a bridge; all but a
// few "high" bridges are vulnerable, and roads along the banks flood with a
// fixed probability. Facilities sit on both banks. On top of the grid the
// generator adds the shapes the pruning passes look for: dead-end chains,
// pendant settlements, loops, duplicated roads and diagonal shortcuts.
//
// budget_paradox_network: a three-route network on which a small budget buys
// two cheap roads while a larger one buys a single expensive road.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the standard; floats are built from raw draws so files are identical on
// every platform.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnfmp/network.hpp"

namespace rnfmp {

struct SyntheticSpec {
  int rows = 6;
  int cols = 6;
  std::uint64_t seed = 1;
  int facilities = 3;
  int high_bridges = 2;          // river crossings that never flood
  double bank_flood_rate = 0.3;  // chance a road along either bank floods
  double settlement_rate = 0.35; // chance a grid node has residents
  int dead_end_chains = 3;
  int pendant_settlements = 3;
  int loops = 2;
  int duplicate_roads = 2;
  int diagonals = 4;
};

namespace detail {

class SeededDraws {
 public:
  explicit SeededDraws(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  // Integer in [lo, hi].
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Rounded to 1/1000 so files stay short and readable.
  double milli(double lo, double hi) { return std::round(range(lo, hi) * 1000.0) / 1000.0; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace detail

inline nlohmann::ordered_json grid_network(const SyntheticSpec& spec) {
  if (spec.rows < 2 || spec.cols < 2) throw Error("synthetic grid needs at least 2 rows and 2 columns");
  using oj = nlohmann::ordered_json;
  detail::SeededDraws rng(spec.seed);
  const int river = spec.rows / 2;  // roads between row river-1 and river cross it
  auto node_id = [](int r, int c) { return "n" + std::to_string(r) + "_" + std::to_string(c); };

  oj nodes = oj::array();
  std::vector<std::string> facility_ids;
  std::vector<std::pair<int, int>> facility_cells;
  for (int f = 0; f < spec.facilities; ++f) {
    // Alternate banks, spread across columns.
    int r = (f % 2 == 0) ? river / 2 : river + (spec.rows - river) / 2;
    int c = static_cast<int>((static_cast<long long>(2 * f + 1) * spec.cols) / (2 * spec.facilities));
    facility_cells.push_back({r, c});
  }
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c < spec.cols; ++c) {
      oj n;
      n["id"] = node_id(r, c);
      const bool is_facility = std::find(facility_cells.begin(), facility_cells.end(), std::pair{r, c}) != facility_cells.end();
      if (is_facility) {
        n["residents"] = 0;
        n["facility_beds"] = rng.range(50LL, 800LL);
        facility_ids.push_back(node_id(r, c));
      } else if (rng.uniform() < spec.settlement_rate) {
        n["residents"] = rng.range(1LL, 120LL);
      } else {
        n["residents"] = 0;
      }
      n["lon"] = -91.6 + 0.01 * c;
      n["lat"] = 41.7 - 0.01 * r;
      nodes.push_back(std::move(n));
    }

  oj arcs = oj::array();
  int serial = 0;
  auto road = [&](const std::string& from, const std::string& to, double len, double speed, int lanes,
                  bool oneway, bool vulnerable, bool bridge, const std::string& name) {
    oj a;
    a["id"] = "r" + std::to_string(serial++);
    a["from"] = from;
    a["to"] = to;
    a["length_miles"] = len;
    a["speed_mph"] = speed;
    a["lanes"] = lanes;
    a["oneway"] = oneway;
    a["vulnerable"] = vulnerable;
    a["has_bridge"] = bridge;
    a["name"] = name;
    a["osmid"] = std::to_string(100000 + serial);
    arcs.push_back(std::move(a));
  };
  const double speeds[] = {25.0, 35.0, 45.0, 55.0};
  std::vector<int> high;
  for (int b = 0; b < spec.high_bridges && b < spec.cols; ++b)
    high.push_back(static_cast<int>((static_cast<long long>(2 * b + 1) * spec.cols) / (2 * spec.high_bridges)));

  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c < spec.cols; ++c) {
      // east
      if (c + 1 < spec.cols) {
        const bool bank = r == river - 1 || r == river;
        const bool flood = bank && rng.uniform() < spec.bank_flood_rate;
        road(node_id(r, c), node_id(r, c + 1), rng.milli(0.2, 0.9), speeds[rng.range(0LL, 3LL)],
             static_cast<int>(rng.range(1LL, 2LL)), false, flood, false, "Street " + std::to_string(r));
      }
      // south
      if (r + 1 < spec.rows) {
        const bool crossing = r == river - 1;
        const bool safe_bridge = std::find(high.begin(), high.end(), c) != high.end();
        road(node_id(r, c), node_id(r + 1, c), rng.milli(0.2, 0.9), speeds[rng.range(0LL, 3LL)],
             static_cast<int>(rng.range(1LL, 3LL)), false, crossing && !safe_bridge, crossing,
             crossing ? "Bridge " + std::to_string(c) : "Avenue " + std::to_string(c));
      }
    }

  auto random_cell = [&]() {
    return node_id(static_cast<int>(rng.range(0LL, spec.rows - 1)), static_cast<int>(rng.range(0LL, spec.cols - 1)));
  };
  for (int d = 0; d < spec.diagonals; ++d) {
    int r = static_cast<int>(rng.range(0LL, spec.rows - 2));
    int c = static_cast<int>(rng.range(0LL, spec.cols - 2));
    if (r == river - 1) continue;  // no extra river crossings
    road(node_id(r, c), node_id(r + 1, c + 1), rng.milli(0.3, 1.2), 35.0, 1, false, false, false, "Diagonal");
  }
  int extra = 0;
  for (int d = 0; d < spec.dead_end_chains; ++d) {
    std::string prev = random_cell();
    const int len = static_cast<int>(rng.range(1LL, 3LL));
    for (int s = 0; s < len; ++s) {
      std::string id = "x" + std::to_string(extra++);
      nodes.push_back({{"id", id}, {"residents", 0}});
      road(prev, id, rng.milli(0.1, 0.5), 25.0, 1, false, false, false, "Dead End " + std::to_string(d));
      prev = id;
    }
  }
  for (int p = 0; p < spec.pendant_settlements; ++p) {
    std::string id = "p" + std::to_string(p);
    nodes.push_back({{"id", id}, {"residents", rng.range(5LL, 80LL)}});
    road(random_cell(), id, rng.milli(0.1, 0.6), 25.0, 1, false, false, false, "Lane " + std::to_string(p));
  }
  for (int l = 0; l < spec.loops; ++l) {
    std::string v = random_cell();
    road(v, v, rng.milli(0.1, 0.3), 15.0, 1, true, false, false, "Cul-de-sac loop");
  }
  for (int d = 0; d < spec.duplicate_roads; ++d) {
    int r = static_cast<int>(rng.range(0LL, spec.rows - 1));
    int c = static_cast<int>(rng.range(0LL, spec.cols - 2));
    if (r == river - 1 || r == river) continue;  // keep duplicates off the floodplain
    road(node_id(r, c), node_id(r, c + 1), rng.milli(0.9, 1.5), 25.0, 1, false, false, false, "Old Road");
  }

  oj doc;
  doc["schema_version"] = 1;
  doc["nodes"] = std::move(nodes);
  doc["arcs"] = std::move(arcs);
  doc["facilities"] = facility_ids;
  return doc;
}

inline nlohmann::ordered_json budget_paradox_network() {
  using oj = nlohmann::ordered_json;
  oj doc;
  doc["schema_version"] = 1;
  doc["nodes"] = oj::array({
      {{"id", "O"}, {"residents", 100}},
      {{"id", "A"}, {"residents", 0}},
      {{"id", "B1"}, {"residents", 0}},
      {{"id", "B2"}, {"residents", 0}},
      {{"id", "B3"}, {"residents", 0}},
      {{"id", "C"}, {"residents", 0}},
      {{"id", "D"}, {"residents", 0}, {"facility_beds", 100}},
  });
  auto r = [](const char* id, const char* from, const char* to, double len, double speed, int lanes, bool vuln,
              const char* name) {
    return oj{{"id", id},         {"from", from},   {"to", to},           {"length_miles", len},
              {"speed_mph", speed}, {"lanes", lanes}, {"oneway", false},     {"vulnerable", vuln},
              {"has_bridge", vuln}, {"name", name}};
  };
  doc["arcs"] = oj::array({
      r("a1", "O", "A", 1.0, 60.0, 1, false, "Highway approach"),
      r("a2", "A", "D", 1.0, 60.0, 4, true, "Highway causeway"),
      r("b1", "O", "B1", 1.0, 60.0, 1, false, "Mill Road"),
      r("b2", "B1", "B2", 0.3, 30.0, 1, true, "Mill Creek crossing"),
      r("b3", "B2", "B3", 0.5, 30.0, 1, false, "Mill Road"),
      r("b4", "B3", "D", 0.3, 30.0, 1, true, "Mill Pond crossing"),
      r("c1", "O", "C", 3.0, 30.0, 1, false, "Ridge Road"),
      r("c2", "C", "D", 3.0, 30.0, 1, false, "Ridge Road"),
  });
  doc["facilities"] = oj::array({"D"});
  return doc;
}

}  // namespace rnfmp
