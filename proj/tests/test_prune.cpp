#include <gtest/gtest.h>

#include "rnfmp/pipeline.hpp"
#include "rnfmp/prune.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rnfmp;
using namespace rnfmp::testing;

namespace {

RoadNode trans(const std::string& id) { return node(id, NodeKind::Transshipment); }

Network run(int technique, const Network& net, PruneLog& log) { return apply_technique(technique, net, log); }

bool has_node(const Network& net, const std::string& id) { return net.find_node(id).has_value(); }
bool has_arc(const Network& net, const std::string& id) { return net.find_arc(id).has_value(); }

// o <-> t <-> d with extras attached to t.
std::vector<RoadArc> spine() {
  return {arc("ot", "o", "t", 1), arc("to", "t", "o", 1), arc("td", "t", "d", 2), arc("dt", "d", "t", 2)};
}

std::vector<RoadNode> spine_nodes() {
  return {node("o", NodeKind::Origin, 5), trans("t"), node("d", NodeKind::Destination, 0, 10)};
}

}  // namespace

TEST(Technique6, RemovesLoops) {
  auto arcs = spine();
  arcs.push_back(arc("loop", "t", "t", 1));
  PruneLog log;
  Network out = run(6, Network(spine_nodes(), arcs), log);
  EXPECT_FALSE(has_arc(out, "loop"));
  EXPECT_EQ(out.arc_count(), 4u);
  ASSERT_EQ(log.actions.size(), 1u);
  EXPECT_EQ(log.actions[0].technique, 6);
}

TEST(Technique5, KeepsFastestNonVulnerableParallel) {
  auto arcs = spine();
  arcs.push_back(arc("td2", "t", "d", 1.5));
  arcs.push_back(arc("td3", "t", "d", 4));
  arcs.push_back(arc("tdv", "t", "d", 9, true, 3));
  PruneLog log;
  Network out = run(5, Network(spine_nodes(), arcs), log);
  EXPECT_TRUE(has_arc(out, "td2"));
  EXPECT_FALSE(has_arc(out, "td"));
  EXPECT_FALSE(has_arc(out, "td3"));
  EXPECT_TRUE(has_arc(out, "tdv"));  // vulnerable parallels stay
}

TEST(Technique2, RemovesDeadEndChainsTransitively) {
  auto nodes = spine_nodes();
  nodes.push_back(trans("x1"));
  nodes.push_back(trans("x2"));
  auto arcs = spine();
  arcs.push_back(arc("tx1", "t", "x1", 1));
  arcs.push_back(arc("x1x2", "x1", "x2", 1));
  arcs.push_back(arc("x2x1", "x2", "x1", 1));  // x1 and x2 feed each other but never return to t
  PruneLog log;
  Network out = run(2, Network(nodes, arcs), log);
  // Each of x1 and x2 still has an in arc and an out arc, so the rule does not fire.
  EXPECT_TRUE(has_node(out, "x1"));
  arcs.pop_back();
  PruneLog log2;
  Network out2 = run(2, Network(nodes, arcs), log2);
  EXPECT_FALSE(has_node(out2, "x1"));
  EXPECT_FALSE(has_node(out2, "x2"));
  EXPECT_EQ(out2.arc_count(), 4u);
}

TEST(Technique1, RemovesPocketsBehindArticulationPoints) {
  auto nodes = spine_nodes();
  for (const char* id : {"p1", "p2", "p3"}) nodes.push_back(trans(id));
  auto arcs = spine();
  for (auto [a, b] : {std::pair{"t", "p1"}, {"p1", "p2"}, {"p2", "p3"}, {"p3", "p1"}}) {
    arcs.push_back(arc(std::string(a) + b, a, b, 1));
    arcs.push_back(arc(std::string(b) + a, b, a, 1));
  }
  PruneLog log;
  Network out = run(1, Network(nodes, arcs), log);
  for (const char* id : {"p1", "p2", "p3"}) EXPECT_FALSE(has_node(out, id));
  EXPECT_TRUE(has_node(out, "t"));
  EXPECT_EQ(out.arc_count(), 4u);
}

TEST(Technique1, KeepsPocketsHoldingOriginsOrDestinations) {
  PruneLog log;
  Network f = f1().network;
  Network out = run(1, f, log);
  EXPECT_EQ(out.node_count(), f.node_count());
  EXPECT_TRUE(log.actions.empty());
}

TEST(Technique3, MergesPendantOriginIntoItsNeighbor) {
  PruneLog log;
  Network out = run(3, Network(spine_nodes(), spine()), log);
  EXPECT_FALSE(has_node(out, "o"));
  const RoadNode& host = out.node(out.node_index("t"));
  EXPECT_EQ(host.kind, NodeKind::Origin);
  EXPECT_EQ(host.residents, 5.0);
  EXPECT_DOUBLE_EQ(log.objective_offset, 5.0);  // w * t(o, t)
  ASSERT_EQ(log.lineage.count("t"), 1u);
  EXPECT_EQ(log.lineage.at("t").original, "o");
  EXPECT_EQ(log.lineage.at("t").prefix, std::vector<std::string>{"ot"});
}

TEST(Technique3, LeavesVulnerableOrOneWayPendantsAlone) {
  auto arcs = spine();
  arcs[0] = arc("ot", "o", "t", 1, true, 2);
  PruneLog log;
  run(3, Network(spine_nodes(), arcs), log);
  EXPECT_TRUE(log.actions.empty());
  arcs = spine();
  arcs.erase(arcs.begin() + 1);
  run(3, Network(spine_nodes(), arcs), log);
  EXPECT_TRUE(log.actions.empty());
}

TEST(Technique4, RemovesDominatedTriangleApex) {
  auto nodes = spine_nodes();
  nodes.push_back(trans("u"));
  auto arcs = spine();
  arcs.push_back(arc("tu", "t", "u", 1));
  arcs.push_back(arc("ut", "u", "t", 1));
  arcs.push_back(arc("ud", "u", "d", 1));
  arcs.push_back(arc("du", "d", "u", 1));
  PruneLog log;
  Network out = run(4, Network(nodes, arcs), log);
  EXPECT_FALSE(has_node(out, "u"));  // t -> d (2) matches t -> u -> d (2)
  // A strictly faster transit keeps the apex.
  arcs[4] = arc("tu", "t", "u", 0.5);
  PruneLog log2;
  Network kept = run(4, Network(nodes, arcs), log2);
  EXPECT_TRUE(has_node(kept, "u"));
}

TEST(Technique7, ContractsDegreeTwoTransshipment) {
  std::vector<RoadNode> nodes{node("o", NodeKind::Origin, 5), trans("m"), node("d", NodeKind::Destination, 0, 10)};
  std::vector<RoadArc> arcs{arc("om", "o", "m", 1), arc("mo", "m", "o", 1), arc("md", "m", "d", 2),
                            arc("dm", "d", "m", 2)};
  PruneLog log;
  Network out = run(7, Network(nodes, arcs), log);
  EXPECT_FALSE(has_node(out, "m"));
  ASSERT_EQ(out.arc_count(), 2u);
  for (const RoadArc& a : out.arcs()) {
    EXPECT_DOUBLE_EQ(a.travel_time, 3.0);
    const auto chain = log.expand_arc(a.id);
    EXPECT_EQ(chain.size(), 2u);
    if (a.tail == "o") {
      EXPECT_EQ(chain, (std::vector<std::string>{"om", "md"}));
    }
  }
}

TEST(Technique7, SkipsNodesTouchingVulnerableArcs) {
  std::vector<RoadNode> nodes{node("o", NodeKind::Origin, 5), trans("m"), node("d", NodeKind::Destination, 0, 10)};
  std::vector<RoadArc> arcs{arc("om", "o", "m", 1), arc("md", "m", "d", 2, true, 1)};
  PruneLog log;
  Network out = run(7, Network(nodes, arcs), log);
  EXPECT_TRUE(has_node(out, "m"));
}

TEST(Technique8, RemovesArcsNoFasterThanTheDetour) {
  std::vector<RoadNode> nodes{node("o", NodeKind::Origin, 5), trans("j"), node("d", NodeKind::Destination, 0, 10)};
  std::vector<RoadArc> arcs{arc("oj", "o", "j", 1), arc("jd", "j", "d", 1), arc("od", "o", "d", 2)};
  PruneLog log;
  Network out = run(8, Network(nodes, arcs), log);
  EXPECT_FALSE(has_arc(out, "od"));
  EXPECT_TRUE(log.triangle_vis.empty());
}

TEST(Technique8, StrictTrianglesBecomeValidInequalities) {
  std::vector<RoadNode> nodes{node("o", NodeKind::Origin, 5), trans("j"), node("d", NodeKind::Destination, 0, 10)};
  std::vector<RoadArc> arcs{arc("oj", "o", "j", 1), arc("jd", "j", "d", 1), arc("od", "o", "d", 1.5)};
  PruneLog log;
  Network out = run(8, Network(nodes, arcs), log);
  EXPECT_TRUE(has_arc(out, "od"));
  ASSERT_EQ(log.triangle_vis.size(), 1u);
  const TriangleVi& vi = log.triangle_vis[0];
  EXPECT_EQ(vi.arc_ij, "oj");
  EXPECT_EQ(vi.arc_ih, "od");
  EXPECT_EQ(vi.arc_jh, "jd");
}

TEST(PruneAll, SmallFixtureIsAlreadyMinimal) {
  auto p = prune_all(f1().network);
  EXPECT_EQ(p.network.node_count(), 5u);
  EXPECT_EQ(p.network.arc_count(), 5u);
  EXPECT_EQ(p.stats.original.variables, 12);
  EXPECT_EQ(p.stats.pruned.variables, 12);
}

TEST(PruneAll, IdempotentAndReplayable) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const auto inst = random_instance(seed, {.pruning_shapes = true});
    const auto once = prune_all(inst.network);
    const auto twice = prune_all(once.network);
    EXPECT_TRUE(twice.log.actions.empty()) << "seed " << seed;
    const Network again = replay(inst.network, once.log);
    ASSERT_EQ(network_to_json(again).dump(), network_to_json(once.network).dump()) << "seed " << seed;
  }
}

TEST(PruneAll, StatsAddUp) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto p = prune_all(random_instance(seed, {.pruning_shapes = true}).network);
    long long v = 0, n = 0, a = 0;
    for (const auto& e : p.stats.eliminated) {
      v += e.variables;
      n += e.nodes;
      a += e.arcs;
    }
    EXPECT_EQ(p.stats.original.variables - p.stats.pruned.variables, v);
    EXPECT_EQ(p.stats.original.nodes - p.stats.pruned.nodes, n);
    EXPECT_EQ(p.stats.original.arcs - p.stats.pruned.arcs, a);
  }
}

TEST(PruneAll, NeverRemovesVulnerableArcsOrDestinations) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = random_instance(seed, {.pruning_shapes = true});
    const auto p = prune_all(inst.network);
    for (NodeIndex d : inst.network.destinations()) EXPECT_TRUE(has_node(p.network, inst.network.node(d).id));
    // Vulnerable arcs may only vanish as loops or with a pocket holding no origin or destination.
    for (const RoadArc& a : inst.network.arcs()) {
      if (!a.vulnerable || has_arc(p.network, a.id)) continue;
      bool allowed = false;
      for (const auto& act : p.log.actions) {
        if (act.technique != 1 && act.technique != 2 && act.technique != 6) continue;
        for (const auto& id : act.removed_arcs) allowed |= id == a.id;
      }
      EXPECT_TRUE(allowed) << "seed " << seed << " arc " << a.id;
    }
  }
}

TEST(PruneAll, PreservesTheOptimumAndLiftsValidSolutions) {
  PipelineOptions po;
  po.reduce = false;
  po.warm_start = false;
  po.valid_inequalities = false;
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto inst = random_instance(seed, {.max_vulnerable = 8, .pruning_shapes = true});
    const auto ref = reference_optimum(inst);
    const auto r = run_pipeline(inst, po);
    ASSERT_EQ(r.solution.status, ref.status) << "seed " << seed;
    if (ref.status != SolveStatus::Optimal) continue;
    ++compared;
    EXPECT_NEAR(r.solution.objective, ref.objective, 1e-6 * std::max(1.0, ref.objective)) << "seed " << seed;
    const auto rep = validate_solution(inst, r.solution);
    EXPECT_TRUE(rep.ok()) << "seed " << seed << ": " << (rep.ok() ? "" : rep.violations[0].message);
  }
  EXPECT_GT(compared, 60);
}

TEST(PruneLogJson, ListsEveryAction) {
  const auto p = prune_all(random_instance(3, {.pruning_shapes = true}).network);
  const auto j = prune_log_to_json(p.log);
  EXPECT_TRUE(j.is_object());
  EXPECT_EQ(j.dump(), prune_log_to_json(prune_all(random_instance(3, {.pruning_shapes = true}).network).log).dump());
}
