#include <gtest/gtest.h>

#include "rnfmp/network.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rnfmp;
using namespace rnfmp::testing;

namespace {

Network path_uvw() {
  return Network({node("u", NodeKind::Transshipment), node("v", NodeKind::Transshipment),
                  node("w", NodeKind::Transshipment)},
                 {arc("e1", "u", "v", 1), arc("e2", "v", "w", 1)});
}

std::set<std::string> ids(const Network& net, const std::vector<NodeIndex>& nodes) {
  std::set<std::string> out;
  for (NodeIndex v : nodes) out.insert(net.node(v).id);
  return out;
}

}  // namespace

TEST(ShortestPaths, F1FloodedDistanceToD2) {
  const auto inst = f1();
  auto d = shortest_paths(inst.network, "o1", ArcFilter::non_vulnerable_only());
  EXPECT_DOUBLE_EQ(d.at("d2"), 7.0);
  EXPECT_FALSE(d.count("d1"));
}

TEST(ShortestPaths, DistanceToSelfIsZero) {
  auto d = shortest_paths(f1().network, "o1", ArcFilter::all());
  EXPECT_EQ(d.at("o1"), 0.0);
}

TEST(ShortestPaths, UnknownSourceThrows) {
  EXPECT_THROW(shortest_paths(f1().network, "zz", ArcFilter::all()), Error);
}

TEST(ShortestPaths, UpgradedSetAdmitsOnlyChosenArcs) {
  const auto net = f1().network;
  auto d = shortest_paths(net, "o1", ArcFilter::upgraded({"a2"}));
  EXPECT_DOUBLE_EQ(d.at("d1"), 5.0);
  EXPECT_THROW(ArcFilter::upgraded({"a1"}).admissible(net), Error);
}

TEST(ShortestPaths, MatchesPathEnumerationAndFloydOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = random_instance(seed, {.pruning_shapes = true});
    const Network& net = inst.network;
    for (auto filter : {ArcFilter::all(), ArcFilter::non_vulnerable_only()}) {
      const auto ok = filter.admissible(net);
      const Matrix fw = floyd_warshall(net, ok);
      for (NodeIndex s = 0; s < net.node_count(); ++s) {
        const auto tree = shortest_path_tree(net, s, ok);
        const auto en = path_enumeration_distances(net, s, ok);
        for (NodeIndex v = 0; v < net.node_count(); ++v) {
          ASSERT_EQ(tree.reachable(v), std::isfinite(fw[s][v])) << "seed " << seed;
          if (!tree.reachable(v)) continue;
          ASSERT_NEAR(tree.dist[v], fw[s][v], 1e-9) << "seed " << seed;
          ASSERT_NEAR(tree.dist[v], en[v], 1e-9) << "seed " << seed;
          // The reported distance is the time of the reported path.
          ASSERT_NEAR(tree.dist[v], path_time(net, tree.path_to(net, v)), 1e-12);
        }
        // Triangle property over admitted arcs.
        for (ArcIndex a = 0; a < net.arc_count(); ++a) {
          if (ok[a] && tree.reachable(net.tail(a))) {
            ASSERT_LE(tree.dist[net.head(a)], tree.dist[net.tail(a)] + net.arc(a).travel_time + 1e-9);
          }
        }
      }
    }
  }
}

TEST(ShortestPaths, FloodedDistancesDominateFullDistances) {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const auto net = random_instance(seed).network;
    for (NodeIndex s = 0; s < net.node_count(); ++s) {
      auto full = shortest_path_tree(net, s, ArcFilter::all().admissible(net));
      auto flooded = shortest_path_tree(net, s, ArcFilter::non_vulnerable_only().admissible(net));
      for (NodeIndex v = 0; v < net.node_count(); ++v) ASSERT_GE(flooded.dist[v], full.dist[v] - 1e-9);
    }
  }
}

TEST(ShortestPaths, TiesResolveToLexSmallestArcSequence) {
  // Two equal routes s->x->g and s->y->g; arc ids make the x route smaller.
  Network net({node("s", NodeKind::Transshipment), node("x", NodeKind::Transshipment),
               node("y", NodeKind::Transshipment), node("g", NodeKind::Transshipment)},
              {arc("b1", "s", "y", 1), arc("b2", "y", "g", 2), arc("a1", "s", "x", 2), arc("a2", "x", "g", 1)});
  auto tree = shortest_path_tree(net, net.node_index("s"), ArcFilter::all().admissible(net));
  auto p = tree.path_to(net, net.node_index("g"));
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(net.arc(p[0]).id, "a1");
  EXPECT_EQ(net.arc(p[1]).id, "a2");
}

TEST(ArticulationPoints, F1) { EXPECT_EQ(articulation_points(f1().network), std::set<std::string>{"t1"}); }

TEST(ArticulationPoints, SingleNodeAndPath) {
  EXPECT_TRUE(articulation_points(Network({node("a", NodeKind::Transshipment)}, {})).empty());
  EXPECT_EQ(articulation_points(path_uvw()), std::set<std::string>{"v"});
}

TEST(ArticulationPoints, MatchesBruteForceOnSmallGraphs) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto net = random_instance(seed, {.max_nodes = 12, .extra_arc_rate = 0.4, .pruning_shapes = true}).network;
    EXPECT_EQ(articulation_points(net), brute_force_articulation_points(net)) << "seed " << seed;
  }
}

TEST(ComponentsWithout, F1WithoutT1) {
  const auto net = f1().network;
  auto comps = components_without(net, "t1");
  ASSERT_EQ(comps.size(), 2u);
  std::set<std::set<std::string>> got;
  for (const auto& c : comps) got.insert(ids(net, c.nodes));
  EXPECT_TRUE(got.count({"o1"}));
  EXPECT_TRUE(got.count({"o2", "d1", "d2"}));
  for (const auto& c : comps) {
    if (c.nodes.size() == 3) {
      EXPECT_EQ(c.arcs.size(), 2u);  // a4, a5
    }
  }
}

TEST(ComponentsWithout, PathAndTriangle) {
  const auto path = path_uvw();
  auto comps = components_without(path, "v");
  ASSERT_EQ(comps.size(), 2u);
  Network tri({node("a", NodeKind::Transshipment), node("b", NodeKind::Transshipment),
               node("c", NodeKind::Transshipment)},
              {arc("x", "a", "b", 1), arc("y", "b", "c", 1), arc("z", "c", "a", 1)});
  auto t = components_without(tri, "a");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].nodes.size(), 2u);
  EXPECT_THROW(components_without(tri, "q"), Error);
}

TEST(ComponentsWithout, PartitionsRemainingNodes) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto net = random_instance(seed, {.pruning_shapes = true}).network;
    for (NodeIndex v = 0; v < net.node_count(); ++v) {
      std::vector<int> seen(net.node_count(), 0);
      for (const auto& c : components_without(net, v))
        for (NodeIndex u : c.nodes) ++seen[u];
      for (NodeIndex u = 0; u < net.node_count(); ++u) ASSERT_EQ(seen[u], u == v ? 0 : 1);
    }
  }
}

TEST(ReachableDestinations, F1) {
  const auto net = f1().network;
  EXPECT_EQ(reachable_destinations(net, "o2", ArcFilter::non_vulnerable_only()), std::set<std::string>{"d2"});
  EXPECT_EQ(reachable_destinations(net, "o2", ArcFilter::all()), (std::set<std::string>{"d1", "d2"}));
  EXPECT_THROW(reachable_destinations(net, "t1", ArcFilter::all()), Error);
}

TEST(ReachableDestinations, OriginWithoutExits) {
  Network net({node("o", NodeKind::Origin, 3), node("d", NodeKind::Destination, 0, 5)}, {arc("a", "d", "o", 1)});
  EXPECT_TRUE(reachable_destinations(net, "o", ArcFilter::all()).empty());
}

TEST(NetworkInvariants, RejectsBadRecords) {
  EXPECT_THROW(Network({node("a", NodeKind::Transshipment), node("a", NodeKind::Transshipment)}, {}), Error);
  EXPECT_THROW(Network({node("a", NodeKind::Transshipment)}, {arc("x", "a", "b", 1)}), Error);
  EXPECT_THROW(Network({node("a", NodeKind::Transshipment)}, {arc("x", "a", "a", -1)}), Error);
  RoadArc costly = arc("x", "a", "a", 1);
  costly.mitigation_cost = 3;
  EXPECT_THROW(Network({node("a", NodeKind::Transshipment)}, {costly}), Error);
  RoadNode t = node("t", NodeKind::Transshipment);
  t.capacity = 4;
  EXPECT_THROW(Network({t}, {}), Error);
}

TEST(NetworkInvariants, AdjacencyMatchesArcList) {
  const auto net = random_instance(5, {.pruning_shapes = true}).network;
  std::size_t outs = 0, ins = 0;
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    for (ArcIndex a : net.out_arcs(v)) ASSERT_EQ(net.tail(a), v);
    for (ArcIndex a : net.in_arcs(v)) ASSERT_EQ(net.head(a), v);
    outs += net.out_arcs(v).size();
    ins += net.in_arcs(v).size();
  }
  EXPECT_EQ(outs, net.arc_count());
  EXPECT_EQ(ins, net.arc_count());
}
