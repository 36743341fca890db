#include <gtest/gtest.h>

#include "rnfmp/heuristic.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rnfmp;
using namespace rnfmp::testing;

namespace {

std::vector<std::pair<std::string, double>> named(const Network& net, const std::vector<DistanceEntry>& v) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& e : v) out.emplace_back(net.node(e.destination).id, e.distance);
  return out;
}

using Row = std::vector<std::pair<std::string, double>>;

}  // namespace

TEST(DistanceVectors, SmallFixture) {
  const auto inst = f1();
  const auto o1 = build_distance_vectors(inst, "o1");
  EXPECT_EQ(named(inst.network, o1.d), (Row{{"d1", 5}, {"d2", 7}}));
  EXPECT_EQ(named(inst.network, o1.d_prime), (Row{{"d2", 7}}));
  const auto o2 = build_distance_vectors(inst, "o2");
  EXPECT_EQ(named(inst.network, o2.d), (Row{{"d1", 1}, {"d2", 6}}));
  EXPECT_EQ(named(inst.network, o2.d_prime), (Row{{"d2", 6}}));
  EXPECT_THROW(build_distance_vectors(inst, "t1"), Error);
}

TEST(DistanceVectors, TiesBreakByDestinationIndex) {
  std::vector<RoadNode> nodes{node("o", NodeKind::Origin, 1), node("g2", NodeKind::Destination, 0, 5),
                              node("g1", NodeKind::Destination, 0, 5)};
  std::vector<RoadArc> arcs{arc("x", "o", "g2", 2), arc("y", "o", "g1", 2)};
  const auto inst = make_instance(Network(nodes, arcs), 0);
  EXPECT_EQ(named(inst.network, build_distance_vectors(inst, "o").d), (Row{{"g1", 2}, {"g2", 2}}));
}

TEST(Greedy, FloodedRoutesWhenCapacityAllows) {
  const auto g = greedy_initial(f1(9));
  ASSERT_TRUE(g.feasible);
  EXPECT_DOUBLE_EQ(g.objective, 100.0);
  EXPECT_TRUE(g.upgrades.empty());
  EXPECT_EQ(g.assignment.at("o1"), "d2");
  EXPECT_EQ(g.assignment.at("o2"), "d2");
  EXPECT_DOUBLE_EQ(g.residual_capacities.at("d2"), 5.0);
}

TEST(Greedy, FallsBackToUpgradedRouteWhenFull) {
  const auto g = greedy_initial(f1_with_capacity("d2", 12, 9));
  ASSERT_TRUE(g.feasible);
  EXPECT_DOUBLE_EQ(g.objective, 75.0);
  EXPECT_EQ(g.upgrades, std::vector<std::string>{"a4"});
  EXPECT_EQ(g.assignment.at("o2"), "d1");
  EXPECT_DOUBLE_EQ(g.upgrade_cost, 5.0);
}

TEST(Greedy, ReportsBudgetShortfall) {
  const auto g = greedy_initial(f1_with_capacity("d2", 10, 0));
  EXPECT_FALSE(g.feasible);
  EXPECT_DOUBLE_EQ(g.budget_shortfall, 5.0);
  EXPECT_TRUE(g.unplaced.empty());
  const Solution s = to_solution(g);
  EXPECT_EQ(s.status, SolveStatus::Infeasible);
  EXPECT_TRUE(s.heuristic);
}

TEST(Greedy, LargestOriginChoosesFirst) {
  // Both origins prefer d1 but only one fits; the larger one gets it.
  std::vector<RoadNode> nodes{node("small", NodeKind::Origin, 2), node("big", NodeKind::Origin, 6),
                              node("d1", NodeKind::Destination, 0, 6), node("d2", NodeKind::Destination, 0, 6)};
  std::vector<RoadArc> arcs{arc("s1", "small", "d1", 1), arc("s2", "small", "d2", 4), arc("b1", "big", "d1", 1),
                            arc("b2", "big", "d2", 4)};
  const auto g = greedy_initial(make_instance(Network(nodes, arcs), 0));
  ASSERT_TRUE(g.feasible);
  EXPECT_EQ(g.assignment.at("big"), "d1");
  EXPECT_EQ(g.assignment.at("small"), "d2");
  EXPECT_DOUBLE_EQ(g.objective, 6 * 1 + 2 * 4);
}

TEST(Greedy, UnplacedWhenNothingFits) {
  std::vector<RoadNode> nodes{node("o", NodeKind::Origin, 8), node("d", NodeKind::Destination, 0, 5)};
  const auto g = greedy_initial(make_instance(Network(nodes, {arc("x", "o", "d", 1)}), 0));
  EXPECT_FALSE(g.feasible);
  EXPECT_EQ(g.unplaced, std::vector<std::string>{"o"});
}

TEST(Greedy, FeasibleResultsValidateAndNeverBeatTheOptimum) {
  int feasible = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto inst = random_instance(seed, {.max_vulnerable = 8});
    const auto g = greedy_initial(inst);
    if (!g.feasible) continue;
    ++feasible;
    Solution s = to_solution(g);
    const auto rep = validate_solution(inst, s);
    EXPECT_TRUE(rep.ok()) << "seed " << seed << ": " << (rep.ok() ? "" : rep.violations[0].message);
    const auto ref = reference_optimum(inst);
    ASSERT_EQ(ref.status, SolveStatus::Optimal) << "seed " << seed;
    EXPECT_GE(g.objective, ref.objective - 1e-6 * std::max(1.0, ref.objective)) << "seed " << seed;
  }
  EXPECT_GT(feasible, 50);
}
