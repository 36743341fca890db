#include <gtest/gtest.h>

#include "rnfmp/analysis.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rnfmp;
using namespace rnfmp::testing;

namespace {

double tol(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

Solution solved(std::vector<std::string> upgrades) {
  Solution s;
  s.status = SolveStatus::Optimal;
  s.upgrades = std::move(upgrades);
  return s;
}

}  // namespace

TEST(LowerBound, SmallFixture) {
  const auto lb = lower_bound(f1(0));
  EXPECT_DOUBLE_EQ(lb.lb, 75.0);
  EXPECT_EQ(lb.solution.status, SolveStatus::Optimal);
}

TEST(BudgetSweep, SmallFixtureRows) {
  const auto r = budget_sweep(f1(), {0.0, 4.0 / 9.0, 5.0 / 9.0, 1.0});
  EXPECT_DOUBLE_EQ(r.lb, 75.0);
  ASSERT_EQ(r.rows.size(), 4u);
  const std::vector<double> objective{100, 80, 75, 75}, ett{25, 5, 0, 0};
  const std::vector<std::size_t> roads{0, 1, 1, 1};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(r.rows[i].objective, objective[i]);
    EXPECT_DOUBLE_EQ(r.rows[i].ett, ett[i]);
    EXPECT_EQ(r.rows[i].upgraded_road_count, roads[i]);
    EXPECT_EQ(r.rows[i].status, SolveStatus::Optimal);
  }
  EXPECT_NEAR(r.rows[1].budget_dollars, 4.0, 1e-12);
  const std::string csv = sweep_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "budget_fraction,budget,objective,ett,upgraded_roads,upgraded_miles,status");
  EXPECT_NE(csv.find("\n0,0,100,25,0,0,Optimal\n"), std::string::npos);
}

TEST(BudgetSweep, RejectsUnsortedFractions) { EXPECT_THROW(budget_sweep(f1(), {0.5, 0.2}), Error); }

TEST(BudgetSweep, MonotoneOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = random_instance(seed);
    const auto r = budget_sweep(inst, {0.0, 0.25, 0.5, 0.75, 1.0});
    double prev = kInfinity;
    for (const auto& row : r.rows) {
      if (!has_solution(row.status)) continue;
      EXPECT_LE(row.objective, prev + tol(prev)) << "seed " << seed;
      EXPECT_GE(row.ett, -tol(row.objective)) << "seed " << seed;
      prev = row.objective;
    }
    if (has_solution(r.rows.back().status)) {
      EXPECT_NEAR(r.rows.back().ett, 0.0, tol(r.lb));
    }
  }
}

TEST(UpgradeFootprint, CountsSegmentsOnce) {
  RoadArc f = arc("r:f", "a", "b", 1, true, 1, "r");
  RoadArc b = arc("r:r", "b", "a", 1, true, 1, "r");
  f.meta = ArcMeta{};
  f.meta->length_miles = 0.5;
  b.meta = f.meta;
  const Network net({node("a", NodeKind::Origin, 1), node("b", NodeKind::Destination, 0, 2)}, {f, b});
  const auto fp = upgrade_footprint(net, {"r:f", "r:r"});
  EXPECT_EQ(fp.roads, 1u);
  EXPECT_DOUBLE_EQ(fp.miles, 0.5);
}

TEST(Ewtt, SmallFixture) {
  const auto rows = ewtt_ranking(f1());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].id, "a2");
  EXPECT_EQ(rows[1].id, "a4");
  for (const auto& r : rows) {
    EXPECT_DOUBLE_EQ(r.ewtt, 0.0);
    EXPECT_TRUE(r.disconnecting);
  }
  EXPECT_TRUE(connectivity_critical(f1()).empty());
  EXPECT_EQ(ewtt_csv(rows), "rank,id,name,ewtt,upgrading_cost,disconnecting\n1,a2,,0,4,true\n2,a4,,0,5,true\n");
}

TEST(Ewtt, MatchesAllPairsRecomputation) {
  int nonzero = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto inst = random_instance(seed, {.max_nodes = 12, .pruning_shapes = seed % 3 == 0});
    ASSERT_LE(inst.network.node_count(), 12u);
    const auto ref = brute_force_ewtt(inst.network);
    const auto rows = ewtt_ranking(inst);
    ASSERT_EQ(rows.size(), ref.size()) << "seed " << seed;
    for (const auto& r : rows) {
      const auto& want = ref.at(r.id);
      EXPECT_NEAR(r.ewtt, want.ewtt, 1e-9 * std::max(1.0, want.ewtt)) << "seed " << seed << " arc " << r.id;
      EXPECT_EQ(r.disconnecting, want.disconnecting) << "seed " << seed << " arc " << r.id;
      nonzero += r.ewtt > 0;
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      EXPECT_GE(rows[i - 1].ewtt, rows[i].ewtt);
      EXPECT_EQ(rows[i].rank, i + 1);
    }
  }
  EXPECT_GT(nonzero, 20);
}

TEST(Ewtt, CriticalArcsMatchBruteForce) {
  int found = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto inst = random_instance(seed, {.max_nodes = 12, .extra_arc_rate = 0.3});
    const auto crit = connectivity_critical(inst);
    EXPECT_EQ(crit, brute_force_critical_arcs(inst.network)) << "seed " << seed;
    found += static_cast<int>(crit.size());
  }
  EXPECT_GT(found, 0);
}

TEST(Ewtt, SegmentRollUpSumsDirections) {
  InstanceSpec spec;
  spec.p = 1;
  const auto inst = derive_instance(load_network(data_path("synthetic_small.json")), spec);
  const auto arcs = ewtt_ranking(inst);
  const auto segs = ewtt_by_segment(inst.network, arcs);
  double a = 0, s = 0;
  for (const auto& r : arcs) a += r.ewtt;
  for (const auto& r : segs) s += r.ewtt;
  EXPECT_NEAR(a, s, 1e-6 * std::max(1.0, a));
  EXPECT_LE(segs.size(), arcs.size());
}

TEST(Frequency, FractionsPerGroup) {
  const std::vector<std::pair<std::string, Solution>> batch{
      {"g", solved({"a4"})}, {"g", solved({"a2", "a4"})}, {"h", solved({})}};
  FrequencyOptions opt;
  opt.universe = {"a2", "a4"};
  const auto rows = upgrade_frequency(batch, opt);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].group, "g");
  EXPECT_EQ(rows[0].id, "a4");
  EXPECT_DOUBLE_EQ(rows[0].frequency, 1.0);
  EXPECT_EQ(rows[1].id, "a2");
  EXPECT_DOUBLE_EQ(rows[1].frequency, 0.5);
  EXPECT_EQ(rows[2].group, "h");
  EXPECT_DOUBLE_EQ(rows[2].frequency, 0.0);
  EXPECT_EQ(frequency_csv(rows).substr(0, 45), "group,id,upgrade_count,instance_count,frequen");
}

TEST(Frequency, UnsolvedCellsDoNotCount) {
  Solution failed;
  failed.status = SolveStatus::BudgetDisconnected;
  const auto rows = upgrade_frequency({{"g", solved({"a4"})}, {"g", failed}});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].instance_count, 1u);
}

TEST(Grid, CartesianProductOfAxes) {
  const Network raw = load_network(data_path("synthetic_small.json"));
  GridAxes axes;
  axes.budget_fractions = {0.25, 1.0};
  axes.ps = {1, 50};
  const auto rows = scenario_grid(raw, InstanceSpec{}, axes);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].instance, i + 1);
  EXPECT_EQ(rows[0].p, 1);
  EXPECT_EQ(rows[2].p, 50);
  EXPECT_DOUBLE_EQ(rows[1].budget_fraction, 1.0);
  for (const auto& r : rows) {
    if (std::isfinite(r.ett)) {
      EXPECT_GE(r.ett, -1e-9);
    }
  }
  const auto by_p = group_summary(rows, [](const GridRow& r) { return std::to_string(r.p); });
  ASSERT_EQ(by_p.size(), 2u);
  EXPECT_EQ(by_p[0].cells, 2u);
  const std::string csv = grid_csv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Grid, UnderivableCellsReportTheError) {
  GridAxes axes;
  axes.ps = {1000000};
  const auto rows = scenario_grid(load_network(data_path("synthetic_small.json")), InstanceSpec{}, axes);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].status.rfind("Error: ", 0), 0u);
}

TEST(Elimination, TableShape) {
  InstanceSpec spec;
  spec.p = 1;
  const auto inst = derive_instance(load_network(data_path("synthetic_small.json")), spec);
  const auto pruned = prune_all(inst.network);
  const Reductions red = reduce_all(with_network(inst, pruned.network));
  const auto t = elimination_table(pruned, &red);
  ASSERT_EQ(t.rows.size(), 13u);
  EXPECT_EQ(t.rows.front().label, "Original");
  EXPECT_EQ(t.rows[1].label, "Technique 1");
  EXPECT_EQ(t.rows[9].label, "Proposition 1");
  EXPECT_EQ(t.rows.back().label, "All");
  long long sum = 0;
  for (std::size_t i = 1; i + 1 < t.rows.size(); ++i) sum += t.rows[i].counts->variables;
  EXPECT_EQ(sum, t.total_variables_eliminated);
  const std::string csv = elimination_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "technique,variables,variables_pct,nodes,nodes_pct,arcs,arcs_pct");
  EXPECT_NE(elimination_csv(elimination_table(pruned, nullptr)).find("Proposition 2,N/A,N/A,N/A,N/A,N/A,N/A\n"),
            std::string::npos);
}
