#include "cglab/pricing.h"

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "support/fixtures.h"
#include "support/oracles.h"

namespace cglab {
namespace {

std::vector<int> Dense(const Column& c, int n) {
  std::vector<int> out(n, 0);
  for (const auto& e : c.entries()) out[e.row] = e.coef;
  return out;
}

TEST(Column, StructuralEquality) {
  const std::vector<int> dense = {0, 2, 0, 1};
  const Column c = Column::FromDense(dense);
  EXPECT_EQ(c.support_size(), 2);
  EXPECT_EQ(c.coef(1), 2);
  EXPECT_EQ(c.coef(0), 0);
  const std::vector<int> support = {3, 1};
  EXPECT_EQ(Column::FromSupport(support), Column::FromDense(std::vector<int>{0, 1, 0, 1}));
  EXPECT_TRUE(c.Intersects(Column::FromSupport(std::vector<int>{3})));
  EXPECT_FALSE(c.Intersects(Column::FromSupport(std::vector<int>{0, 2})));
  EXPECT_TRUE(Column::FromDense(std::vector<int>{0, 0}).empty());
}

TEST(ReducedCost, HandValues) {
  const std::vector<double> duals = {0.4, 0.7};
  EXPECT_NEAR(ReducedCost(Column::FromDense(std::vector<int>{0, 2}), duals), -0.4, 1e-15);
  const std::vector<double> zero = {0.0, 0.0, 0.0};
  EXPECT_EQ(ReducedCost(Column::FromDense(std::vector<int>{4, 1, 2}), zero), 1.0);
  const std::vector<double> path_duals = {0.5, 0.6, 0.7};
  EXPECT_NEAR(ReducedCost(Column::FromSupport(std::vector<int>{0, 2}), path_duals), -0.2,
              1e-15);
}

TEST(CspPricing, TopThreePatterns) {
  const std::vector<double> duals = {0.4, 0.7};
  const CandidatePool pool = SolveCspPricing(fixtures::TenRoll(), duals, 3);
  ASSERT_EQ(pool.size(), 3);
  EXPECT_EQ(Dense(pool.columns[0], 2), (std::vector<int>{0, 2}));
  EXPECT_EQ(Dense(pool.columns[1], 2), (std::vector<int>{3, 0}));
  EXPECT_EQ(Dense(pool.columns[2], 2), (std::vector<int>{1, 1}));
  EXPECT_NEAR(pool.reduced_costs[0], -0.4, 1e-12);
  EXPECT_NEAR(pool.reduced_costs[1], -0.2, 1e-12);
  EXPECT_NEAR(pool.reduced_costs[2], -0.1, 1e-12);
}

TEST(CspPricing, OptimalDualsGiveZeroReducedCost) {
  const std::vector<double> duals = {1.0 / 3.0, 0.5};
  const auto best = KBestPatterns(fixtures::TenRoll(), duals, 2);
  ASSERT_EQ(best.size(), 2u);
  EXPECT_NEAR(best[0].value, 1.0, 1e-12);
  EXPECT_NEAR(best[1].value, 1.0, 1e-12);
  // Ties keep the lexicographically larger vector first.
  EXPECT_EQ(best[0].counts, (std::vector<int>{3, 0}));
  EXPECT_EQ(best[1].counts, (std::vector<int>{0, 2}));
  const CandidatePool pool = SolveCspPricing(fixtures::TenRoll(), duals, 10);
  EXPECT_NEAR(pool.best_reduced_cost(), 0.0, 1e-12);
}

TEST(CspPricing, ZeroDualsGiveUnitReducedCost) {
  const std::vector<double> duals = {0.0, 0.0};
  const CandidatePool pool = SolveCspPricing(fixtures::TenRoll(), duals, 10);
  EXPECT_EQ(pool.size(), 7);  // every pattern ties, the zero pattern included
  for (double rc : pool.reduced_costs) EXPECT_EQ(rc, 1.0);
}

TEST(CspPricing, RejectsBadArguments) {
  const std::vector<double> duals = {0.1};
  EXPECT_THROW(SolveCspPricing(fixtures::TenRoll(), duals, 3), std::invalid_argument);
  const std::vector<double> ok = {0.1, 0.1};
  EXPECT_THROW(SolveCspPricing(fixtures::TenRoll(), ok, 0), std::invalid_argument);
}

TEST(GcpPricing, PathAndTriangle) {
  const std::vector<double> duals = {0.5, 0.6, 0.7};
  const CandidatePool path = SolveGcpPricing(fixtures::Path3(), duals, 5);
  EXPECT_EQ(path.columns[0], Column::FromSupport(std::vector<int>{0, 2}));
  EXPECT_NEAR(path.best_reduced_cost(), -0.2, 1e-12);
  const CandidatePool triangle = SolveGcpPricing(fixtures::Triangle(), duals, 5);
  EXPECT_EQ(triangle.columns[0], Column::FromSupport(std::vector<int>{2}));
  EXPECT_NEAR(triangle.best_reduced_cost(), 0.3, 1e-12);
  EXPECT_EQ(triangle.size(), 3);
}

TEST(GcpPricing, EdgelessGraphHasOneMaximalSet) {
  const std::vector<double> duals = {0.2, 0.0, 0.9};
  const CandidatePool pool = SolveGcpPricing(fixtures::Edgeless(3), duals, 10);
  ASSERT_EQ(pool.size(), 1);
  EXPECT_EQ(pool.columns[0], Column::FromSupport(std::vector<int>{0, 1, 2}));
}

TEST(Graph, IndependenceHelpers) {
  const Graph g(fixtures::Path3());
  EXPECT_TRUE(g.IsIndependent(std::vector<int>{0, 2}));
  EXPECT_FALSE(g.IsIndependent(std::vector<int>{0, 1}));
  EXPECT_TRUE(g.IsMaximalIndependent(std::vector<int>{1}));
  EXPECT_FALSE(g.IsMaximalIndependent(std::vector<int>{0}));
  EXPECT_EQ(g.ExtendToMaximal({2}), (std::vector<int>{0, 2}));
}

std::vector<double> RandomDuals(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(0.0, 0.6);
  std::vector<double> duals(m);
  for (double& d : duals) d = (rng() % 5 == 0) ? 0.0 : u(rng);
  return duals;
}

TEST(PricingProperty, CspKBestMatchesEnumeration) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const oracle::Csp csp = oracle::RandomTinyCsp(rng);
    const CspInstance inst = fixtures::ToInstance(csp);
    const auto duals = RandomDuals(rng, inst.num_rows());
    const int k = 1 + static_cast<int>(rng() % 12);
    const auto best = KBestPatterns(inst, duals, k);
    const auto all = oracle::AllPatterns(csp);
    const auto brute = oracle::ValuesDescending(all, duals);
    ASSERT_EQ(best.size(), std::min<std::size_t>(k, brute.size()));
    std::set<std::vector<int>> seen;
    for (std::size_t i = 0; i < best.size(); ++i) {
      EXPECT_NEAR(best[i].value, brute[i], 1e-9);
      EXPECT_TRUE(seen.insert(best[i].counts).second);
      int used = 0;
      for (std::size_t r = 0; r < best[i].counts.size(); ++r) {
        used += best[i].counts[r] * csp.lengths[r];
      }
      EXPECT_LE(used, csp.roll_length);
      if (i > 0) EXPECT_LE(best[i].value, best[i - 1].value + kTieTolerance);
    }
  }
}

TEST(PricingProperty, GcpKBestMatchesEnumeration) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const oracle::Graph og = oracle::RandomTinyGraph(rng);
    const Graph graph(fixtures::ToInstance(og));
    const auto duals = RandomDuals(rng, og.n);
    const int k = 1 + static_cast<int>(rng() % 12);
    const auto best = KBestIndependentSets(graph, duals, k);
    const auto sets = oracle::AllIndependentSets(og);
    const auto brute = oracle::ValuesDescending(oracle::SupportsToDense(sets, og.n), duals);
    ASSERT_EQ(best.size(), std::min<std::size_t>(k, brute.size()));
    for (std::size_t i = 0; i < best.size(); ++i) {
      EXPECT_NEAR(best[i].value, brute[i], 1e-9);
      EXPECT_TRUE(graph.IsIndependent(best[i].nodes));
    }

    const CandidatePool pool = SolveGcpPricing(graph, duals, k);
    const auto maximal = oracle::AllMaximalIndependentSets(og);
    const auto maximal_values =
        oracle::ValuesDescending(oracle::SupportsToDense(maximal, og.n), duals);
    EXPECT_NEAR(pool.best_reduced_cost(), 1.0 - maximal_values[0], 1e-9);
    std::set<Column> distinct(pool.columns.begin(), pool.columns.end());
    EXPECT_EQ(distinct.size(), pool.columns.size());
    for (int c = 0; c < pool.size(); ++c) {
      std::vector<int> nodes;
      for (const auto& e : pool.columns[c].entries()) nodes.push_back(e.row);
      EXPECT_TRUE(graph.IsMaximalIndependent(nodes));
      EXPECT_NEAR(pool.reduced_costs[c], ReducedCost(pool.columns[c], duals), 1e-12);
      if (c > 0) EXPECT_GE(pool.reduced_costs[c], pool.reduced_costs[c - 1] - kTieTolerance);
    }
  }
}

}  // namespace
}  // namespace cglab
