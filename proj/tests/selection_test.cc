#include "cglab/selection.h"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "cglab/engine.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace cglab {
namespace {

CandidatePool PoolOf(const std::vector<std::vector<int>>& supports) {
  CandidatePool pool;
  for (std::size_t i = 0; i < supports.size(); ++i) {
    pool.columns.push_back(Column::FromSupport(supports[i]));
    pool.reduced_costs.push_back(-1.0 + 0.1 * static_cast<double>(i));
  }
  return pool;
}

CandidatePool PoolOfSize(int n) {
  std::vector<std::vector<int>> supports;
  for (int i = 0; i < n; ++i) supports.push_back({i % 3});
  return PoolOf(supports);
}

struct Harness {
  RmpModel master{fixtures::TenRoll()};
  std::mt19937_64 rng{1};
  Harness() { master.Solve(); }
  SelectionContext Context(const CandidatePool& pool, int k, bool force = true) {
    return SelectionContext{pool, k, force, master, rng, {}};
  }
};

TEST(GreedySingle, AlwaysTheBest) {
  Harness h;
  GreedySingle s;
  EXPECT_TRUE(s.single_column());
  EXPECT_EQ(s.Select(h.Context(PoolOfSize(10), 5)), Selection{0});
  EXPECT_EQ(s.Select(h.Context(PoolOfSize(1), 5)), Selection{0});
}

TEST(RandomSingle, UniformOverThePool) {
  Harness h;
  RandomSingle s;
  const CandidatePool pool = PoolOfSize(10);
  std::vector<int> counts(10, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const Selection sel = s.Select(h.Context(pool, 1));
    ASSERT_EQ(sel.size(), 1u);
    ++counts[sel[0]];
  }
  const double sigma = std::sqrt(0.1 * 0.9 / draws);
  for (int c : counts) EXPECT_NEAR(c / double(draws), 0.1, 4 * sigma);
}

TEST(RandomMulti, RepeatableAndDegrades) {
  const CandidatePool pool = PoolOfSize(10);
  Harness a;
  Harness b;
  RandomMulti s;
  for (int i = 0; i < 20; ++i) {
    const Selection x = s.Select(a.Context(pool, 5));
    EXPECT_EQ(x, s.Select(b.Context(pool, 5)));
    EXPECT_EQ(std::set<int>(x.begin(), x.end()).size(), 5u);
  }
  Selection all = s.Select(a.Context(PoolOfSize(4), 4));
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, (Selection{0, 1, 2, 3}));
  EXPECT_EQ(s.Select(a.Context(PoolOfSize(3), 5)).size(), 3u);
}

TEST(GreedyMulti, Prefix) {
  Harness h;
  GreedyMulti s;
  EXPECT_EQ(s.Select(h.Context(PoolOfSize(10), 5)), (Selection{0, 1, 2, 3, 4}));
  EXPECT_EQ(s.Select(h.Context(PoolOfSize(3), 5)), (Selection{0, 1, 2}));
}

TEST(DiverseMulti, BlockRuleHandTrace) {
  Harness h;
  const CandidatePool pool = PoolOf({{0, 1}, {0}, {2}, {1, 2}});
  const auto blocks = DiverseBlocks(pool);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0], (std::vector<int>{0, 2}));
  EXPECT_EQ(blocks[1], (std::vector<int>{1, 3}));
  EXPECT_TRUE(DiverseBlocksValid(pool, blocks));
  DiverseMulti s;
  EXPECT_EQ(s.Select(h.Context(pool, 3)), (Selection{0, 2, 1}));
}

TEST(DiverseMulti, DegenerateShapes) {
  Harness h;
  DiverseMulti s;
  const CandidatePool disjoint = PoolOf({{0}, {1}, {2}, {3}, {4}, {5}});
  EXPECT_EQ(DiverseBlocks(disjoint).size(), 1u);
  EXPECT_EQ(s.Select(h.Context(disjoint, 3)), (Selection{0, 1, 2}));
  const CandidatePool shared = PoolOf({{0, 1}, {0, 2}, {0}, {0, 3}});
  EXPECT_EQ(DiverseBlocks(shared).size(), 4u);
  EXPECT_EQ(s.Select(h.Context(shared, 3)), (Selection{0, 1, 2}));
}

TEST(DiverseBlocksValid, DetectsViolations) {
  const CandidatePool pool = PoolOf({{0, 1}, {0}, {2}, {1, 2}});
  EXPECT_FALSE(DiverseBlocksValid(pool, {{0, 1}}));         // overlapping block
  EXPECT_FALSE(DiverseBlocksValid(pool, {{0}, {2}}));       // {2} misses block 0
  EXPECT_TRUE(DiverseBlocksValid(pool, {{0, 2}, {1, 3}}));
}

TEST(LookaheadMulti, OnlyCombinationWhenKEqualsN) {
  Harness h;
  LookaheadMulti s;
  const CandidatePool pool = PoolOf({{0}, {1}, {0, 1}});
  EXPECT_EQ(s.Select(h.Context(pool, 3)), (Selection{0, 1, 2}));
}

TEST(LookaheadMulti, TiesGoToTheFirstCombination) {
  Harness h;
  LookaheadMulti s;
  CandidatePool pool;
  for (int i = 0; i < 6; ++i) {
    pool.columns.push_back(Column::FromDense(std::vector<int>{1, 1}));
    pool.reduced_costs.push_back(-0.1);
  }
  EXPECT_EQ(s.Select(h.Context(pool, 3)), (Selection{0, 1, 2}));
  EXPECT_EQ(s.Select(h.Context(pool, 3, false)), (Selection{0, 1, 2}));
}

// Exhaustive check with the exact tableau: the chosen combination reaches
// the smallest next objective over every combination containing 0.
TEST(LookaheadMulti, MatchesExactEnumeration) {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const oracle::Csp csp = oracle::RandomTinyCsp(rng, 30, 6);
    CgConfig config;
    config.pool_size = 6;
    config.select_count = 3;
    ColumnGeneration cg(fixtures::ToInstance(csp), config);
    while (!cg.done()) {
      LookaheadMulti s;
      std::mt19937_64 local(0);
      const SelectionContext ctx{cg.pool(), 3, true, cg.master(), local, {}};
      const Selection chosen = s.Select(ctx);

      const int m = static_cast<int>(csp.lengths.size());
      auto objective_with = [&](const Selection& combo) {
        oracle::CoveringLp lp;
        lp.a.assign(m, {});
        auto add = [&](const Column& c) {
          for (int i = 0; i < m; ++i) lp.a[i].push_back(c.coef(i));
          lp.c.push_back(1);
        };
        for (const Column& c : cg.master().columns()) add(c);
        for (int idx : combo) {
          if (!cg.pool().columns[idx].empty()) add(cg.pool().columns[idx]);
        }
        for (int d : csp.demands) lp.b.push_back(d);
        return oracle::ToDouble(oracle::SolveTableau(lp).objective);
      };
      double best = 1e100;
      const int n = cg.pool().size();
      const int k = std::min(3, n);
      std::vector<int> combo(k);
      std::iota(combo.begin(), combo.end(), 0);
      while (true) {
        best = std::min(best, objective_with(combo));
        int i = k - 1;
        while (i >= 0 && combo[i] == n - k + i) --i;
        if (i <= 0) break;  // index 0 stays fixed
        ++combo[i];
        for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      }
      EXPECT_NEAR(objective_with(chosen), best, 1e-9);
      EXPECT_EQ(chosen[0], 0);
      ++checked;
      cg.Apply(chosen);
    }
  }
  EXPECT_GE(checked, 10);
}

TEST(MakeStrategy, NamesAndErrors) {
  for (std::string_view name : kBuiltinStrategies) EXPECT_EQ(MakeStrategy(name)->name(), name);
  EXPECT_THROW(MakeStrategy("external"), std::invalid_argument);
  EXPECT_THROW(MakeStrategy("milp-m"), std::invalid_argument);
}

TEST(ValidateAction, ProtocolRules) {
  EXPECT_NO_THROW(ValidateAction(std::vector<int>{0, 2, 3, 5, 7}, 10, 5, true));
  EXPECT_THROW(ValidateAction(std::vector<int>{0, 2, 2, 5, 7}, 10, 5, true), ProtocolError);
  EXPECT_THROW(ValidateAction(std::vector<int>{0, 2, 3}, 10, 5, true), ProtocolError);
  EXPECT_THROW(ValidateAction(std::vector<int>{0, 2, 3, 5, 10}, 10, 5, true), ProtocolError);
  EXPECT_THROW(ValidateAction(std::vector<int>{1, 2, 3, 5, 7}, 10, 5, true), ProtocolError);
  EXPECT_NO_THROW(ValidateAction(std::vector<int>{1, 2, 3, 5, 7}, 10, 5, false));
  EXPECT_NO_THROW(ValidateAction(std::vector<int>{2, 0, 1}, 3, 5, true));
}

TEST(ExternalPolicy, PassesValidRepliesThrough) {
  Harness h;
  std::istringstream replies("{\"action\":[0,2,3,5,7]}\n{\"action\":[0,0,1,2,3]}\n");
  std::ostringstream requests;
  StreamPolicyChannel channel(replies, requests);
  ExternalPolicy policy(channel);
  const CandidatePool pool = PoolOfSize(10);
  auto ctx = h.Context(pool, 5);
  CgConfig config;
  ColumnGeneration cg(fixtures::TenRoll(), config);
  ctx.snapshot = [&cg] { return cg.Snapshot(); };
  EXPECT_EQ(policy.Select(ctx), (Selection{0, 2, 3, 5, 7}));
  EXPECT_NE(requests.str().find(R"({"cmd":"select","k":5,"state":{)"), std::string::npos);
  EXPECT_THROW(policy.Select(ctx), ProtocolError);  // duplicate index
  EXPECT_THROW(policy.Select(ctx), ProtocolError);  // stream exhausted
}

TEST(ExternalPolicy, RejectsMalformedReplies) {
  Harness h;
  std::istringstream replies("not json\n{\"act\":[0]}\n{\"action\":[0,1,2]}\n");
  std::ostringstream requests;
  StreamPolicyChannel channel(replies, requests);
  ExternalPolicy policy(channel);
  const CandidatePool pool = PoolOfSize(10);
  auto ctx = h.Context(pool, 5);
  CgConfig config;
  ColumnGeneration cg(fixtures::TenRoll(), config);
  ctx.snapshot = [&cg] { return cg.Snapshot(); };
  EXPECT_THROW(policy.Select(ctx), ProtocolError);
  EXPECT_THROW(policy.Select(ctx), ProtocolError);
  EXPECT_THROW(policy.Select(ctx), ProtocolError);  // wrong size
}

TEST(ProcessPolicyChannel, TalksToAChildProcess) {
  ProcessPolicyChannel channel("while read line; do echo '{\"action\":[0,1]}'; done");
  EXPECT_EQ(channel.Exchange("{}"), R"({"action":[0,1]})");
  EXPECT_EQ(channel.Exchange("{}"), R"({"action":[0,1]})");
  ProcessPolicyChannel silent("exit 0");
  EXPECT_THROW(silent.Exchange("{}"), ProtocolError);
}

}  // namespace
}  // namespace cglab
