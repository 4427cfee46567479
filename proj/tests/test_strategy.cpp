#include "cascade_pricer/strategy.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cascade_pricer/errors.hpp"

namespace cascade_pricer {
namespace {

Graph path4() { return Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}}); }

Graph star(int leaves) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return Graph::from_edges(leaves + 1, edges);
}

TEST(Strategy, PathInteriorFreeLeafCoin) {
  Graph g = path4();
  bool saw_charged = false, saw_free = false;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    MaxLeafBuild b = build_strategy_maxleaf(g, SeedSet{0}, 0.0, 0.5, seed);
    EXPECT_TRUE(b.strategy.is_seed_marked(0));
    EXPECT_EQ(b.strategy.price(1), 0.0);
    EXPECT_EQ(b.strategy.price(2), 0.0);
    double leaf = b.strategy.price(3);
    if (leaf == 0.5) {
      saw_charged = true;
      EXPECT_EQ(b.charged, 1);
    } else {
      EXPECT_EQ(leaf, 0.0);
      saw_free = true;
      EXPECT_EQ(b.charged, 0);
    }
    EXPECT_EQ(b.leaf_price, 0.5);
    EXPECT_EQ(b.strategy.provenance, PricingStrategy::Provenance::maxleaf);
  }
  EXPECT_TRUE(saw_charged);
  EXPECT_TRUE(saw_free);
}

TEST(Strategy, DeterministicForFixedSeed) {
  Graph g = generate_preferential_attachment(60, 2, 5);
  MaxLeafBuild a = build_strategy_maxleaf(g, SeedSet{3}, 0.25, 0.5, 99);
  MaxLeafBuild b = build_strategy_maxleaf(g, SeedSet{3}, 0.25, 0.5, 99);
  EXPECT_EQ(a.strategy.prices(), b.strategy.prices());
  EXPECT_EQ(a.charged, b.charged);
}

// Each leaf is charged with probability (1 - f) / 2.
TEST(Strategy, LeafCoinStatistics) {
  Graph g = star(200);
  long charged = 0;
  const int runs = 100;
  for (int i = 0; i < runs; ++i) {
    MaxLeafBuild b = build_strategy_maxleaf(g, SeedSet{0}, 0.5, 0.25, static_cast<std::uint64_t>(i));
    EXPECT_EQ(static_cast<int>(b.tree.leafset().size()), 200);
    charged += b.charged;
  }
  // Binomial(20000, 1/4): mean 5000, 3 sigma ~ 184.
  EXPECT_GT(charged, 4816);
  EXPECT_LT(charged, 5184);
}

TEST(Strategy, ChargedNodesAreLeavesWithFreePathToRoot) {
  std::mt19937_64 rng(424242);
  for (int iter = 0; iter < 15; ++iter) {
    int n = 8 + static_cast<int>(rng() % 20);
    Graph g = generate_preferential_attachment(n, 2, rng());
    SeedSet seeds{static_cast<int>(rng() % static_cast<std::uint64_t>(n))};
    MaxLeafBuild b = build_strategy_maxleaf(g, seeds, 0.0, 0.75, rng());

    std::vector<char> is_leaf(static_cast<std::size_t>(b.merged.graph.node_count()), 0);
    for (int l : b.tree.leafset()) is_leaf[static_cast<std::size_t>(l)] = 1;

    for (int v = 0; v < g.node_count(); ++v) {
      if (b.strategy.is_seed_marked(v)) continue;
      if (b.strategy.price(v) == 0.0) continue;
      int mv = b.merged.to_merged[static_cast<std::size_t>(v)];
      EXPECT_TRUE(is_leaf[static_cast<std::size_t>(mv)]);
      // Everything strictly between a charged leaf and the root is free.
      for (int cur = b.tree.parent[static_cast<std::size_t>(mv)]; cur != -1;
           cur = b.tree.parent[static_cast<std::size_t>(cur)]) {
        int orig = b.merged.from_merged[static_cast<std::size_t>(cur)];
        EXPECT_TRUE(b.strategy.is_seed_marked(orig) || b.strategy.price(orig) == 0.0);
      }
    }
  }
}

TEST(Strategy, ModelOverloadUsesComplexityPrice) {
  Graph g = star(6);
  BuyerModel m = BuyerModel::icm(CostFunction::regular_steps({1.0, 0.75, 0.5, 0.25}));
  MaxLeafBuild b = build_strategy_maxleaf(g, SeedSet{0}, m, 17);
  EXPECT_EQ(b.leaf_price, 0.5);
  for (int v = 1; v <= 6; ++v) {
    double p = b.strategy.price(v);
    EXPECT_TRUE(p == 0.0 || p == 0.5);
  }
}

TEST(Strategy, DisconnectedAfterMergeRejected) {
  Graph g = Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  EXPECT_THROW(build_strategy_maxleaf(g, SeedSet{0}, 0.0, 0.5, 1), ValidationError);
}

TEST(Strategy, ParameterValidation) {
  Graph g = path4();
  EXPECT_THROW(build_strategy_maxleaf(g, SeedSet{0}, 1.0, 0.5, 1), ValidationError);
  EXPECT_THROW(build_strategy_maxleaf(g, SeedSet{0}, -0.1, 0.5, 1), ValidationError);
  EXPECT_THROW(build_strategy_maxleaf(g, SeedSet{0}, 0.0, 0.0, 1), ValidationError);
  EXPECT_THROW(build_strategy_maxleaf(g, SeedSet{0}, 0.0, 1.5, 1), ValidationError);
}

TEST(Strategy, RandomPricingDrawsFromGrid) {
  Graph g = generate_preferential_attachment(300, 2, 11);
  std::vector<double> grid{0.0, 0.25, 0.5};
  PricingStrategy s = build_random_pricing(g, grid, 7);
  int zeros = 0;
  for (int v = 0; v < 300; ++v) {
    double p = s.price(v);
    EXPECT_TRUE(p == 0.0 || p == 0.25 || p == 0.5);
    if (p == 0.0) ++zeros;
  }
  // Binomial(300, 1/3): mean 100, 3 sigma ~ 24.5.
  EXPECT_GT(zeros, 75);
  EXPECT_LT(zeros, 125);
  EXPECT_EQ(s.provenance, PricingStrategy::Provenance::random);

  PricingStrategy again = build_random_pricing(g, grid, 7);
  EXPECT_EQ(s.prices(), again.prices());
  PricingStrategy other = build_random_pricing(g, grid, 8);
  EXPECT_NE(s.prices(), other.prices());

  EXPECT_THROW(build_random_pricing(g, {}, 1), ValidationError);
  EXPECT_THROW(build_random_pricing(g, {0.5, 1.5}, 1), ValidationError);
}

TEST(Strategy, UniformPricing) {
  Graph g = path4();
  PricingStrategy s = build_uniform_pricing(g, 0.75);
  for (int v = 0; v < 4; ++v) EXPECT_EQ(s.price(v), 0.75);
  EXPECT_THROW(build_uniform_pricing(g, 1.25), ValidationError);
}

TEST(Strategy, CashbackFractionOfReference) {
  PricingStrategy s(3, 0.0);
  s.set_price(1, 0.5);
  s.set_price(2, 0.25);
  EXPECT_EQ(s.min_positive_price(), 0.25);

  set_cashback(s, 0.5, 0.4);
  EXPECT_DOUBLE_EQ(s.cashback(), 0.2);

  EXPECT_THROW(set_cashback(s, 1.0, 0.1), ValidationError);
  EXPECT_THROW(set_cashback(s, -0.1, 0.1), ValidationError);
  // r equal to the cheapest positive price is rejected too.
  EXPECT_THROW(s.set_cashback_value(0.25), ValidationError);
  s.set_cashback_value(0.0);
  EXPECT_EQ(s.cashback(), 0.0);
}

TEST(Strategy, SaveLoadRoundTrip) {
  Graph g = path4();
  MaxLeafBuild b = build_strategy_maxleaf(g, SeedSet{0}, 0.0, 0.5, 3);
  b.strategy.set_cashback_value(b.charged > 0 ? 0.125 : 0.0);

  std::stringstream buf;
  save_strategy(b.strategy, buf);
  PricingStrategy loaded = load_strategy(buf);

  ASSERT_EQ(loaded.node_count(), 4);
  EXPECT_TRUE(loaded.is_seed_marked(0));
  for (int v = 1; v < 4; ++v) EXPECT_EQ(loaded.price(v), b.strategy.price(v));
  EXPECT_EQ(loaded.cashback(), b.strategy.cashback());
  EXPECT_EQ(loaded.provenance, PricingStrategy::Provenance::loaded);
}

TEST(Strategy, LoadRejectsBadInput) {
  {
    std::stringstream buf("# nodes 2\n0 0.5\n0 0.25\n1 0\n");
    EXPECT_THROW(load_strategy(buf), ParseError);
  }
  {
    std::stringstream buf("# nodes 3\n0 0.5\n1 0\n");
    EXPECT_THROW(load_strategy(buf), ParseError);  // node 2 missing
  }
  {
    std::stringstream buf("# nodes 2\n0 pricey\n1 0\n");
    EXPECT_THROW(load_strategy(buf), ParseError);
  }
  {
    std::stringstream buf("0 0.5\n2 0.25\n1 0\n");
    PricingStrategy s = load_strategy(buf);  // node count inferred
    EXPECT_EQ(s.node_count(), 3);
    EXPECT_EQ(s.price(2), 0.25);
  }
}

}  // namespace
}  // namespace cascade_pricer
