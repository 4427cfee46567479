#include "cascade_pricer/cascade.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cascade_pricer/errors.hpp"

namespace cascade_pricer {
namespace {

BuyerModel affine_icm() { return BuyerModel::icm(CostFunction::affine()); }

PricingStrategy priced(int n, std::vector<std::pair<int, double>> prices, int seed_node) {
  PricingStrategy s(n, 0.0);
  for (auto [v, p] : prices) s.set_price(v, p);
  s.mark_seed(seed_node);
  return s;
}

TEST(ExactRevenue, SingleEdge) {
  Graph g = Graph::from_edges(2, {{0, 1}});
  ExactRevenue r = exact_expected_revenue(g, SeedSet{0}, priced(2, {{1, 0.5}}, 0), affine_icm());
  EXPECT_DOUBLE_EQ(r.revenue, 0.25);
  EXPECT_DOUBLE_EQ(r.activation[0], 1.0);
  EXPECT_DOUBLE_EQ(r.activation[1], 0.5);
}

TEST(ExactRevenue, FreeRelayThenPricedEnd) {
  Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  ExactRevenue r = exact_expected_revenue(g, SeedSet{0}, priced(3, {{2, 0.5}}, 0), affine_icm());
  EXPECT_DOUBLE_EQ(r.revenue, 0.25);
  EXPECT_DOUBLE_EQ(r.activation[1], 1.0);
  EXPECT_DOUBLE_EQ(r.activation[2], 0.5);
}

TEST(ExactRevenue, StarLeavesIndependent) {
  Graph g = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  PricingStrategy s = priced(4, {{1, 0.5}, {2, 0.5}, {3, 0.5}}, 0);
  ExactRevenue r = exact_expected_revenue(g, SeedSet{0}, s, affine_icm());
  EXPECT_DOUBLE_EQ(r.revenue, 0.75);
}

// Triangle with both non-seeds at 1/2: a node rejected in step 1 gets a
// second chance when the other one buys. E = 1/4 + 2 * (1/4) * 3/4 = 5/8.
TEST(ExactRevenue, TriangleSecondChance) {
  Graph g = Graph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  PricingStrategy s = priced(3, {{1, 0.5}, {2, 0.5}}, 0);
  ExactRevenue r = exact_expected_revenue(g, SeedSet{0}, s, affine_icm());
  EXPECT_DOUBLE_EQ(r.revenue, 0.625);
  EXPECT_DOUBLE_EQ(r.activation[1], 0.625);
  EXPECT_DOUBLE_EQ(r.activation[2], 0.625);
}

TEST(ExactRevenue, StepCostStar) {
  Graph g = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  PricingStrategy s = priced(4, {{1, 1.0}, {2, 1.0}, {3, 1.0}}, 0);
  BuyerModel m = BuyerModel::icm(CostFunction::regular_steps({1.0, 0.75, 0.5, 0.25}));
  ExactRevenue r = exact_expected_revenue(g, SeedSet{0}, s, m);
  EXPECT_DOUBLE_EQ(r.revenue, 0.75);
  EXPECT_DOUBLE_EQ(r.activation[1], 0.25);
}

TEST(ExactRevenue, CashbackSubtractedPerPurchase) {
  Graph g = Graph::from_edges(2, {{0, 1}});
  PricingStrategy s = priced(2, {{1, 0.5}}, 0);
  s.set_cashback_value(0.1);
  ExactRevenue r = exact_expected_revenue(g, SeedSet{0}, s, affine_icm());
  EXPECT_DOUBLE_EQ(r.revenue, 0.2);
}

TEST(ExactRevenue, RefusesLtmAndLargeGraphs) {
  Graph g = Graph::from_edges(2, {{0, 1}});
  BuyerModel ltm = BuyerModel::ltm(InfluenceFunction::affine());
  EXPECT_THROW(exact_expected_revenue(g, SeedSet{0}, priced(2, {}, 0), ltm), ValidationError);

  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v + 1 < 13; ++v) edges.push_back({v, v + 1});
  Graph big = Graph::from_edges(13, edges);
  PricingStrategy s(13, 0.5);
  s.mark_seed(0);
  EXPECT_THROW(exact_expected_revenue(big, SeedSet{0}, s, affine_icm()), BudgetError);
}

// Lowering a node's own price never lowers its activation probability.
TEST(ExactRevenue, ActivationMonotoneInOwnPrice) {
  std::mt19937_64 rng(555);
  for (int iter = 0; iter < 10; ++iter) {
    int n = 4 + static_cast<int>(rng() % 5);
    Graph g = generate_preferential_attachment(n, 2, rng());
    PricingStrategy s = build_random_pricing(g, {0.0, 0.25, 0.5, 0.75, 1.0}, rng());
    int v = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
    if (s.price(v) < 0.25) s.set_price(v, 0.75);
    ExactRevenue high = exact_expected_revenue(g, SeedSet{0}, s, affine_icm());
    double before = s.price(v);
    s.set_price(v, before - 0.25);
    ExactRevenue low = exact_expected_revenue(g, SeedSet{0}, s, affine_icm());
    EXPECT_GE(low.activation[static_cast<std::size_t>(v)],
              high.activation[static_cast<std::size_t>(v)] - 1e-12)
        << "node " << v << " price " << before;
  }
}

TEST(Simulate, EdgeTraceContent) {
  Graph g = Graph::from_edges(2, {{0, 1}});
  PricingStrategy s = priced(2, {{1, 0.0}}, 0);
  ThresholdTape tape(1);
  CascadeTrace t = simulate_once(g, SeedSet{0}, s, affine_icm(), tape, 0);
  EXPECT_EQ(t.steps, 1);
  ASSERT_EQ(t.offers.size(), 1u);
  EXPECT_EQ(t.offers[0].node, 1);
  EXPECT_EQ(t.offers[0].price, 0.0);
  ASSERT_EQ(t.purchases.size(), 1u);
  EXPECT_EQ(t.purchases[0].cashback_to, -1);
  EXPECT_EQ(t.total_revenue, 0.0);
  EXPECT_TRUE(t.active[0] && t.active[1]);

  std::stringstream out;
  t.write(out);
  EXPECT_EQ(out.str(), "t=1 offer v=1 price=0\nt=1 buy v=1 pays=0\n");
}

TEST(Simulate, CashbackGoesToARecommender) {
  Graph g = Graph::from_edges(2, {{0, 1}});
  PricingStrategy s = priced(2, {{1, 0.5}}, 0);
  s.set_cashback_value(0.1);
  ThresholdTape tape(7);
  bool saw_purchase = false;
  for (std::uint64_t trial = 0; trial < 32 && !saw_purchase; ++trial) {
    CascadeTrace t = simulate_once(g, SeedSet{0}, s, affine_icm(), tape, trial);
    if (t.purchases.empty()) continue;
    saw_purchase = true;
    EXPECT_EQ(t.purchases[0].cashback_to, 0);
    EXPECT_DOUBLE_EQ(t.total_revenue, 0.4);
  }
  EXPECT_TRUE(saw_purchase);
}

// Raising the price of a node that the cascade never reached must leave
// the realization untouched: coins are addressed per node and event, not
// by global order.
TEST(Simulate, ReplayStableUnderDownstreamEdits) {
  Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  ThresholdTape tape(11);
  std::uint64_t trial = 0;
  while (tape.uniform(trial, 1, 0) < 0.5) ++trial;  // node 1 rejects 0.5

  PricingStrategy a = priced(3, {{1, 0.5}, {2, 0.5}}, 0);
  PricingStrategy b = priced(3, {{1, 0.5}, {2, 0.9}}, 0);
  CascadeTrace ta = simulate_once(g, SeedSet{0}, a, affine_icm(), tape, trial);
  CascadeTrace tb = simulate_once(g, SeedSet{0}, b, affine_icm(), tape, trial);

  std::stringstream sa, sb;
  ta.write(sa);
  tb.write(sb);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(ta.total_revenue, 0.0);
  EXPECT_EQ(ta.steps, 1);
}

TEST(Simulate, LtmFreeProductSpreadsEverywhere) {
  Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  PricingStrategy s(4, 0.0);
  s.mark_seed(0);
  BuyerModel m = BuyerModel::ltm(InfluenceFunction::affine());
  CascadeTrace t = simulate_once(g, SeedSet{0}, s, m, ThresholdTape(3), 0);
  EXPECT_EQ(t.steps, 3);
  EXPECT_EQ(t.purchases.size(), 3u);
  EXPECT_EQ(t.total_revenue, 0.0);
  for (char a : t.active) EXPECT_TRUE(a);
}

// Triangle under LTM with both prices 1/2 and B(x) = 1 - x. A node buys
// in step 1 iff theta <= 1/4; a lone step-1 rejecter is re-tested with
// the same theta against alpha = 1. E = 1/16 + (6/16) * (1/2 + 1/6) = 5/16.
TEST(Simulate, LtmThresholdReevaluatedAsInfluenceGrows) {
  Graph g = Graph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  PricingStrategy s = priced(3, {{1, 0.5}, {2, 0.5}}, 0);
  BuyerModel m = BuyerModel::ltm(InfluenceFunction::affine());
  ThresholdTape tape(2026);
  RevenueEstimate e = estimate_revenue(g, SeedSet{0}, s, m, tape, 100000);
  EXPECT_NEAR(e.mean, 0.3125, 3 * e.std_error + 1e-12);
}

TEST(Estimate, MatchesExactOnTriangle) {
  Graph g = Graph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  PricingStrategy s = priced(3, {{1, 0.5}, {2, 0.5}}, 0);
  ThresholdTape tape(99);
  RevenueEstimate e = estimate_revenue(g, SeedSet{0}, s, affine_icm(), tape, 50000);
  EXPECT_NEAR(e.mean, 0.625, 3 * e.std_error + 1e-12);
}

TEST(Estimate, MatchesExactOnRandomInstance) {
  Graph g = generate_preferential_attachment(8, 2, 3);
  PricingStrategy s = build_random_pricing(g, {0.0, 0.25, 0.5, 0.75, 1.0}, 5);
  ExactRevenue exact = exact_expected_revenue(g, SeedSet{0}, s, affine_icm());
  RevenueEstimate e = estimate_revenue(g, SeedSet{0}, s, affine_icm(), ThresholdTape(41), 30000);
  EXPECT_NEAR(e.mean, exact.revenue, 3 * e.std_error + 1e-12);
}

TEST(Estimate, BitIdenticalAcrossThreadCounts) {
  Graph g = generate_preferential_attachment(50, 2, 9);
  PricingStrategy s = build_random_pricing(g, {0.0, 0.25, 0.5, 0.75, 1.0}, 5);
  ThresholdTape tape(123);
  RevenueEstimate one = estimate_revenue(g, SeedSet{0}, s, affine_icm(), tape, 400, 0, 1);
  RevenueEstimate four = estimate_revenue(g, SeedSet{0}, s, affine_icm(), tape, 400, 0, 4);
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.std_error, four.std_error);
}

TEST(Estimate, TrialWindowMatters) {
  Graph g = generate_preferential_attachment(30, 2, 9);
  PricingStrategy s = build_random_pricing(g, {0.25, 0.5}, 5);
  ThresholdTape tape(123);
  RevenueEstimate a = estimate_revenue(g, SeedSet{0}, s, affine_icm(), tape, 200, 0);
  RevenueEstimate b = estimate_revenue(g, SeedSet{0}, s, affine_icm(), tape, 200, 200);
  RevenueEstimate a2 = estimate_revenue(g, SeedSet{0}, s, affine_icm(), tape, 200, 0);
  EXPECT_EQ(a.mean, a2.mean);
  EXPECT_NE(a.mean, b.mean);
}

TEST(Estimate, SingleTrialHasZeroError) {
  Graph g = Graph::from_edges(2, {{0, 1}});
  RevenueEstimate e =
      estimate_revenue(g, SeedSet{0}, priced(2, {{1, 0.5}}, 0), affine_icm(), ThresholdTape(1), 1);
  EXPECT_EQ(e.std_error, 0.0);
  EXPECT_EQ(e.trials, 1);
}

TEST(Estimate, CsvFormat) {
  Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  PricingStrategy s(3, 0.0);
  s.mark_seed(0);
  RevenueEstimate e = estimate_revenue(g, SeedSet{0}, s, affine_icm(), ThresholdTape(1), 3);
  std::stringstream out;
  write_estimate_csv(e, out);
  EXPECT_EQ(out.str(), "trials,mean,stderr\n3,0,0\n");
}

TEST(Simulate, ValidatesInputs) {
  Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  ThresholdTape tape(1);
  BuyerModel m = affine_icm();

  PricingStrategy wrong_size(2, 0.5);
  EXPECT_THROW(simulate_once(g, SeedSet{0}, wrong_size, m, tape, 0), ValidationError);

  PricingStrategy stray_mark(3, 0.5);
  stray_mark.mark_seed(1);
  EXPECT_THROW(simulate_once(g, SeedSet{0}, stray_mark, m, tape, 0), ValidationError);

  PricingStrategy ok(3, 0.5);
  EXPECT_THROW(simulate_once(g, SeedSet(std::vector<int>{}), ok, m, tape, 0), ValidationError);
  EXPECT_THROW(simulate_once(g, SeedSet{5}, ok, m, tape, 0), ValidationError);
  EXPECT_THROW(estimate_revenue(g, SeedSet{0}, ok, m, tape, 0), ValidationError);
  EXPECT_THROW(estimate_revenue(g, SeedSet{0}, ok, m, tape, 10, 0, 0), ValidationError);
}

TEST(Tape, DeterministicAndInRange) {
  ThresholdTape tape(77);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double u = tape.uniform(static_cast<std::uint64_t>(i), 3, 1);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    sum += u;
  }
  // Mean of 20000 uniforms: 0.5 +- 3 / sqrt(12 * 20000) ~ 0.0061.
  EXPECT_NEAR(sum / 20000, 0.5, 0.0062);

  EXPECT_EQ(tape.uniform(4, 5, 6), tape.uniform(4, 5, 6));
  EXPECT_NE(tape.uniform(4, 5, 6), tape.uniform(4, 5, 7));
  EXPECT_NE(tape.uniform(4, 5, 6), tape.uniform(4, 6, 6));
  EXPECT_NE(tape.uniform(4, 5, 6), tape.uniform(5, 5, 6));
  EXPECT_NE(tape.uniform(4, 5, 6), ThresholdTape(78).uniform(4, 5, 6));
  EXPECT_NE(tape.uniform(4, 5, ThresholdTape::kCashbackEvent), tape.uniform(4, 5, 0));
}

}  // namespace
}  // namespace cascade_pricer
