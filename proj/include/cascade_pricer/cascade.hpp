#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cascade_pricer/buyer_model.hpp"
#include "cascade_pricer/graph.hpp"
#include "cascade_pricer/strategy.hpp"
#include "cascade_pricer/tape.hpp"

namespace cascade_pricer {

struct Offer {
  int step;
  int node;
  double price;
};

struct Purchase {
  int step;
  int node;
  double paid;
  int cashback_to;  // -1 when no cashback configured
};

/** Full record of one cascade realization. */
struct CascadeTrace {
  std::vector<Offer> offers;
  std::vector<Purchase> purchases;
  std::vector<char> active;  // final activation state, seeds included
  double total_revenue = 0.0;
  int steps = 0;

  void write(std::ostream& out) const;
};

/*
 * One synchronous cascade: nodes activated in step t-1 recommend to their
 * inactive neighbors in step t. Under ICM each received recommendation is
 * an independent chance to buy at the posted price; the node stops testing
 * once it buys. Under LTM the node holds a fixed threshold and buys when
 * the active fraction of its neighborhood clears it at the posted price.
 * Purchases take effect at the end of the step; a step without purchases
 * ends the process. Revenue is the sum of prices paid minus the cashback
 * per purchase.
 */
CascadeTrace simulate_once(const Graph& g, const SeedSet& seeds, const PricingStrategy& s,
                           const BuyerModel& m, const ThresholdTape& tape, std::uint64_t trial);

struct RevenueEstimate {
  int trials = 0;
  double mean = 0.0;
  double std_error = 0.0;  // sample stderr, 0 for a single trial
};

void write_estimate_csv(const RevenueEstimate& e, std::ostream& out);

/*
 * Monte Carlo mean over trials [first_trial, first_trial + trials). The
 * per-trial revenues land in a vector indexed by trial and the reduction
 * is sequential, so the result is bit-identical for any thread count.
 */
RevenueEstimate estimate_revenue(const Graph& g, const SeedSet& seeds, const PricingStrategy& s,
                                 const BuyerModel& m, const ThresholdTape& tape, int trials,
                                 std::uint64_t first_trial = 0, int threads = 1);

struct ExactRevenue {
  double revenue = 0.0;
  std::vector<double> activation;  // P(node eventually active); 1 for seeds
};

/*
 * Exact expectation by exhausting acceptance outcomes over
 * (active set, frontier) states. ICM only; refuses graphs above 12 nodes.
 */
ExactRevenue exact_expected_revenue(const Graph& g, const SeedSet& seeds,
                                    const PricingStrategy& s, const BuyerModel& m);

}  // namespace cascade_pricer
