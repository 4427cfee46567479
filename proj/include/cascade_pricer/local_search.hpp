#pragma once

#include <cstdint>
#include <vector>

#include "cascade_pricer/cascade.hpp"

namespace cascade_pricer {

struct SearchConfig {
  std::vector<double> grid;      // candidate prices per node
  int trials_per_estimate = 1000;
  int max_passes = 10;
  long max_visits = -1;          // total node visits, -1 for no cap
  // Adoption threshold: a candidate must beat the incumbent estimate by
  // more than this. Negative means 2x the candidate's stderr.
  double epsilon = -1.0;
  int threads = 1;
};

/** One node visit during the search. */
struct SearchStep {
  long iteration;   // 0-based visit counter across passes
  int node;
  bool adopted;
  double price;     // node's price after the visit
  double estimate;  // incumbent estimate after the visit
  double std_error;
};

struct SearchResult {
  PricingStrategy strategy;
  RevenueEstimate final_estimate;
  std::vector<SearchStep> history;
  int passes = 0;
  long visits = 0;
};

// Estimate of the start strategy with one node repriced, on an explicit
// trial window so alternatives share their randomness.
RevenueEstimate evaluate_candidate(const Graph& g, const SeedSet& seeds,
                                   const PricingStrategy& s, int node, double price,
                                   const BuyerModel& m, const ThresholdTape& tape, int trials,
                                   std::uint64_t first_trial, int threads = 1);

/*
 * Coordinate-wise hill climbing over per-node prices. Nodes are visited
 * in descending degree order (ties by id); each pass draws a fresh trial
 * block and re-estimates the incumbent on it, so successive passes cannot
 * overfit one sample. All candidates within a pass share the block:
 * comparisons use common random numbers. Stops after an adoption-free
 * pass, max_passes, or max_visits.
 */
SearchResult local_search_improve(const Graph& g, const SeedSet& seeds, PricingStrategy start,
                                  const BuyerModel& m, const ThresholdTape& tape,
                                  const SearchConfig& cfg);

}  // namespace cascade_pricer
