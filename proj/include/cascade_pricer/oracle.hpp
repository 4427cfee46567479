#pragma once

#include <vector>

#include "cascade_pricer/cascade.hpp"

namespace cascade_pricer {

struct NonAdaptiveOptimum {
  PricingStrategy strategy;  // lexicographically first argmax over the grid
  double revenue = 0.0;
};

/*
 * Exhausts every static grid assignment over the non-seed nodes and
 * scores each with the exact cascade expectation. Intended for small
 * fixtures; refuses more than 2^20 assignments.
 */
NonAdaptiveOptimum optimal_nonadaptive_bruteforce(const Graph& g, const SeedSet& seeds,
                                                  const BuyerModel& m,
                                                  const std::vector<double>& grid);

/*
 * Value of the best adaptive policy: prices are chosen per step per
 * target with full knowledge of the history. Dynamic program over
 * (active set, frontier) states, maximizing over price tuples for the
 * current targets. ICM only, 12 nodes max.
 */
double optimal_adaptive_value(const Graph& g, const SeedSet& seeds, const BuyerModel& m,
                              const std::vector<double>& grid);

/** Fixture where adapting prices to observed purchases beats any static assignment. */
struct GapInstance {
  Graph graph;
  SeedSet seeds;
  BuyerModel model;
  std::vector<double> grid;
};

// 4-cycle with two pendants behind one node; sell at 1 with acceptance
// 1/2 or give away. Static optimum 2, adaptive optimum 17/8.
GapInstance adaptivity_gap_instance();

/*
 * Pricing instance whose optimal free set encodes minimum vertex cover
 * of a source graph. Root 0 neighbors every source vertex; each source
 * edge becomes a gadget node adjacent to its endpoints and to k fresh
 * pendants. Buyers accept price 1 with probability p = 1/(4d), d the
 * max source degree.
 */
struct HardnessInstance {
  Graph graph;
  SeedSet seeds;    // the root
  BuyerModel model;
  Graph source;
  double p = 0.0;
  int d = 0;
  int k = 0;
  std::vector<int> layer;      // 0 root, 1 source vertex, 2 edge gadget, 3 pendant
  std::vector<int> vertex_of;  // graph id of each source vertex
  std::vector<int> gadget_of;  // graph id of each source edge, in edges() order
};

// k defaults to 20 * d, matching the regime where the pendant revenue
// dominates and only covers are competitive.
HardnessInstance build_hardness_instance(const Graph& source, int k = -1);

bool verify_hardness_structure(const HardnessInstance& inst);

/*
 * Exact expected revenue of the strategy that gives the product away on
 * C (source vertex ids), on every edge gadget and on the root, and asks
 * price 1 elsewhere. Requires C to be a vertex cover so every gadget is
 * reached for sure: revenue = sum over uncovered v of
 * 1 - (1-p)^(deg(v)+1), plus p per pendant.
 */
double hardness_cover_revenue(const HardnessInstance& inst, const std::vector<int>& cover);

/*
 * Same strategy for an arbitrary free subset S of source vertices, no
 * cover assumption. Exact: the pendant-free core goes through the
 * cascade expectation oracle and each pendant contributes
 * p * P(its gadget activates).
 */
double hardness_subset_revenue(const HardnessInstance& inst, const std::vector<int>& subset);

}  // namespace cascade_pricer
