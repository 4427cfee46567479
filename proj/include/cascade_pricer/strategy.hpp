#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cascade_pricer/buyer_model.hpp"
#include "cascade_pricer/graph.hpp"
#include "cascade_pricer/maxleaf.hpp"

namespace cascade_pricer {

/**
 * Per-node price assignment plus an optional flat cashback paid to one
 * recommender of each purchase. Seed nodes carry a marker instead of a
 * price; all other prices lie in [0,1].
 */
class PricingStrategy {
 public:
  enum class Provenance { maxleaf, random, uniform, searched, loaded };

  static constexpr double kSeedMarker = -1.0;

  PricingStrategy() = default;
  explicit PricingStrategy(int node_count, double initial_price = 0.0);

  int node_count() const { return static_cast<int>(prices_.size()); }
  double price(int v) const;
  bool is_seed_marked(int v) const;
  const std::vector<double>& prices() const { return prices_; }

  void set_price(int v, double price);
  void mark_seed(int v);

  double cashback() const { return cashback_; }
  // Direct setter; r must stay below every positive price on offer so a
  // purchase never nets negative revenue.
  void set_cashback_value(double r);
  // Smallest positive price over non-seed nodes, +inf when all are free.
  double min_positive_price() const;

  Provenance provenance = Provenance::uniform;

 private:
  std::vector<double> prices_;
  double cashback_ = 0.0;
};

// r = z * r0 where r0 is a revenue estimate of the same strategy at r = 0
// and z in [0,1) is the fraction handed back. Scale-free in the sense that
// callers never pick an absolute r.
void set_cashback(PricingStrategy& s, double z, double r0);

/** Influence-and-exploit assignment derived from an approximate max-leaf tree. */
struct MaxLeafBuild {
  PricingStrategy strategy;
  SpanningTree tree;   // on the merged graph
  MergedGraph merged;  // mapping between original and merged ids
  int charged = 0;     // leaves that drew the paying branch
  double leaf_price = 0.0;
};

/*
 * Merges the seed set, builds the leafy spanning tree from the merged
 * seed, gives every interior node the product for free, and prices each
 * leaf at c with probability (1 - f) / 2 (free otherwise). f and c come
 * from the buyer model's complexity decomposition in the wrapper overload.
 */
MaxLeafBuild build_strategy_maxleaf(const Graph& g, const SeedSet& seeds, double f, double c,
                                    std::uint64_t rng_seed);
MaxLeafBuild build_strategy_maxleaf(const Graph& g, const SeedSet& seeds, const BuyerModel& m,
                                    std::uint64_t rng_seed);

// Independent uniform draw from the price grid at every node. Knows
// nothing about the seed set; callers mark seeds afterwards if needed.
PricingStrategy build_random_pricing(const Graph& g, const std::vector<double>& grid,
                                     std::uint64_t rng_seed);

PricingStrategy build_uniform_pricing(const Graph& g, double price);

void save_strategy(const PricingStrategy& s, std::ostream& out);
PricingStrategy load_strategy(std::istream& in);

}  // namespace cascade_pricer
