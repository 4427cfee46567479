#include "cascade_pricer/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "cascade_pricer/errors.hpp"

namespace cascade_pricer {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_node(const PricingStrategy& s, int v) {
  if (v < 0 || v >= s.node_count()) throw ValidationError("node id out of range");
}

}  // namespace

PricingStrategy::PricingStrategy(int node_count, double initial_price) {
  if (node_count < 0) throw ValidationError("negative node count");
  if (initial_price < 0.0 || initial_price > 1.0)
    throw ValidationError("price outside [0, 1]");
  prices_.assign(static_cast<std::size_t>(node_count), initial_price);
}

double PricingStrategy::price(int v) const {
  check_node(*this, v);
  return prices_[static_cast<std::size_t>(v)];
}

bool PricingStrategy::is_seed_marked(int v) const {
  check_node(*this, v);
  return prices_[static_cast<std::size_t>(v)] == kSeedMarker;
}

void PricingStrategy::set_price(int v, double price) {
  check_node(*this, v);
  if (price < 0.0 || price > 1.0) throw ValidationError("price outside [0, 1]");
  prices_[static_cast<std::size_t>(v)] = price;
}

void PricingStrategy::mark_seed(int v) {
  check_node(*this, v);
  prices_[static_cast<std::size_t>(v)] = kSeedMarker;
}

double PricingStrategy::min_positive_price() const {
  double best = std::numeric_limits<double>::infinity();
  for (double p : prices_)
    if (p > 0.0 && p < best) best = p;
  return best;
}

void PricingStrategy::set_cashback_value(double r) {
  if (r < 0.0 || !std::isfinite(r)) throw ValidationError("cashback must be finite and nonnegative");
  if (r > 0.0 && r >= min_positive_price())
    throw ValidationError("cashback must stay below the cheapest positive price");
  cashback_ = r;
}

void set_cashback(PricingStrategy& s, double z, double r0) {
  if (z < 0.0 || z >= 1.0) throw ValidationError("cashback fraction must lie in [0, 1)");
  if (r0 < 0.0 || !std::isfinite(r0)) throw ValidationError("reference revenue must be finite and nonnegative");
  s.set_cashback_value(z * r0);
}

MaxLeafBuild build_strategy_maxleaf(const Graph& g, const SeedSet& seeds, double f, double c,
                                    std::uint64_t rng_seed) {
  if (f < 0.0 || f >= 1.0) throw ValidationError("free-rider bias f must lie in [0, 1)");
  if (c <= 0.0 || c > 1.0) throw ValidationError("leaf price c must lie in (0, 1]");

  MaxLeafBuild out;
  out.merged = merge_seed_set(g, seeds);
  if (!out.merged.graph.connected())
    throw ValidationError("graph is disconnected after merging the seed set");
  out.tree = approx_max_leaf_tree(out.merged.graph, out.merged.seed);
  out.leaf_price = c;

  PricingStrategy s(g.node_count(), 0.0);
  for (int v : seeds.ids()) s.mark_seed(v);

  // Leaves in ascending merged id so one rng_seed fixes every coin.
  std::mt19937_64 rng(rng_seed);
  const double free_prob = (1.0 + f) / 2.0;
  for (int leaf : out.tree.leafset()) {
    int orig = out.merged.from_merged[static_cast<std::size_t>(leaf)];
    if (unit_uniform(rng) < free_prob) {
      s.set_price(orig, 0.0);
    } else {
      s.set_price(orig, c);
      ++out.charged;
    }
  }
  s.provenance = PricingStrategy::Provenance::maxleaf;
  out.strategy = std::move(s);
  return out;
}

MaxLeafBuild build_strategy_maxleaf(const Graph& g, const SeedSet& seeds, const BuyerModel& m,
                                    std::uint64_t rng_seed) {
  ModelComplexity mc = m.complexity();
  return build_strategy_maxleaf(g, seeds, mc.f, mc.c, rng_seed);
}

PricingStrategy build_random_pricing(const Graph& g, const std::vector<double>& grid,
                                     std::uint64_t rng_seed) {
  if (grid.empty()) throw ValidationError("price grid is empty");
  for (double p : grid)
    if (p < 0.0 || p > 1.0) throw ValidationError("price outside [0, 1]");

  std::mt19937_64 rng(rng_seed);
  PricingStrategy s(g.node_count(), 0.0);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  for (int v = 0; v < g.node_count(); ++v) s.set_price(v, grid[pick(rng)]);
  s.provenance = PricingStrategy::Provenance::random;
  return s;
}

PricingStrategy build_uniform_pricing(const Graph& g, double price) {
  PricingStrategy s(g.node_count(), price);
  s.provenance = PricingStrategy::Provenance::uniform;
  return s;
}

void save_strategy(const PricingStrategy& s, std::ostream& out) {
  char buf[64];
  out << "# nodes " << s.node_count() << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", s.cashback());
  out << "# cashback " << buf << "\n";
  for (int v = 0; v < s.node_count(); ++v) {
    if (s.is_seed_marked(v)) {
      out << v << " seed\n";
    } else {
      std::snprintf(buf, sizeof buf, "%.17g", s.price(v));
      out << v << " " << buf << "\n";
    }
  }
}

PricingStrategy load_strategy(std::istream& in) {
  int node_count = -1;
  double cashback = 0.0;
  std::vector<std::pair<int, double>> entries;  // price or kSeedMarker
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "#") {
      std::string key;
      if (!(ls >> key)) continue;
      if (key == "nodes") {
        if (!(ls >> node_count) || node_count < 0)
          throw ParseError("line " + std::to_string(lineno) + ": bad node count");
      } else if (key == "cashback") {
        if (!(ls >> cashback))
          throw ParseError("line " + std::to_string(lineno) + ": bad cashback value");
      }
      continue;
    }
    int v = 0;
    std::string tok;
    try {
      v = std::stoi(first);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(lineno) + ": expected a node id");
    }
    if (!(ls >> tok)) throw ParseError("line " + std::to_string(lineno) + ": missing price");
    if (tok == "seed") {
      entries.emplace_back(v, PricingStrategy::kSeedMarker);
    } else {
      try {
        entries.emplace_back(v, std::stod(tok));
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad price '" + tok + "'");
      }
    }
  }
  if (node_count < 0) {
    for (const auto& [v, p] : entries) node_count = std::max(node_count, v + 1);
    if (node_count < 0) node_count = 0;
  }
  PricingStrategy s(node_count, 0.0);
  std::vector<char> seen(static_cast<std::size_t>(node_count), 0);
  for (const auto& [v, p] : entries) {
    if (v < 0 || v >= node_count) throw ValidationError("node id out of range in strategy file");
    if (seen[static_cast<std::size_t>(v)]) throw ParseError("duplicate entry for node " + std::to_string(v));
    seen[static_cast<std::size_t>(v)] = 1;
    if (p == PricingStrategy::kSeedMarker)
      s.mark_seed(v);
    else
      s.set_price(v, p);
  }
  for (int v = 0; v < node_count; ++v)
    if (!seen[static_cast<std::size_t>(v)])
      throw ParseError("no entry for node " + std::to_string(v));
  s.set_cashback_value(cashback);
  s.provenance = PricingStrategy::Provenance::loaded;
  return s;
}

}  // namespace cascade_pricer
