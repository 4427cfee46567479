#include "cascade_pricer/local_search.hpp"

#include <algorithm>

#include "cascade_pricer/errors.hpp"

namespace cascade_pricer {

RevenueEstimate evaluate_candidate(const Graph& g, const SeedSet& seeds,
                                   const PricingStrategy& s, int node, double price,
                                   const BuyerModel& m, const ThresholdTape& tape, int trials,
                                   std::uint64_t first_trial, int threads) {
  PricingStrategy candidate = s;
  candidate.set_price(node, price);
  return estimate_revenue(g, seeds, candidate, m, tape, trials, first_trial, threads);
}

SearchResult local_search_improve(const Graph& g, const SeedSet& seeds, PricingStrategy start,
                                  const BuyerModel& m, const ThresholdTape& tape,
                                  const SearchConfig& cfg) {
  if (cfg.grid.empty()) throw ValidationError("empty candidate price grid");
  for (double p : cfg.grid)
    if (p < 0.0 || p > 1.0) throw ValidationError("price outside [0, 1]");
  if (cfg.trials_per_estimate < 1) throw ValidationError("at least one trial per estimate");
  if (cfg.max_passes < 1) throw ValidationError("at least one pass");
  if (cfg.threads < 1) throw ValidationError("thread count must be positive");

  std::vector<char> skip(static_cast<std::size_t>(g.node_count()), 0);
  for (int v : seeds.ids()) skip[static_cast<std::size_t>(v)] = 1;

  std::vector<int> order;
  for (int v = 0; v < g.node_count(); ++v)
    if (!skip[static_cast<std::size_t>(v)]) order.push_back(v);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.degree(a) > g.degree(b); });

  SearchResult out;
  out.strategy = std::move(start);
  const auto T = static_cast<std::uint64_t>(cfg.trials_per_estimate);

  bool capped = false;
  for (int pass = 0; pass < cfg.max_passes && !capped; ++pass) {
    const std::uint64_t block = static_cast<std::uint64_t>(pass) * T;
    RevenueEstimate incumbent = estimate_revenue(g, seeds, out.strategy, m, tape,
                                                 cfg.trials_per_estimate, block, cfg.threads);
    out.passes = pass + 1;
    bool adopted_any = false;

    for (int v : order) {
      if (cfg.max_visits >= 0 && out.visits >= cfg.max_visits) {
        capped = true;
        break;
      }
      const long iteration = out.visits++;
      const double current = out.strategy.price(v);

      bool have_best = false;
      double best_price = current;
      RevenueEstimate best;
      for (double p : cfg.grid) {
        if (p == current) continue;
        RevenueEstimate e = evaluate_candidate(g, seeds, out.strategy, v, p, m, tape,
                                               cfg.trials_per_estimate, block, cfg.threads);
        if (!have_best || e.mean > best.mean) {
          have_best = true;
          best = e;
          best_price = p;
        }
      }

      const double eps = cfg.epsilon >= 0.0 ? cfg.epsilon : 2.0 * best.std_error;
      if (have_best && best.mean > incumbent.mean + eps) {
        out.strategy.set_price(v, best_price);
        incumbent = best;
        adopted_any = true;
        out.history.push_back({iteration, v, true, best_price, best.mean, best.std_error});
      } else {
        out.history.push_back({iteration, v, false, current, incumbent.mean, incumbent.std_error});
      }
    }

    out.final_estimate = incumbent;
    if (!adopted_any) break;
  }

  out.strategy.provenance = PricingStrategy::Provenance::searched;
  return out;
}

}  // namespace cascade_pricer
