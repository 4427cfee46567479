#include "cascade_pricer/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>
#include <unordered_map>
#include <utility>

#include "cascade_pricer/errors.hpp"

namespace cascade_pricer {

namespace {

struct Prepared {
  const Graph* g = nullptr;
  std::vector<int> seeds;       // ascending
  std::vector<char> is_seed;
  std::vector<double> price;    // undefined for seeds
  std::vector<double> accept;   // ICM: per-recommendation acceptance probability
  std::vector<double> bval;     // LTM: B(price)
  bool icm = true;
  double cashback = 0.0;
};

Prepared prepare(const Graph& g, const SeedSet& seeds, const PricingStrategy& s,
                 const BuyerModel& m) {
  const int n = g.node_count();
  if (s.node_count() != n) throw ValidationError("strategy size does not match the graph");
  if (seeds.size() == 0) throw ValidationError("seed set is empty");

  Prepared p;
  p.g = &g;
  p.icm = m.kind() == BuyerModel::Kind::icm;
  p.cashback = s.cashback();
  p.is_seed.assign(static_cast<std::size_t>(n), 0);
  for (int v : seeds.ids()) {
    if (v < 0 || v >= n) throw ValidationError("seed id out of range");
    p.is_seed[static_cast<std::size_t>(v)] = 1;
    p.seeds.push_back(v);
  }
  std::sort(p.seeds.begin(), p.seeds.end());

  p.price.assign(static_cast<std::size_t>(n), 0.0);
  if (p.icm)
    p.accept.assign(static_cast<std::size_t>(n), 0.0);
  else
    p.bval.assign(static_cast<std::size_t>(n), 0.0);
  for (int v = 0; v < n; ++v) {
    if (p.is_seed[static_cast<std::size_t>(v)]) continue;
    if (s.is_seed_marked(v))
      throw ValidationError("strategy marks node " + std::to_string(v) +
                            " as a seed but the seed set does not contain it");
    const double pr = s.price(v);
    p.price[static_cast<std::size_t>(v)] = pr;
    if (p.icm)
      p.accept[static_cast<std::size_t>(v)] = icm_accept_probability(m.cost(), pr);
    else
      p.bval[static_cast<std::size_t>(v)] = m.influence()(pr);
  }
  return p;
}

struct Workspace {
  std::vector<char> active;
  std::vector<int> stamp;
  std::vector<int> rec_count;     // recommendations to each target this step
  std::vector<std::uint32_t> events;  // ICM coins consumed so far per node
  std::vector<int> frontier;
  std::vector<int> targets;
  std::vector<int> newly;
  std::vector<int> recommenders;
};

CascadeTrace run_trial(const Prepared& p, const ThresholdTape& tape, std::uint64_t trial,
                       Workspace& w) {
  const Graph& g = *p.g;
  const int n = g.node_count();

  w.active.assign(static_cast<std::size_t>(n), 0);
  w.stamp.assign(static_cast<std::size_t>(n), 0);
  w.rec_count.assign(static_cast<std::size_t>(n), 0);
  w.events.assign(static_cast<std::size_t>(n), 0);
  w.frontier = p.seeds;
  for (int v : p.seeds) w.active[static_cast<std::size_t>(v)] = 1;

  CascadeTrace trace;
  double revenue = 0.0;

  for (int step = 1; !w.frontier.empty(); ++step) {
    w.targets.clear();
    for (int u : w.frontier) {
      for (int v : g.neighbors(u)) {
        if (w.active[static_cast<std::size_t>(v)]) continue;
        if (w.stamp[static_cast<std::size_t>(v)] != step) {
          w.stamp[static_cast<std::size_t>(v)] = step;
          w.rec_count[static_cast<std::size_t>(v)] = 0;
          w.targets.push_back(v);
        }
        ++w.rec_count[static_cast<std::size_t>(v)];
      }
    }
    if (w.targets.empty()) break;
    std::sort(w.targets.begin(), w.targets.end());
    trace.steps = step;

    w.newly.clear();
    for (int v : w.targets) {
      const auto vi = static_cast<std::size_t>(v);
      const double pr = p.price[vi];
      trace.offers.push_back({step, v, pr});

      bool bought = false;
      if (p.icm) {
        // One coin per recommendation until the first acceptance; the
        // event index keeps counting across steps.
        for (int k = 0; k < w.rec_count[vi] && !bought; ++k) {
          const double u = tape.uniform(trial, static_cast<std::uint64_t>(v), w.events[vi]);
          ++w.events[vi];
          if (u < p.accept[vi]) bought = true;
        }
      } else {
        if (pr == 0.0) {
          bought = true;
        } else {
          int active_nbrs = 0;
          for (int u : g.neighbors(v))
            if (w.active[static_cast<std::size_t>(u)]) ++active_nbrs;
          const double alpha = static_cast<double>(active_nbrs) / g.degree(v);
          // theta in (0,1], held fixed for the node across steps.
          const double theta = 1.0 - tape.uniform(trial, static_cast<std::uint64_t>(v), 0);
          bought = theta <= alpha * p.bval[vi];
        }
      }

      if (!bought) continue;
      revenue += pr;
      int cashback_to = -1;
      if (p.cashback > 0.0) {
        w.recommenders.clear();
        for (int u : g.neighbors(v))
          if (w.active[static_cast<std::size_t>(u)]) w.recommenders.push_back(u);
        const double u = tape.uniform(trial, static_cast<std::uint64_t>(v),
                                      ThresholdTape::kCashbackEvent);
        auto idx = static_cast<std::size_t>(u * static_cast<double>(w.recommenders.size()));
        if (idx >= w.recommenders.size()) idx = w.recommenders.size() - 1;
        cashback_to = w.recommenders[idx];
        revenue -= p.cashback;
      }
      trace.purchases.push_back({step, v, pr, cashback_to});
      w.newly.push_back(v);
    }

    if (w.newly.empty()) break;
    for (int v : w.newly) w.active[static_cast<std::size_t>(v)] = 1;
    w.frontier = w.newly;
  }

  trace.total_revenue = revenue;
  trace.active = w.active;
  return trace;
}

}  // namespace

CascadeTrace simulate_once(const Graph& g, const SeedSet& seeds, const PricingStrategy& s,
                           const BuyerModel& m, const ThresholdTape& tape, std::uint64_t trial) {
  Prepared p = prepare(g, seeds, s, m);
  Workspace w;
  return run_trial(p, tape, trial, w);
}

RevenueEstimate estimate_revenue(const Graph& g, const SeedSet& seeds, const PricingStrategy& s,
                                 const BuyerModel& m, const ThresholdTape& tape, int trials,
                                 std::uint64_t first_trial, int threads) {
  if (trials < 1) throw ValidationError("at least one trial required");
  if (threads < 1) throw ValidationError("thread count must be positive");
  Prepared p = prepare(g, seeds, s, m);

  std::vector<double> revenues(static_cast<std::size_t>(trials));
  auto run_range = [&](int lo, int hi) {
    Workspace w;
    for (int i = lo; i < hi; ++i)
      revenues[static_cast<std::size_t>(i)] =
          run_trial(p, tape, first_trial + static_cast<std::uint64_t>(i), w).total_revenue;
  };

  const int workers = std::min(threads, trials);
  if (workers == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int k = 0; k < workers; ++k) {
      const int lo = static_cast<int>(static_cast<long long>(trials) * k / workers);
      const int hi = static_cast<int>(static_cast<long long>(trials) * (k + 1) / workers);
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  // Sequential reduction in trial order keeps the result independent of
  // the thread count.
  double sum = 0.0;
  for (double r : revenues) sum += r;
  const double mean = sum / trials;
  double ss = 0.0;
  for (double r : revenues) ss += (r - mean) * (r - mean);

  RevenueEstimate e;
  e.trials = trials;
  e.mean = mean;
  e.std_error = trials > 1 ? std::sqrt(ss / (trials - 1) / trials) : 0.0;
  return e;
}

void write_estimate_csv(const RevenueEstimate& e, std::ostream& out) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g", e.trials, e.mean, e.std_error);
  out << "trials,mean,stderr\n" << buf << "\n";
}

void CascadeTrace::write(std::ostream& out) const {
  char buf[64];
  std::size_t oi = 0, pi = 0;
  for (int step = 1; step <= steps; ++step) {
    for (; oi < offers.size() && offers[oi].step == step; ++oi) {
      std::snprintf(buf, sizeof buf, "%.10g", offers[oi].price);
      out << "t=" << step << " offer v=" << offers[oi].node << " price=" << buf << "\n";
    }
    for (; pi < purchases.size() && purchases[pi].step == step; ++pi) {
      std::snprintf(buf, sizeof buf, "%.10g", purchases[pi].paid);
      out << "t=" << step << " buy v=" << purchases[pi].node << " pays=" << buf;
      if (purchases[pi].cashback_to >= 0) out << " cashback_to=" << purchases[pi].cashback_to;
      out << "\n";
    }
  }
}

ExactRevenue exact_expected_revenue(const Graph& g, const SeedSet& seeds,
                                    const PricingStrategy& s, const BuyerModel& m) {
  if (m.kind() != BuyerModel::Kind::icm)
    throw ValidationError("exact expectation supports only the independent cascade model");
  const int n = g.node_count();
  if (n > 12) throw BudgetError("exact expectation limited to 12 nodes, got " + std::to_string(n));
  Prepared p = prepare(g, seeds, s, m);

  std::uint32_t seed_mask = 0;
  for (int v : p.seeds) seed_mask |= 1u << v;

  ExactRevenue out;
  out.activation.assign(static_cast<std::size_t>(n), 0.0);
  for (int v : p.seeds) out.activation[static_cast<std::size_t>(v)] = 1.0;

  // States keyed by (active set, frontier); processed in ascending
  // popcount of the active set, which every transition strictly grows.
  auto key = [](std::uint32_t active, std::uint32_t frontier) {
    return (static_cast<std::uint64_t>(frontier) << 32) | active;
  };
  std::vector<std::unordered_map<std::uint64_t, double>> buckets(static_cast<std::size_t>(n) + 1);
  buckets[static_cast<std::size_t>(__builtin_popcount(seed_mask))][key(seed_mask, seed_mask)] = 1.0;

  std::vector<int> targets;
  std::vector<int> stochastic;
  std::vector<double> step_prob;
  for (int pc = __builtin_popcount(seed_mask); pc <= n; ++pc) {
    for (const auto& [state, prob] : buckets[static_cast<std::size_t>(pc)]) {
      const auto active = static_cast<std::uint32_t>(state & 0xffffffffu);
      const auto frontier = static_cast<std::uint32_t>(state >> 32);

      targets.clear();
      stochastic.clear();
      step_prob.clear();
      std::uint32_t certain = 0;
      for (int v = 0; v < n; ++v) {
        if (active & (1u << v)) continue;
        int k = 0;
        for (int u : g.neighbors(v))
          if (frontier & (1u << u)) ++k;
        if (k == 0) continue;
        targets.push_back(v);
        double reject = 1.0;
        for (int i = 0; i < k; ++i) reject *= 1.0 - p.accept[static_cast<std::size_t>(v)];
        const double pv = 1.0 - reject;
        if (pv >= 1.0) {
          certain |= 1u << v;
        } else if (pv > 0.0) {
          stochastic.push_back(v);
          step_prob.push_back(pv);
        }
        // pv == 0 targets never buy and drop out of the enumeration
      }
      if (targets.empty()) continue;

      const auto sbits = static_cast<std::uint32_t>(stochastic.size());
      for (std::uint32_t sub = 0; sub < (1u << sbits); ++sub) {
        double pa = prob;
        std::uint32_t bought = certain;
        for (std::uint32_t i = 0; i < sbits; ++i) {
          if (sub & (1u << i)) {
            pa *= step_prob[i];
            bought |= 1u << stochastic[i];
          } else {
            pa *= 1.0 - step_prob[i];
          }
        }
        if (pa == 0.0) continue;
        double gain = 0.0;
        for (int v = 0; v < n; ++v) {
          if (!(bought & (1u << v))) continue;
          gain += p.price[static_cast<std::size_t>(v)] - p.cashback;
          out.activation[static_cast<std::size_t>(v)] += pa;
        }
        out.revenue += pa * gain;
        if (bought != 0) {
          const std::uint32_t next_active = active | bought;
          buckets[static_cast<std::size_t>(__builtin_popcount(next_active))]
                 [key(next_active, bought)] += pa;
        }
      }
    }
  }
  return out;
}

}  // namespace cascade_pricer
