#include "cascade_pricer/oracle.hpp"

#include <algorithm>
#include <unordered_map>

#include "cascade_pricer/errors.hpp"

namespace cascade_pricer {

namespace {

constexpr std::uint64_t kAssignmentBudget = 1u << 20;

}  // namespace

NonAdaptiveOptimum optimal_nonadaptive_bruteforce(const Graph& g, const SeedSet& seeds,
                                                  const BuyerModel& m,
                                                  const std::vector<double>& grid) {
  if (grid.empty()) throw ValidationError("empty price grid");
  std::vector<char> is_seed(static_cast<std::size_t>(g.node_count()), 0);
  for (int v : seeds.ids()) is_seed[static_cast<std::size_t>(v)] = 1;
  std::vector<int> free_nodes;
  for (int v = 0; v < g.node_count(); ++v)
    if (!is_seed[static_cast<std::size_t>(v)]) free_nodes.push_back(v);

  std::uint64_t count = 1;
  for (std::size_t i = 0; i < free_nodes.size(); ++i) {
    count *= grid.size();
    if (count > kAssignmentBudget)
      throw BudgetError("too many grid assignments to exhaust");
  }

  NonAdaptiveOptimum best;
  bool have = false;
  std::vector<std::size_t> idx(free_nodes.size(), 0);
  for (;;) {
    PricingStrategy s(g.node_count(), 0.0);
    for (int v : seeds.ids()) s.mark_seed(v);
    for (std::size_t i = 0; i < free_nodes.size(); ++i)
      s.set_price(free_nodes[i], grid[idx[i]]);
    double rev = exact_expected_revenue(g, seeds, s, m).revenue;
    // Strict improvement keeps the lexicographically first argmax.
    if (!have || rev > best.revenue) {
      have = true;
      best.revenue = rev;
      best.strategy = std::move(s);
    }
    // Odometer with the last node fastest.
    std::size_t pos = idx.size();
    while (pos > 0) {
      --pos;
      if (++idx[pos] < grid.size()) break;
      idx[pos] = 0;
      if (pos == 0) return best;
    }
    if (idx.empty()) return best;
  }
}

double optimal_adaptive_value(const Graph& g, const SeedSet& seeds, const BuyerModel& m,
                              const std::vector<double>& grid) {
  if (m.kind() != BuyerModel::Kind::icm)
    throw ValidationError("adaptive oracle supports only the independent cascade model");
  if (grid.empty()) throw ValidationError("empty price grid");
  const int n = g.node_count();
  if (n > 12) throw BudgetError("adaptive oracle limited to 12 nodes");

  std::vector<double> accept(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    accept[i] = icm_accept_probability(m.cost(), grid[i]);

  std::uint32_t seed_mask = 0;
  for (int v : seeds.ids()) {
    if (v < 0 || v >= n) throw ValidationError("seed id out of range");
    seed_mask |= 1u << v;
  }
  if (seed_mask == 0) throw ValidationError("seed set is empty");

  std::unordered_map<std::uint64_t, double> memo;
  auto key = [](std::uint32_t active, std::uint32_t frontier) {
    return (static_cast<std::uint64_t>(frontier) << 32) | active;
  };

  auto value = [&](auto&& self, std::uint32_t active, std::uint32_t frontier) -> double {
    auto it = memo.find(key(active, frontier));
    if (it != memo.end()) return it->second;

    std::vector<int> targets;
    std::vector<int> recs;
    for (int v = 0; v < n; ++v) {
      if (active & (1u << v)) continue;
      int k = 0;
      for (int u : g.neighbors(v))
        if (frontier & (1u << u)) ++k;
      if (k > 0) {
        targets.push_back(v);
        recs.push_back(k);
      }
    }
    double best = 0.0;
    if (!targets.empty()) {
      std::uint64_t tuples = 1;
      for (std::size_t i = 0; i < targets.size(); ++i) {
        tuples *= grid.size();
        if (tuples > kAssignmentBudget)
          throw BudgetError("too many price tuples for one step");
      }

      std::vector<std::size_t> choice(targets.size(), 0);
      std::vector<double> pv(targets.size());
      std::vector<double> price(targets.size());
      for (;;) {
        std::vector<int> stochastic;
        std::uint32_t certain = 0;
        double sure_gain = 0.0;
        for (std::size_t i = 0; i < targets.size(); ++i) {
          double reject = 1.0;
          for (int j = 0; j < recs[i]; ++j) reject *= 1.0 - accept[choice[i]];
          pv[i] = 1.0 - reject;
          price[i] = grid[choice[i]];
          if (pv[i] >= 1.0) {
            certain |= 1u << targets[i];
            sure_gain += price[i];
          } else if (pv[i] > 0.0) {
            stochastic.push_back(static_cast<int>(i));
          }
        }

        double ev = 0.0;
        const auto sbits = static_cast<std::uint32_t>(stochastic.size());
        for (std::uint32_t sub = 0; sub < (1u << sbits); ++sub) {
          double pa = 1.0;
          double gain = sure_gain;
          std::uint32_t bought = certain;
          for (std::uint32_t i = 0; i < sbits; ++i) {
            const auto t = static_cast<std::size_t>(stochastic[i]);
            if (sub & (1u << i)) {
              pa *= pv[t];
              gain += price[t];
              bought |= 1u << targets[t];
            } else {
              pa *= 1.0 - pv[t];
            }
          }
          if (pa == 0.0) continue;
          double cont = bought ? self(self, active | bought, bought) : 0.0;
          ev += pa * (gain + cont);
        }
        best = std::max(best, ev);

        std::size_t pos = choice.size();
        bool done = true;
        while (pos > 0) {
          --pos;
          if (++choice[pos] < grid.size()) {
            done = false;
            break;
          }
          choice[pos] = 0;
        }
        if (done) break;
      }
    }
    memo[key(active, frontier)] = best;
    return best;
  };

  return value(value, seed_mask, seed_mask);
}

GapInstance adaptivity_gap_instance() {
  GapInstance inst{
      Graph::from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {2, 4}, {2, 5}}),
      SeedSet{0},
      BuyerModel::icm(CostFunction::step({0.0, 0.5, 1.0}, {1.0, 0.0})),
      {0.0, 1.0},
  };
  return inst;
}

HardnessInstance build_hardness_instance(const Graph& source, int k) {
  const int ns = source.node_count();
  if (ns < 2 || source.edge_count() == 0)
    throw ValidationError("source graph needs at least one edge");
  int d = 0;
  for (int v = 0; v < ns; ++v) d = std::max(d, source.degree(v));
  if (k < 0) k = 20 * d;
  if (k == 0) throw ValidationError("at least one pendant per gadget");

  const auto src_edges = source.edges();
  const int ms = static_cast<int>(src_edges.size());
  const int n = 1 + ns + ms * (1 + k);
  const double p = 1.0 / (4.0 * d);

  std::vector<int> layer(static_cast<std::size_t>(n), 3);
  layer[0] = 0;
  std::vector<int> vertex_of(static_cast<std::size_t>(ns));
  std::vector<int> gadget_of(static_cast<std::size_t>(ms));

  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < ns; ++v) {
    vertex_of[static_cast<std::size_t>(v)] = 1 + v;
    layer[static_cast<std::size_t>(1 + v)] = 1;
    edges.push_back({0, 1 + v});
  }
  int next = 1 + ns + ms;
  for (int j = 0; j < ms; ++j) {
    const int gadget = 1 + ns + j;
    gadget_of[static_cast<std::size_t>(j)] = gadget;
    layer[static_cast<std::size_t>(gadget)] = 2;
    edges.push_back({1 + src_edges[static_cast<std::size_t>(j)].first, gadget});
    edges.push_back({1 + src_edges[static_cast<std::size_t>(j)].second, gadget});
    for (int t = 0; t < k; ++t) edges.push_back({gadget, next++});
  }

  return HardnessInstance{
      Graph::from_edges(n, edges),
      SeedSet{0},
      BuyerModel::icm(CostFunction::step({0.0, p, 1.0}, {1.0, 0.0})),
      source,
      p,
      d,
      k,
      std::move(layer),
      std::move(vertex_of),
      std::move(gadget_of),
  };
}

bool verify_hardness_structure(const HardnessInstance& inst) {
  const Graph& g = inst.graph;
  const int ns = inst.source.node_count();
  const auto src_edges = inst.source.edges();
  const int ms = static_cast<int>(src_edges.size());
  if (g.node_count() != 1 + ns + ms * (1 + inst.k)) return false;

  // Root touches exactly the source-vertex layer.
  if (g.degree(0) != ns) return false;
  for (int u : g.neighbors(0))
    if (inst.layer[static_cast<std::size_t>(u)] != 1) return false;

  for (int j = 0; j < ms; ++j) {
    const int gadget = inst.gadget_of[static_cast<std::size_t>(j)];
    if (g.degree(gadget) != 2 + inst.k) return false;
    const int a = inst.vertex_of[static_cast<std::size_t>(src_edges[static_cast<std::size_t>(j)].first)];
    const int b = inst.vertex_of[static_cast<std::size_t>(src_edges[static_cast<std::size_t>(j)].second)];
    if (!g.has_edge(gadget, a) || !g.has_edge(gadget, b)) return false;
    int pendants = 0;
    for (int u : g.neighbors(gadget)) {
      if (inst.layer[static_cast<std::size_t>(u)] == 3) {
        if (g.degree(u) != 1) return false;
        ++pendants;
      }
    }
    if (pendants != inst.k) return false;
  }
  return true;
}

double hardness_cover_revenue(const HardnessInstance& inst, const std::vector<int>& cover) {
  const int ns = inst.source.node_count();
  std::vector<char> in_cover(static_cast<std::size_t>(ns), 0);
  for (int v : cover) {
    if (v < 0 || v >= ns) throw ValidationError("cover vertex out of range");
    in_cover[static_cast<std::size_t>(v)] = 1;
  }
  for (auto [u, w] : inst.source.edges())
    if (!in_cover[static_cast<std::size_t>(u)] && !in_cover[static_cast<std::size_t>(w)])
      throw ValidationError("subset is not a vertex cover");

  // Every gadget activates for free in step 2, so an uncovered vertex is
  // tested once by the root and once per incident gadget, and every
  // pendant is tested exactly once.
  double revenue = inst.p * inst.k * inst.source.edge_count();
  for (int v = 0; v < ns; ++v) {
    if (in_cover[static_cast<std::size_t>(v)]) continue;
    double reject = 1.0;
    for (int j = 0; j < inst.source.degree(v) + 1; ++j) reject *= 1.0 - inst.p;
    revenue += 1.0 - reject;
  }
  return revenue;
}

double hardness_subset_revenue(const HardnessInstance& inst, const std::vector<int>& subset) {
  const int ns = inst.source.node_count();
  const auto src_edges = inst.source.edges();
  const int ms = static_cast<int>(src_edges.size());
  const int core_n = 1 + ns + ms;
  if (core_n > 12) throw BudgetError("pendant-free core exceeds the exact oracle budget");

  // Core ids coincide with instance ids because pendants are numbered last.
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < ns; ++v) edges.push_back({0, 1 + v});
  for (int j = 0; j < ms; ++j) {
    edges.push_back({1 + src_edges[static_cast<std::size_t>(j)].first, 1 + ns + j});
    edges.push_back({1 + src_edges[static_cast<std::size_t>(j)].second, 1 + ns + j});
  }
  Graph core = Graph::from_edges(core_n, edges);

  PricingStrategy s(core_n, 1.0);
  s.mark_seed(0);
  for (int j = 0; j < ms; ++j) s.set_price(1 + ns + j, 0.0);
  for (int v : subset) {
    if (v < 0 || v >= ns) throw ValidationError("subset vertex out of range");
    s.set_price(1 + v, 0.0);
  }

  ExactRevenue core_value = exact_expected_revenue(core, SeedSet{0}, s, inst.model);
  double revenue = core_value.revenue;
  for (int j = 0; j < ms; ++j)
    revenue += core_value.activation[static_cast<std::size_t>(1 + ns + j)] * inst.k * inst.p;
  return revenue;
}

}  // namespace cascade_pricer
