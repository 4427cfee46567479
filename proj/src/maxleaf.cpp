#include "cascade_pricer/maxleaf.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "cascade_pricer/errors.hpp"

namespace cascade_pricer {

std::vector<int> SpanningTree::tree_degrees() const {
  std::vector<int> deg(parent.size(), 0);
  for (size_t v = 0; v < parent.size(); ++v)
    if (parent[v] >= 0) {
      ++deg[v];
      ++deg[parent[v]];
    }
  return deg;
}

std::vector<int> SpanningTree::leafset() const {
  auto deg = tree_degrees();
  std::vector<int> out;
  for (size_t v = 0; v < parent.size(); ++v)
    if (static_cast<int>(v) != root && deg[v] == 1) out.push_back(static_cast<int>(v));
  return out;
}

int SpanningTree::unrooted_leaf_count() const {
  auto deg = tree_degrees();
  int c = 0;
  for (int d : deg) c += d == 1;
  return c;
}

bool SpanningTree::valid_spanning_tree_of(const Graph& g) const {
  int n = g.node_count();
  if (node_count() != n || root < 0 || root >= n || parent[root] != -1) return false;
  int edges = 0;
  for (int v = 0; v < n; ++v) {
    if (v == root) continue;
    if (parent[v] < 0 || parent[v] >= n || !g.has_edge(v, parent[v])) return false;
    ++edges;
  }
  if (edges != n - 1) return false;
  // Every node must reach the root through parents without cycling.
  for (int v = 0; v < n; ++v) {
    int cur = v, steps = 0;
    while (cur != root && steps++ <= n) cur = parent[cur];
    if (cur != root) return false;
  }
  return true;
}

void save_tree(const SpanningTree& t, std::ostream& out) {
  out << "root " << t.root << "\n";
  for (int v = 0; v < t.node_count(); ++v)
    if (v != t.root) out << v << " " << t.parent[v] << "\n";
}

SpanningTree load_tree(std::istream& in) {
  SpanningTree t;
  std::vector<std::pair<int, int>> links;
  std::string line;
  int lineno = 0, root = -1, maxid = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "root") {
      if (!(ls >> root)) throw ParseError("tree line " + std::to_string(lineno) + ": bad root");
      maxid = std::max(maxid, root);
      continue;
    }
    int child = 0, parent = 0;
    try {
      child = std::stoi(first);
    } catch (...) {
      throw ParseError("tree line " + std::to_string(lineno) + ": bad child id");
    }
    if (!(ls >> parent)) throw ParseError("tree line " + std::to_string(lineno) + ": bad parent");
    links.push_back({child, parent});
    maxid = std::max({maxid, child, parent});
  }
  if (root < 0) throw ParseError("tree file missing root line");
  t.root = root;
  t.parent.assign(maxid + 1, -1);
  for (auto [c, p] : links) {
    if (c == root || t.parent[c] != -1)
      throw ValidationError("tree file assigns node " + std::to_string(c) + " twice");
    t.parent[c] = p;
  }
  return t;
}

namespace {

struct Dsu {
  std::vector<int> up;
  explicit Dsu(int n) : up(n) { std::iota(up.begin(), up.end(), 0); }
  int find(int v) { return up[v] == v ? v : up[v] = find(up[v]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    up[b] = a;
    return true;
  }
};

SpanningTree orient_from_root(const Graph& g, int root,
                              const std::vector<std::pair<int, int>>& tree_edges) {
  int n = g.node_count();
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : tree_edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  SpanningTree t;
  t.root = root;
  t.parent.assign(n, -1);
  std::vector<char> vis(n, 0);
  std::deque<int> q{root};
  vis[root] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int u : adj[v])
      if (!vis[u]) {
        vis[u] = 1;
        t.parent[u] = v;
        q.push_back(u);
      }
  }
  return t;
}

}  // namespace

SpanningTree approx_max_leaf_tree(const Graph& g, int root) {
  int n = g.node_count();
  if (root < 0 || root >= n) throw ValidationError("root out of range");
  if (!g.connected()) throw ValidationError("max-leaf tree needs a connected graph");
  if (n == 1) {
    SpanningTree t;
    t.root = 0;
    t.parent = {-1};
    return t;
  }

  std::vector<char> in_forest(n, 0);
  std::vector<std::pair<int, int>> edges;
  auto fresh = [&](int v) {
    std::vector<int> out;
    for (int u : g.neighbors(v))
      if (!in_forest[u]) out.push_back(u);
    return out;
  };
  for (int v = 0; v < n; ++v) {
    if (in_forest[v]) continue;
    auto nb = fresh(v);
    if (static_cast<int>(nb.size()) < 3) continue;
    in_forest[v] = 1;
    std::deque<int> queue;
    for (int u : nb) {
      in_forest[u] = 1;
      edges.push_back({v, u});
      queue.push_back(u);
    }
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      auto expand = fresh(u);
      if (static_cast<int>(expand.size()) < 2) continue;
      for (int w : expand) {
        in_forest[w] = 1;
        edges.push_back({u, w});
        queue.push_back(w);
      }
    }
  }

  // Connect forest trees and stray vertices. Prefer connector edges whose
  // endpoints are already internal (or stray), so forest leaves stay leaves.
  std::vector<int> fdeg(n, 0);
  for (auto [u, v] : edges) {
    ++fdeg[u];
    ++fdeg[v];
  }
  Dsu dsu(n);
  for (auto [u, v] : edges) dsu.unite(u, v);
  auto all = g.edges();
  std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    int ca = (fdeg[a.first] == 1) + (fdeg[a.second] == 1);
    int cb = (fdeg[b.first] == 1) + (fdeg[b.second] == 1);
    return ca < cb;
  });
  for (auto [u, v] : all)
    if (dsu.unite(u, v)) edges.push_back({u, v});

  return orient_from_root(g, root, edges);
}

std::pair<SpanningTree, int> exact_max_leaf_tree(const Graph& g) {
  int n = g.node_count();
  if (n > 14) throw BudgetError("exact max-leaf search limited to 14 nodes");
  if (!g.connected()) throw ValidationError("max-leaf tree needs a connected graph");
  if (n == 1) {
    SpanningTree t;
    t.root = 0;
    t.parent = {-1};
    return {t, 0};
  }
  if (n == 2) {
    SpanningTree t;
    t.root = 0;
    t.parent = {-1, 0};
    return {t, 2};
  }

  auto try_internal_set = [&](const std::vector<int>& internal) -> std::optional<SpanningTree> {
    std::vector<char> in(n, 0);
    for (int v : internal) in[v] = 1;
    // Internal set must induce a connected subgraph.
    std::vector<char> vis(n, 0);
    std::vector<int> stack{internal.front()};
    vis[internal.front()] = 1;
    int seen = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : g.neighbors(v))
        if (in[u] && !vis[u]) {
          vis[u] = 1;
          ++seen;
          stack.push_back(u);
        }
    }
    if (seen != static_cast<int>(internal.size())) return std::nullopt;
    // ...and dominate everything else.
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < n; ++v) {
      if (in[v]) continue;
      int host = -1;
      for (int u : g.neighbors(v))
        if (in[u]) {
          host = u;
          break;
        }
      if (host < 0) return std::nullopt;
      edges.push_back({v, host});
    }
    // Spanning tree of the internal subgraph via BFS from its smallest vertex.
    std::vector<char> vis2(n, 0);
    std::deque<int> q{internal.front()};
    vis2[internal.front()] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int u : g.neighbors(v))
        if (in[u] && !vis2[u]) {
          vis2[u] = 1;
          edges.push_back({v, u});
          q.push_back(u);
        }
    }
    // Root at the smallest internal vertex so the leafset matches the
    // unrooted leaf count whenever possible.
    return orient_from_root(g, internal.front(), edges);
  };

  for (int sz = 1; sz <= n - 1; ++sz) {
    std::vector<int> pick(sz);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      if (auto tree = try_internal_set(pick)) {
        return {*tree, tree->unrooted_leaf_count()};
      }
      int i = sz - 1;
      while (i >= 0 && pick[i] == n - sz + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < sz; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  throw ValidationError("no spanning tree found");  // unreachable for connected g
}

LeafBoundReport check_leaf_bounds(const Graph& g, const SpanningTree& t) {
  LeafBoundReport r;
  r.n3 = degree_ge3_count(g);
  r.good = good_vertex_count(g);
  r.tree_leaves = t.unrooted_leaf_count();
  r.tree_meets_good_target = r.tree_leaves >= std::max(r.good / 100.0, 1.0);
  if (g.node_count() <= 14) {
    auto [tree, opt] = exact_max_leaf_tree(g);
    (void)tree;
    r.exact_optimum = opt;
    r.optimum_meets_n3_floor = opt >= r.n3 / 8.0 + 1.0 - 1e-9;
    if (g.min_degree() >= 3)
      r.optimum_meets_cubic_floor = opt >= g.node_count() / 4.0 + 2.0 - 1e-9;
  }
  return r;
}

}  // namespace cascade_pricer
