#include "cascade_pricer/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cascade_pricer/errors.hpp"

namespace cascade_pricer {

Graph Graph::from_edges(int node_count, const std::vector<std::pair<int, int>>& edges) {
  if (node_count < 0) throw ValidationError("node count must be non-negative");
  Graph g;
  g.adj_.resize(node_count);
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= node_count || v >= node_count)
      throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("self-loop rejected");
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) continue;
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (auto& nbrs : g.adj_) std::sort(nbrs.begin(), nbrs.end());
  g.edge_count_ = static_cast<int>(seen.size());
  return g;
}

bool Graph::has_edge(int u, int v) const {
  const auto& nbrs = adj_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

int Graph::min_degree() const {
  int d = node_count() == 0 ? 0 : degree(0);
  for (int v = 1; v < node_count(); ++v) d = std::min(d, degree(v));
  return d;
}

bool Graph::connected() const {
  int n = node_count();
  if (n <= 1) return true;
  std::vector<char> vis(n, 0);
  std::vector<int> stack{0};
  vis[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : adj_[v])
      if (!vis[u]) {
        vis[u] = 1;
        ++count;
        stack.push_back(u);
      }
  }
  return count == n;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count_);
  for (int u = 0; u < node_count(); ++u)
    for (int v : adj_[u])
      if (u < v) out.push_back({u, v});
  return out;
}

SeedSet::SeedSet(std::vector<int> ids) : ids_(std::move(ids)) {
  if (ids_.empty()) throw ValidationError("seed set must be non-empty");
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  if (ids_.front() < 0) throw ValidationError("seed id must be non-negative");
}

bool SeedSet::contains(int v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

LoadedGraph load_edge_list(std::istream& in) {
  std::vector<std::pair<long long, long long>> raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue;  // blank or comment-only line
    if (!(ls >> v)) throw ParseError("line " + std::to_string(lineno) + ": expected two node ids");
    long long extra;
    if (ls >> extra) throw ParseError("line " + std::to_string(lineno) + ": trailing tokens");
    if (u < 0 || v < 0) throw ParseError("line " + std::to_string(lineno) + ": negative node id");
    if (u == v) throw ValidationError("line " + std::to_string(lineno) + ": self-loop");
    raw.push_back({u, v});
  }
  std::map<long long, int> compact;
  for (auto [u, v] : raw) {
    compact.emplace(u, 0);
    compact.emplace(v, 0);
  }
  LoadedGraph out;
  out.original_id.reserve(compact.size());
  for (auto& [id, cid] : compact) {
    cid = static_cast<int>(out.original_id.size());
    out.original_id.push_back(id);
  }
  std::vector<std::pair<int, int>> edges;
  edges.reserve(raw.size());
  for (auto [u, v] : raw) edges.push_back({compact[u], compact[v]});
  out.graph = Graph::from_edges(static_cast<int>(compact.size()), edges);
  return out;
}

void save_edge_list(const Graph& g, std::ostream& out) {
  out << "# nodes=" << g.node_count() << " edges=" << g.edge_count() << "\n";
  for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
}

namespace {

// Unbiased uniform draw from [0, n); deterministic across platforms.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace

Graph generate_preferential_attachment(int n, int m, std::uint64_t seed) {
  if (m < 1) throw ValidationError("attachment count m must be >= 1");
  if (n < m + 1) throw ValidationError("need at least m+1 nodes");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  std::vector<int> endpoints;  // one entry per edge endpoint: sampling weight = degree
  for (int u = 0; u <= m; ++u)
    for (int v = u + 1; v <= m; ++v) {
      edges.push_back({u, v});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  for (int v = m + 1; v < n; ++v) {
    std::set<int> targets;
    while (static_cast<int>(targets.size()) < m)
      targets.insert(endpoints[uniform_below(rng, endpoints.size())]);
    for (int t : targets) {
      edges.push_back({t, v});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph::from_edges(n, edges);
}

int degree_ge3_count(const Graph& g) {
  int c = 0;
  for (int v = 0; v < g.node_count(); ++v)
    if (g.degree(v) >= 3) ++c;
  return c;
}

int good_vertex_count(const Graph& g) {
  std::vector<char> good(g.node_count(), 0);
  for (int v = 0; v < g.node_count(); ++v)
    if (g.degree(v) >= 3) {
      good[v] = 1;
      for (int u : g.neighbors(v)) good[u] = 1;
    }
  int c = 0;
  for (char b : good) c += b;
  return c;
}

MergedGraph merge_seed_set(const Graph& g, const SeedSet& seeds) {
  int n = g.node_count();
  for (int s : seeds.ids())
    if (s >= n) throw ValidationError("seed id out of range");
  MergedGraph out;
  out.to_merged.assign(n, -1);
  int next = 0;
  int seed_image = -1;
  for (int v = 0; v < n; ++v) {
    if (seeds.contains(v)) {
      if (seed_image < 0) {
        seed_image = next++;
        out.from_merged.push_back(v);
      }
      out.to_merged[v] = seed_image;
    } else {
      out.to_merged[v] = next++;
      out.from_merged.push_back(v);
    }
  }
  out.seed = seed_image;
  std::vector<std::pair<int, int>> edges;
  for (auto [u, v] : g.edges()) {
    int mu = out.to_merged[u], mv = out.to_merged[v];
    if (mu != mv) edges.push_back({mu, mv});
  }
  out.graph = Graph::from_edges(next, edges);
  return out;
}

std::vector<PrimitivePath> primitive_path_decomposition(const Graph& g) {
  if (!g.connected()) throw ValidationError("primitive path decomposition needs a connected graph");
  int n = g.node_count();
  std::vector<char> high(n, 0);  // degree >= 3
  for (int v = 0; v < n; ++v) high[v] = g.degree(v) >= 3;

  auto low_neighbors = [&](int v) {
    std::vector<int> out;
    for (int u : g.neighbors(v))
      if (!high[u]) out.push_back(u);
    return out;
  };

  std::vector<PrimitivePath> paths;
  std::vector<char> used(n, 0);
  for (int v = 0; v < n; ++v) {
    if (high[v] || used[v]) continue;
    // Find an endpoint of v's component in the degree-<=2 subgraph, if any.
    int start = -1;
    {
      std::vector<int> comp, stack{v};
      used[v] = 1;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        comp.push_back(x);
        for (int u : low_neighbors(x))
          if (!used[u]) {
            used[u] = 1;
            stack.push_back(u);
          }
      }
      std::sort(comp.begin(), comp.end());
      for (int x : comp)
        if (low_neighbors(x).size() <= 1) {
          start = x;
          break;
        }
      if (start < 0) start = comp.front();  // cycle component: whole graph is a cycle
    }
    PrimitivePath path;
    int prev = -1, cur = start;
    while (true) {
      path.nodes.push_back(cur);
      int nxt = -1;
      for (int u : low_neighbors(cur))
        if (u != prev && (path.nodes.size() < 2 || u != start)) {
          nxt = u;
          break;
        }
      if (nxt < 0 || nxt == start) break;
      prev = cur;
      cur = nxt;
    }
    for (int end : {path.nodes.front(), path.nodes.back()})
      for (int u : g.neighbors(end))
        if (high[u]) path.attachments.push_back(u);
    std::sort(path.attachments.begin(), path.attachments.end());
    path.attachments.erase(std::unique(path.attachments.begin(), path.attachments.end()),
                           path.attachments.end());
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace cascade_pricer
