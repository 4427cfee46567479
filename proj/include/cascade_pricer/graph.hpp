#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace cascade_pricer {

/**
 * Simple undirected graph on nodes 0..n-1.
 * Adjacency lists are kept sorted ascending; immutable after construction.
 */
class Graph {
 public:
  Graph() = default;

  // Edges may appear in either orientation; duplicates collapse. Self-loops rejected.
  static Graph from_edges(int node_count, const std::vector<std::pair<int, int>>& edges);

  int node_count() const { return static_cast<int>(adj_.size()); }
  int edge_count() const { return edge_count_; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  bool has_edge(int u, int v) const;
  int min_degree() const;
  bool connected() const;

  // All edges as (u, v) with u < v, lexicographically sorted.
  std::vector<std::pair<int, int>> edges() const;

 private:
  std::vector<std::vector<int>> adj_;
  int edge_count_ = 0;
};

/** Non-empty sorted set of node ids. */
class SeedSet {
 public:
  explicit SeedSet(std::vector<int> ids);
  SeedSet(std::initializer_list<int> ids) : SeedSet(std::vector<int>(ids)) {}

  const std::vector<int>& ids() const { return ids_; }
  int size() const { return static_cast<int>(ids_.size()); }
  bool contains(int v) const;

 private:
  std::vector<int> ids_;
};

struct LoadedGraph {
  Graph graph;
  std::vector<long long> original_id;  // compact id -> id as written in the input
};

// Whitespace-separated "u v" lines; '#' starts a comment. Ids need not be
// contiguous: they are compacted in ascending order and the mapping recorded.
LoadedGraph load_edge_list(std::istream& in);
void save_edge_list(const Graph& g, std::ostream& out);

// Clique on m+1 start vertices, then each arrival attaches m distinct edges
// with degree-proportional endpoint choice. Connected, deterministic per seed.
Graph generate_preferential_attachment(int n, int m, std::uint64_t seed);

// Vertices of degree >= 3.
int degree_ge3_count(const Graph& g);

// Vertices of degree >= 3 together with their neighbors.
int good_vertex_count(const Graph& g);

struct MergedGraph {
  Graph graph;
  int seed = 0;                  // image of the whole seed set
  std::vector<int> to_merged;    // original id -> merged id
  std::vector<int> from_merged;  // merged id -> original id (seed -> smallest seed)
};

// Contracts the seed set to a single node; parallel edges collapse, internal
// seed edges vanish. Non-seed nodes keep their relative order.
MergedGraph merge_seed_set(const Graph& g, const SeedSet& seeds);

/**
 * Maximal path of degree-<=2 vertices in g minus the degree->=3 set, with the
 * adjacent degree->=3 vertices (if any) recorded as attachments.
 */
struct PrimitivePath {
  std::vector<int> nodes;
  std::vector<int> attachments;  // sorted, deduplicated; empty only for a cycle graph
};

// Requires g connected. Every degree-<=2 vertex lies on exactly one path.
std::vector<PrimitivePath> primitive_path_decomposition(const Graph& g);

}  // namespace cascade_pricer
