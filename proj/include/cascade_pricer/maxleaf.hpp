#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "cascade_pricer/graph.hpp"

namespace cascade_pricer {

/** Rooted spanning tree as a parent array; parent[root] = -1. */
struct SpanningTree {
  int root = 0;
  std::vector<int> parent;

  int node_count() const { return static_cast<int>(parent.size()); }
  std::vector<int> tree_degrees() const;
  // Tree-degree-1 nodes other than the root: the charge-eligible nodes.
  std::vector<int> leafset() const;
  // Degree-1 nodes of the unrooted tree, root included when it qualifies.
  int unrooted_leaf_count() const;
  bool valid_spanning_tree_of(const Graph& g) const;
};

void save_tree(const SpanningTree& t, std::ostream& out);
SpanningTree load_tree(std::istream& in);

/**
 * Leafy-forest expansion: start a star at every vertex with >= 3 fresh
 * neighbors, expand through tree vertices with >= 2 fresh neighbors, then
 * connect the pieces choosing edges that spare forest leaves. Deterministic;
 * ties resolved toward smaller node ids.
 */
SpanningTree approx_max_leaf_tree(const Graph& g, int root);

/**
 * Exact optimum via minimum connected dominating set enumeration (the tree's
 * internal vertices are exactly such a set). Returns the tree and its
 * unrooted leaf count. Requires n <= 14.
 */
std::pair<SpanningTree, int> exact_max_leaf_tree(const Graph& g);

struct LeafBoundReport {
  int n3 = 0;           // vertices of degree >= 3
  int good = 0;         // those plus their neighbors
  int tree_leaves = 0;  // unrooted leaf count of the checked tree
  std::optional<int> exact_optimum;              // computed when n <= 14
  std::optional<bool> optimum_meets_n3_floor;    // optimum >= n3/8 + 1
  std::optional<bool> optimum_meets_cubic_floor; // min degree >= 3: optimum >= n/4 + 2
  bool tree_meets_good_target = false;           // tree_leaves >= max(good/100, 1)
};

LeafBoundReport check_leaf_bounds(const Graph& g, const SpanningTree& t);

}  // namespace cascade_pricer
