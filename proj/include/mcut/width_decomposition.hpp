#pragma once

#include <vector>

#include "mcut/graph.hpp"
#include "mcut/tree_decomposition.hpp"

namespace mcut {

inline constexpr EdgeId kLinkEdge = 0;  // edge_to_original value for LINK edges

// Rooted tree of *disjoint* bags partitioning the vertex set of a transformed
// graph; every edge lies within a bag or between a bag and its parent. Width
// is the maximum bag size. Produced from a tree decomposition by splitting
// each vertex into one copy per containing bag and tying the copies together
// with LINK edges (INFINITE capacity, length 0).
struct WidthDecomposition {
    Graph graph;                                 // transformed graph, pairs lifted
    std::vector<std::vector<VertexId>> bags;     // disjoint, 1-based bag ids, sorted
    std::vector<int> parent;                     // 1-based; parent[root] == 0
    std::vector<int> level;                      // 1-based; hop distance from root
    int root = 1;
    int width = 0;                               // max bag size
    std::vector<VertexId> copy_to_original;      // 1-based transformed vertex -> original
    std::vector<EdgeId> edge_to_original;        // 1-based transformed edge id -> original id,
                                                 // kLinkEdge for LINK edges

    int bag_count() const { return static_cast<int>(bags.size()); }
    int bag_of(VertexId transformed_vertex) const { return bag_of_[transformed_vertex]; }

    std::vector<int> bag_of_;  // 1-based transformed vertex -> bag id
};

// The treewidth-to-width transform: one copy of a vertex per containing bag,
// LINK edges along the occurrence subtree, each original edge realized once in
// the lowest-id bag containing both endpoints, terminals lifted to their
// lowest-id bag copy. Rooted at bag 1.
WidthDecomposition tree_to_width(const Graph& g, const TreeDecomposition& td);

// Internal consistency checks on a width decomposition (disjoint cover, bag
// size, parent-edge condition, LINK shape, mass preservation vs `original`).
void validate_width_decomposition(const Graph& original, const WidthDecomposition& wd);

// Maps a transformed-graph cut back to original edge ids; throws if the cut
// contains a LINK edge.
CutSet map_cut_to_original(const Graph& original, const WidthDecomposition& wd,
                           const CutSet& transformed_cut);

}  // namespace mcut
