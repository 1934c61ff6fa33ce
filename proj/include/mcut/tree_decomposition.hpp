#pragma once

#include <vector>

#include "mcut/graph.hpp"

namespace mcut {

// Tree decomposition of a graph: overlapping bags arranged in a tree such
// that every edge lives in some bag and each vertex's bags form a connected
// subtree. Bag ids are 1-based.
struct TreeDecomposition {
    std::vector<std::vector<VertexId>> bags;    // bags[i] for bag id i+1, sorted
    std::vector<std::pair<int, int>> tree_edges;  // (bag id, bag id)

    int bag_count() const { return static_cast<int>(bags.size()); }
    // Max bag size minus one; -1 for an all-empty decomposition.
    int width() const;
};

// Checks the three conditions (tree shape, vertex/edge coverage, connected
// occurrence subtrees) against g; throws an input error naming the violated
// condition and a witness.
void validate_tree_decomposition(const Graph& g, const TreeDecomposition& td);

// Min-fill elimination heuristic. Always valid, no width guarantee.
TreeDecomposition heuristic_tree_decomposition(const Graph& g);

}  // namespace mcut
