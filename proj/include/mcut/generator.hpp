#pragma once

#include <cstdint>
#include <string>

#include "mcut/graph.hpp"
#include "mcut/io.hpp"
#include "mcut/tree_decomposition.hpp"

namespace mcut {

struct GeneratorParams {
    int n = 20;
    int k = 3;                    // k-tree parameter: known treewidth bound
    double edge_keep_prob = 1.0;  // random sparsification of the k-tree
    int num_pairs = 3;
    double cap_min = 1.0;
    double cap_max = 1.0;
    bool with_lengths = false;  // also draw lengths uniformly from [0,1]
    uint64_t seed = 1;
};

struct GeneratedInstance {
    GraphFile graph_file;
    TreeDecomposition td;
    GeneratorParams params;

    std::string stem() const;  // canonical file stem encoding the parameters
};

// Random partial k-tree with its construction tree decomposition (width <= k):
// seed clique, n-k-1 random clique extensions, then edge deletion.
GeneratedInstance generate_partial_ktree(const GeneratorParams& params);

}  // namespace mcut
