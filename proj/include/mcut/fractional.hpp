#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcut/graph.hpp"

namespace mcut {

// Feasible fractional multicut: per-edge lengths x with every surviving
// terminal pair at distance >= 1.
struct FractionalSolution {
    std::vector<double> x;               // positional (edges() order); 0 on INFINITE edges
    double cost = 0.0;                   // F* = sum c(e) * x(e)
    std::vector<double> pair_distances;  // per original pair; +inf for dropped pairs
    std::vector<int> dropped_pairs;      // disconnected pairs, excluded from routing
    double epsilon = 0.0;
    double scale = 1.0;                  // divisor applied to raw lengths
};

struct FlowPath {
    int pair_index = 0;
    std::vector<EdgeId> edge_ids;
    double value = 0.0;
};

// Feasible multicommodity flow: per-path values respecting capacities.
struct FlowPaths {
    std::vector<FlowPath> paths;
    double total = 0.0;
    double scale = 1.0;  // divisor applied to raw routed values
};

struct LpResult {
    FractionalSolution solution;
    FlowPaths flow;
};

// Width-free multiplicative-weights solver for the multicut LP / maximum
// multicommodity flow pair. Routes capacity increments along near-shortest
// terminal paths under exponentially growing lengths; the returned lengths
// are normalized so the closest pair is at distance exactly 1, and the flow
// is scaled to respect capacities. The recorded guarantee is
// flow >= (1 - 3 eps) * maxflow and cost <= maxflow / (1 - 3 eps).
LpResult solve_fractional(const Graph& g, double epsilon);

struct Violation {
    std::string message;
};

// Recomputes all pair distances under fs.x; reports the first violated
// constraint with a witness.
std::optional<Violation> verify_primal(const Graph& g, const FractionalSolution& fs);

// Recomputes per-edge loads from the path list; checks path endpoints,
// contiguity and capacity constraints.
std::optional<Violation> verify_dual(const Graph& g, const FlowPaths& fp);

// Normalizes raw lengths so the minimum surviving pair distance is 1.
// Exposed separately so the scaling invariance of the normalization step is
// testable on its own.
std::vector<double> normalize_lengths(const Graph& g, const std::vector<double>& raw,
                                      const std::vector<int>& dropped_pairs);

}  // namespace mcut
