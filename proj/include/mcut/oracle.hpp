#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcut/fractional.hpp"
#include "mcut/graph.hpp"

namespace mcut {

// Exact minimum multicut by branch and bound over the finite-capacity edges
// (descending capacity order, reachability pruning). Ties resolve to the
// lexicographically smallest sorted edge-id set. Refuses graphs with more
// than max_edges finite edges.
CutSet brute_force_multicut(const Graph& g, int max_edges = 24,
                            const CutSet* upper_bound_hint = nullptr);

// Reachability check per pair in g minus the cut; returns a violating
// terminal path if one exists.
std::optional<std::vector<VertexId>> verify_multicut(const Graph& g, const CutSet& cut);

struct DiameterWitness {
    VertexId u = 0;
    VertexId v = 0;
    double distance = 0.0;
};

// Checks that every component of g minus the cut has weak diameter < 1 under
// the metric of `g_full` (distances measured in the full graph).
std::optional<DiameterWitness> verify_sdd(const Graph& g_full, const CutSet& cut);

struct GapReport {
    double flow_value = 0.0;
    double fstar = 0.0;
    std::optional<double> integral_opt;
    double algorithm_cost = 0.0;
    std::optional<double> gvy_cost;
    double ratio_cost_over_fstar = 0.0;
    std::optional<double> ratio_cost_over_opt;
    std::vector<std::string> violations;  // empty on success
};

// Assembles the flow <= opt <= cost chain and checks every inequality.
GapReport gap_report(const Graph& g, const FractionalSolution& fs, const FlowPaths& fp,
                     double algorithm_cost, std::optional<double> integral_opt,
                     std::optional<double> gvy_cost);

}  // namespace mcut
