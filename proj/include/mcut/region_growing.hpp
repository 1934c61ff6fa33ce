#pragma once

#include <vector>

#include "mcut/fractional.hpp"
#include "mcut/graph.hpp"

namespace mcut {

// A deterministically selected ball radius together with the certificate it
// satisfies: cut <= bound_coefficient * vol, where bound_coefficient is
// ln(Vol(S,b-)/Vol(S,a)) / (b-a).
struct RadiusChoice {
    double t = 0.0;
    double cut = 0.0;
    double vol = 0.0;
    double bound_coefficient = 0.0;
};

// Derandomized region growing: the smallest t in [a,b) satisfying
// C(S,t) <= (1/(b-a)) * ln(Vol(S,b-)/Vol(S,a)) * Vol(S,t). Between
// consecutive distance values the cut is constant and the volume linear, so
// each interval is solved in closed form and the first feasible point wins.
// Existence is guaranteed; failure to find one is an internal error.
RadiusChoice choose_radius(const Graph& g, std::span<const VertexId> sources, double a, double b,
                           double initial_volume);

// Same, reusing an existing distance field for the sources.
RadiusChoice choose_radius(const Graph& g, const DistanceField& df, double a, double b,
                           double initial_volume);

// Baseline multicut: grow a ball of radius in [0, 1/2) from each still
// connected source with initial volume F*/k, cut its boundary, remove it.
// Cost is at most 4 ln(k+1) F*.
CutSet gvy_multicut(const Graph& g, const FractionalSolution& fs);

}  // namespace mcut
