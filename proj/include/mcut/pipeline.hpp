#pragma once

#include <optional>
#include <vector>

#include "mcut/fractional.hpp"
#include "mcut/graph.hpp"
#include "mcut/region_growing.hpp"
#include "mcut/tree_decomposition.hpp"
#include "mcut/width_decomposition.hpp"

namespace mcut {

// Ball radii for the phases. b must equal 2a (the shadow-count argument needs
// it); h is the volume-sharing divisor derived from the width.
struct PipelineConfig {
    double a = 0.125;
    double b = 0.25;
    double h = 0.0;  // 0 = derive 2r^3 + 2r from the width decomposition

    static double default_h(int r) {
        double rd = r;
        return 2.0 * rd * rd * rd + 2.0 * rd;
    }
};

// Phase 1 output: a ball of radius `a` grown from the uncovered part of a
// bag, inside the growth graph of its subtree plus attachments.
struct Core {
    int id = 0;
    std::vector<VertexId> vertices;  // sorted
    std::vector<VertexId> center;    // Y: uncovered part of the center bag at creation
    int center_bag = 0;
    int rank = 0;  // Phase 1 iteration that created it
};

// Phase 2 output: a ball grown from what remains of a core; inherits the
// core's center.
struct Component {
    int id = 0;
    std::vector<VertexId> vertices;  // sorted
    int core_id = 0;
    std::vector<VertexId> center;
};

struct Phase1Result {
    std::vector<Core> cores;
    int iterations = 0;
    std::vector<std::vector<VertexId>> attachments;  // final per-bag attachment, 1-based
};

struct Phase2Result {
    std::vector<Component> components;
    CutSet x2;  // transformed-graph ids
    // Per processed core: the Eq-style certificate (absent for isolated /
    // fully absorbed cores and zero-volume balls).
    struct CoreTrace {
        int core_id = 0;
        bool skipped = false;
        bool isolated = false;
        double initial_volume = 0.0;
        double radius = 0.0;
        std::optional<RadiusChoice> choice;
        std::vector<EdgeId> shadow_edge_ids;  // edges of G_i touching the (b-a) ball
    };
    std::vector<CoreTrace> trace;
};

struct PipelineDiagnostics {
    int phase1_iterations = 0;
    int max_cores_per_bag = 0;
    int max_shadow_count = 0;
    double shadow_volume_sum = 0.0;  // sum over cores of Vol'(R'_i, b-a) / h
};

struct PipelineResult {
    WidthDecomposition wd;
    std::vector<Core> cores;
    std::vector<Component> components;
    CutSet x2;            // transformed ids
    CutSet x3;            // transformed ids
    CutSet original_cut;  // mapped through edge_map
    double cost_x2 = 0.0;
    double cost_x3 = 0.0;
    double fstar = 0.0;  // sum cap*length of the decomposition input
    PipelineDiagnostics diagnostics;
};

// Small diameter decomposition given a cover: every vertex of g must be
// within distance 1/4 of `cover` (|cover| <= r). Grows a ball of radius in
// [1/4, 1/2) from each cover vertex in turn, cuts its boundary, removes it,
// and re-introduces removed cover vertices through zero-capacity stubs whose
// lengths are original-graph distances. Cost is at most 8 ln(r+1) F.
CutSet sdd_with_cover(const Graph& g, std::span<const VertexId> cover);

Phase1Result phase1_grow_cores(const WidthDecomposition& wd, const PipelineConfig& cfg);

Phase2Result phase2_grow_components(const WidthDecomposition& wd, const Phase1Result& p1,
                                    const PipelineConfig& cfg);

CutSet phase3_decompose(const Graph& transformed, const std::vector<Component>& components,
                        const PipelineConfig& cfg);

// Max number of Phase 2 balls any single edge helped pay for.
std::vector<int> shadow_counts(const Graph& transformed, const Phase2Result& p2);

enum class LengthsSource { SolveLp, Given };

struct PipelineOptions {
    LengthsSource lengths = LengthsSource::SolveLp;
    double epsilon = 0.1;
    PipelineConfig config;
};

struct PipelineRun {
    PipelineResult result;
    std::optional<LpResult> lp;  // present when lengths came from the LP
    bool primal_feasible = false;  // the cut is a multicut, not just an SDD
};

// End to end: lengths (from the LP or as given), width transform, three
// phases, map the cut back. The total cost obeys 136 ln(r+1) F*.
PipelineRun run_pipeline(const Graph& g, const TreeDecomposition& td,
                         const PipelineOptions& options);

}  // namespace mcut
