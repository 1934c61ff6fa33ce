#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "mcut/error.hpp"
#include "mcut/generator.hpp"
#include "mcut/oracle.hpp"
#include "mcut/pipeline.hpp"
#include "test_util.hpp"

using namespace mcut;
using test::make_graph;

namespace {

// Random instance scaled so every vertex is within 1/4 of the chosen cover
// (the sdd_with_cover precondition).
struct CoveredInstance {
    Graph graph;
    std::vector<VertexId> cover;
};

CoveredInstance covered_instance(Rng& rng, int n, double p, int cover_size) {
    Graph g = test::random_graph(rng, n, p);
    std::vector<VertexId> cover;
    for (const auto& comp : connected_components(g)) cover.push_back(comp.front());
    for (int i = 0; i < cover_size && static_cast<int>(cover.size()) < n; ++i) {
        VertexId v = rng.range(1, n);
        if (std::find(cover.begin(), cover.end(), v) == cover.end()) cover.push_back(v);
    }
    std::sort(cover.begin(), cover.end());
    DistanceField df = multi_source_distances(g, cover);
    double far = 0.0;
    for (VertexId v = 1; v <= n; ++v) far = std::max(far, df.dist[v]);
    std::vector<double> lens;
    for (const Edge& e : g.edges())
        lens.push_back(far > 0.0 ? e.length * (0.24 / far) : e.length);
    return CoveredInstance{g.with_lengths(lens), cover};
}

GeneratedInstance random_instance(Rng& rng, int max_n, bool with_lengths, uint64_t seed) {
    GeneratorParams p;
    p.n = rng.range(5, max_n);
    p.k = rng.range(1, 4);
    p.edge_keep_prob = rng.uniform(0.4, 1.0);
    p.num_pairs = rng.range(1, 5);
    p.cap_min = 0.3;
    p.cap_max = 4.0;
    p.with_lengths = with_lengths;
    p.seed = seed;
    return generate_partial_ktree(p);
}

}  // namespace

TEST_CASE("sdd_with_cover: edgeless and tiny instances") {
    Graph edgeless = make_graph(3, {});
    std::vector<VertexId> cover{1, 2, 3};
    CutSet cut = sdd_with_cover(edgeless, cover);
    CHECK(cut.edge_ids.empty());

    // path with short edges: one center swallows everything
    Graph path = make_graph(3, {{1, 2, 1.0, 0.1}, {2, 3, 1.0, 0.1}});
    std::vector<VertexId> mid{2};
    CutSet cut2 = sdd_with_cover(path, mid);
    CHECK(cut2.edge_ids.empty());
    CHECK_FALSE(verify_sdd(path, cut2).has_value());
}

TEST_CASE("sdd_with_cover: precondition enforced") {
    Graph path = make_graph(2, {{1, 2, 1.0, 0.9}});
    std::vector<VertexId> one{1};
    CHECK_THROWS_WITH_AS((void)sdd_with_cover(path, one), doctest::Contains("1/4"), Error);
    std::vector<VertexId> none;
    CHECK_THROWS_AS((void)sdd_with_cover(path, none), Error);
}

TEST_CASE("sdd_with_cover: diameter and cost bound on random covered instances") {
    Rng rng(60601);
    for (int trial = 0; trial < 60; ++trial) {
        CoveredInstance inst = covered_instance(rng, rng.range(4, 16), rng.uniform(0.25, 0.8),
                                                rng.range(1, 4));
        CutSet cut = sdd_with_cover(inst.graph, inst.cover);
        auto witness = verify_sdd(inst.graph, cut);
        CHECK_MESSAGE(!witness.has_value(), "sdd violation at distance ",
                      witness ? witness->distance : 0.0);
        double bound =
            8.0 * std::log(static_cast<double>(inst.cover.size()) + 1.0) * inst.graph.total_mass();
        CHECK(cut.cost <= bound + 1e-6);
    }
}

TEST_CASE("phase 1: single bag covering everything gives one core") {
    Graph tri = make_graph(3, {{1, 2, 1.0, 0.05}, {1, 3, 1.0, 0.05}, {2, 3, 1.0, 0.05}});
    TreeDecomposition td;
    td.bags = {{1, 2, 3}};
    WidthDecomposition wd = tree_to_width(tri, td);
    Phase1Result p1 = phase1_grow_cores(wd, PipelineConfig{});
    REQUIRE(p1.cores.size() == 1);
    CHECK(p1.cores[0].rank == 1);
    CHECK(p1.cores[0].vertices.size() == 3);
    CHECK(p1.iterations == 1);
}

TEST_CASE("phase 1: long edges and singleton bags give singleton cores of rank 1") {
    // Width decomposition built directly: a chain of singleton bags with the
    // path edges running between bag and parent, every length above the core
    // radius. Each bag becomes its own center; no ball reaches a neighbor.
    WidthDecomposition wd;
    wd.graph = make_graph(4, {{1, 2, 1.0, 0.5}, {2, 3, 1.0, 0.5}, {3, 4, 1.0, 0.5}});
    wd.bags = {{1}, {2}, {3}, {4}};
    wd.parent = {0, 0, 1, 2, 3};
    wd.level = {0, 0, 1, 2, 3};
    wd.width = 1;
    wd.copy_to_original = {0, 1, 2, 3, 4};
    wd.edge_to_original = {0, 1, 2, 3};
    wd.bag_of_ = {0, 1, 2, 3, 4};

    Phase1Result p1 = phase1_grow_cores(wd, PipelineConfig{});
    CHECK(p1.iterations == 1);
    REQUIRE(p1.cores.size() == 4);
    std::set<VertexId> seen;
    for (const Core& c : p1.cores) {
        CHECK(c.rank == 1);
        CHECK(c.vertices.size() == 1);
        for (VertexId v : c.vertices) CHECK(seen.insert(v).second);
    }
    CHECK(static_cast<int>(seen.size()) == wd.graph.vertex_count());
}

TEST_CASE("phase 1: structural lemmas on random instances") {
    Rng rng(8080);
    for (int trial = 0; trial < 30; ++trial) {
        GeneratedInstance inst = random_instance(rng, 24, true, 7000 + trial);
        WidthDecomposition wd = tree_to_width(inst.graph_file.graph, inst.td);
        Phase1Result p1 = phase1_grow_cores(wd, PipelineConfig{});
        int r = wd.width;

        CHECK(p1.iterations <= r);

        // cores cover every vertex
        std::vector<char> cov(static_cast<size_t>(wd.graph.vertex_count()) + 1, 0);
        for (const Core& c : p1.cores)
            for (VertexId v : c.vertices) cov[v] = 1;
        for (VertexId v = 1; v <= wd.graph.vertex_count(); ++v) CHECK(cov[v] == 1);

        // same-rank cores pairwise disjoint
        for (size_t i = 0; i < p1.cores.size(); ++i)
            for (size_t j = i + 1; j < p1.cores.size(); ++j) {
                if (p1.cores[i].rank != p1.cores[j].rank) continue;
                std::vector<VertexId> inter;
                std::set_intersection(p1.cores[i].vertices.begin(), p1.cores[i].vertices.end(),
                                      p1.cores[j].vertices.begin(), p1.cores[j].vertices.end(),
                                      std::back_inserter(inter));
                CHECK(inter.empty());
            }

        // per-bag: at most one center, at most r^2 intersecting cores
        for (int b = 1; b <= wd.bag_count(); ++b) {
            int centers = 0, touching = 0;
            for (const Core& c : p1.cores) {
                if (c.center_bag == b) ++centers;
                std::vector<VertexId> inter;
                std::set_intersection(c.vertices.begin(), c.vertices.end(),
                                      wd.bags[b - 1].begin(), wd.bags[b - 1].end(),
                                      std::back_inserter(inter));
                if (!inter.empty()) ++touching;
            }
            CHECK(centers <= 1);
            CHECK(touching <= r * r);
        }

        // center is the uncovered part of a bag: |Y| <= r, Y inside the core
        for (const Core& c : p1.cores) {
            CHECK(static_cast<int>(c.center.size()) <= r);
            CHECK(!c.center.empty());
            for (VertexId y : c.center)
                CHECK(std::binary_search(c.vertices.begin(), c.vertices.end(), y));
        }
    }
}

TEST_CASE("phase 2: single core gives one component and empty cut") {
    Graph tri = make_graph(3, {{1, 2, 1.0, 0.05}, {1, 3, 1.0, 0.05}, {2, 3, 1.0, 0.05}});
    TreeDecomposition td;
    td.bags = {{1, 2, 3}};
    WidthDecomposition wd = tree_to_width(tri, td);
    Phase1Result p1 = phase1_grow_cores(wd, PipelineConfig{});
    Phase2Result p2 = phase2_grow_components(wd, p1, PipelineConfig{});
    CHECK(p2.components.size() == 1);
    CHECK(p2.x2.edge_ids.empty());
}

TEST_CASE("phase 2: disconnected parts stay isolated") {
    Graph two = make_graph(4, {{1, 2, 1.0, 0.05}, {3, 4, 1.0, 0.05}});
    TreeDecomposition td;
    td.bags = {{1, 2}, {3, 4}};
    td.tree_edges = {{1, 2}};
    WidthDecomposition wd = tree_to_width(two, td);
    Phase1Result p1 = phase1_grow_cores(wd, PipelineConfig{});
    Phase2Result p2 = phase2_grow_components(wd, p1, PipelineConfig{});
    CHECK(p2.x2.edge_ids.empty());
    bool any_isolated = false;
    for (const auto& tr : p2.trace) any_isolated = any_isolated || tr.isolated;
    CHECK(any_isolated);
}

TEST_CASE("phase 2: requires b = 2a") {
    Graph g = make_graph(2, {{1, 2, 1.0, 0.05}});
    TreeDecomposition td;
    td.bags = {{1, 2}};
    WidthDecomposition wd = tree_to_width(g, td);
    Phase1Result p1 = phase1_grow_cores(wd, PipelineConfig{});
    PipelineConfig bad;
    bad.a = 0.1;
    bad.b = 0.25;
    CHECK_THROWS_AS((void)phase2_grow_components(wd, p1, bad), Error);
}

TEST_CASE("phase 2: partition, center distance, volume claim, certificates") {
    Rng rng(9090);
    for (int trial = 0; trial < 30; ++trial) {
        GeneratedInstance inst = random_instance(rng, 24, true, 7100 + trial);
        WidthDecomposition wd = tree_to_width(inst.graph_file.graph, inst.td);
        PipelineConfig cfg;
        cfg.h = PipelineConfig::default_h(wd.width);
        Phase1Result p1 = phase1_grow_cores(wd, cfg);
        Phase2Result p2 = phase2_grow_components(wd, p1, cfg);

        // exact partition of the vertex set
        std::vector<int> owner(static_cast<size_t>(wd.graph.vertex_count()) + 1, 0);
        for (const Component& c : p2.components)
            for (VertexId v : c.vertices) {
                CHECK(owner[v] == 0);
                owner[v] = c.id;
            }
        for (VertexId v = 1; v <= wd.graph.vertex_count(); ++v) CHECK(owner[v] != 0);

        // every vertex within b of its component's center, measured in the
        // full transformed graph
        for (const Component& c : p2.components) {
            DistanceField df = multi_source_distances(wd.graph, c.center);
            for (VertexId v : c.vertices) CHECK(df.dist[v] <= cfg.b + 1e-9);
        }

        // sum of shared initial volumes stays below the total mass
        double sum = 0.0;
        for (const auto& tr : p2.trace) sum += tr.initial_volume;
        CHECK(sum <= wd.graph.total_mass() + 1e-9);

        // stored certificates re-verify
        for (const auto& tr : p2.trace) {
            if (!tr.choice) continue;
            const RadiusChoice& rc = *tr.choice;
            CHECK(rc.cut <= rc.bound_coefficient * rc.vol + 1e-9 * std::max(rc.vol, 1.0));
            CHECK(rc.t >= 0.0);
            CHECK(rc.t < cfg.b - cfg.a);
        }

        // X2 matches a recount across components
        double recount = 0.0;
        for (const Edge& e : wd.graph.edges())
            if (owner[e.u] != owner[e.v]) {
                CHECK_FALSE(e.cap.infinite);
                recount += e.cap.value;
            }
        CHECK(p2.x2.cost == doctest::Approx(recount).epsilon(1e-12));
    }
}

TEST_CASE("phase 3: singleton components need no cutting") {
    Graph isolated = make_graph(2, {});
    TreeDecomposition td;
    td.bags = {{1}, {2}};
    td.tree_edges = {{1, 2}};
    WidthDecomposition wd = tree_to_width(isolated, td);
    Phase1Result p1 = phase1_grow_cores(wd, PipelineConfig{});
    Phase2Result p2 = phase2_grow_components(wd, p1, PipelineConfig{});
    CHECK(p2.components.size() == 2);
    CutSet x3 = phase3_decompose(wd.graph, p2.components, PipelineConfig{});
    CHECK(x3.edge_ids.empty());
}

TEST_CASE("phase 3: rejects wrong b") {
    PipelineConfig bad;
    bad.a = 0.2;
    bad.b = 0.4;
    Graph g = make_graph(2, {{1, 2, 1.0, 0.05}});
    CHECK_THROWS_AS((void)phase3_decompose(g, {}, bad), Error);
}

TEST_CASE("run_pipeline: path instance, sandwich against oracle") {
    GraphFile gf;
    gf.graph = make_graph(3, {{1, 2, 1.0, 0.0}, {2, 3, 1.0, 0.0}}, {{1, 3}});
    TreeDecomposition td;
    td.bags = {{1, 2}, {2, 3}};
    td.tree_edges = {{1, 2}};

    PipelineOptions opt;
    opt.epsilon = 0.1;
    PipelineRun run = run_pipeline(gf.graph, td, opt);
    const PipelineResult& res = run.result;

    CHECK_FALSE(verify_multicut(gf.graph, res.original_cut).has_value());
    CHECK(res.original_cut.cost >= 1.0 - 1e-9);
    double bound = 136.0 * std::log(res.wd.width + 1.0) * res.fstar;
    CHECK(res.original_cut.cost <= bound + 1e-6);
    CHECK(brute_force_multicut(gf.graph).cost == doctest::Approx(1.0));
}

TEST_CASE("run_pipeline: k = 0 short-circuits to an empty cut") {
    Graph g = make_graph(3, {{1, 2, 1.0, 0.3}, {2, 3, 1.0, 0.3}});
    TreeDecomposition td;
    td.bags = {{1, 2}, {2, 3}};
    td.tree_edges = {{1, 2}};
    PipelineRun run = run_pipeline(g, td, PipelineOptions{});
    CHECK(run.result.original_cut.edge_ids.empty());
    CHECK_FALSE(run.lp.has_value());
}

TEST_CASE("run_pipeline: full verification battery on random instances") {
    Rng rng(111213);
    for (int trial = 0; trial < 25; ++trial) {
        GeneratedInstance inst = random_instance(rng, 20, false, 7200 + trial);
        const Graph& g = inst.graph_file.graph;
        PipelineOptions opt;
        opt.epsilon = 0.1;
        PipelineRun run = run_pipeline(g, inst.td, opt);
        const PipelineResult& res = run.result;

        // multicut feasibility in the original graph
        auto witness = verify_multicut(g, res.original_cut);
        CHECK_MESSAGE(!witness.has_value(), "pair left connected");

        // small diameter under the LP metric
        REQUIRE(run.lp.has_value());
        Graph metric = g.with_lengths(run.lp->solution.x);
        CHECK_FALSE(verify_sdd(metric, res.original_cut).has_value());

        // cost ledger
        double lnr1 = std::log(res.wd.width + 1.0);
        CHECK(res.cost_x3 <= 8.0 * lnr1 * res.fstar + 1e-6);
        CHECK(res.cost_x2 <= 128.0 * lnr1 * res.fstar + 1e-6);
        CHECK(res.original_cut.cost <= 136.0 * lnr1 * res.fstar + 1e-6);

        // structural diagnostics
        int r = res.wd.width;
        CHECK(res.diagnostics.phase1_iterations <= r);
        CHECK(res.diagnostics.max_cores_per_bag <= r * r);
        CHECK(res.diagnostics.max_shadow_count <= 2 * r * r * r + 2 * r);
        CHECK(res.diagnostics.shadow_volume_sum <= res.fstar + 1e-9);
    }
}

TEST_CASE("run_pipeline: given lengths drive a pure decomposition") {
    Rng rng(333);
    for (int trial = 0; trial < 15; ++trial) {
        GeneratedInstance inst = random_instance(rng, 18, true, 7300 + trial);
        const Graph& g = inst.graph_file.graph;
        PipelineOptions opt;
        opt.lengths = LengthsSource::Given;
        PipelineRun run = run_pipeline(g, inst.td, opt);
        CHECK_FALSE(verify_sdd(g, run.result.original_cut).has_value());
        double lnr1 = std::log(run.result.wd.width + 1.0);
        CHECK(run.result.original_cut.cost <= 136.0 * lnr1 * run.result.fstar + 1e-6);
    }
}

TEST_CASE("run_pipeline: capacity scaling by powers of two is exact") {
    Rng rng(777);
    GeneratedInstance inst = random_instance(rng, 14, true, 7400);
    const Graph& g = inst.graph_file.graph;
    PipelineOptions opt;
    opt.lengths = LengthsSource::Given;
    PipelineRun base = run_pipeline(g, inst.td, opt);

    for (double lambda : {0.5, 4.0}) {
        std::vector<Edge> scaled_edges;
        for (const Edge& e : g.edges()) {
            Edge se = e;
            if (!se.cap.infinite) se.cap.value *= lambda;
            scaled_edges.push_back(se);
        }
        Graph scaled(g.vertex_count(), scaled_edges, g.pairs());
        PipelineRun run = run_pipeline(scaled, inst.td, opt);
        CHECK(run.result.original_cut.edge_ids == base.result.original_cut.edge_ids);
        CHECK(run.result.original_cut.cost ==
              doctest::Approx(lambda * base.result.original_cut.cost).epsilon(1e-12));
    }
}

TEST_CASE("run_pipeline: no LINK edge ever enters a cut") {
    Rng rng(999);
    for (int trial = 0; trial < 10; ++trial) {
        GeneratedInstance inst = random_instance(rng, 16, false, 7500 + trial);
        PipelineRun run = run_pipeline(inst.graph_file.graph, inst.td, PipelineOptions{});
        for (EdgeId id : run.result.x2.edge_ids)
            CHECK(run.result.wd.edge_to_original[id] != kLinkEdge);
        for (EdgeId id : run.result.x3.edge_ids)
            CHECK(run.result.wd.edge_to_original[id] != kLinkEdge);
    }
}
