#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "mcut/error.hpp"
#include "mcut/generator.hpp"
#include "mcut/io.hpp"
#include "mcut/oracle.hpp"
#include "mcut/tree_decomposition.hpp"
#include "mcut/width_decomposition.hpp"
#include "test_util.hpp"

using namespace mcut;
using test::make_graph;

TEST_CASE("tree decomposition validation: basic shapes") {
    Graph path = make_graph(3, {{1, 2, 1.0, 1.0}, {2, 3, 1.0, 1.0}});

    TreeDecomposition single;
    single.bags = {{1, 2, 3}};
    CHECK_NOTHROW(validate_tree_decomposition(path, single));
    CHECK(single.width() == 2);

    TreeDecomposition two;
    two.bags = {{1, 2}, {2, 3}};
    two.tree_edges = {{1, 2}};
    CHECK_NOTHROW(validate_tree_decomposition(path, two));
    CHECK(two.width() == 1);

    TreeDecomposition uncovered;
    uncovered.bags = {{1, 2}, {3}};
    uncovered.tree_edges = {{1, 2}};
    CHECK_THROWS_WITH_AS(validate_tree_decomposition(path, uncovered),
                         doctest::Contains("not covered"), Error);

    TreeDecomposition cyclic;
    cyclic.bags = {{1, 2}, {2, 3}, {1, 3}};
    cyclic.tree_edges = {{1, 2}, {2, 3}, {3, 1}};
    CHECK_THROWS_AS(validate_tree_decomposition(path, cyclic), Error);

    TreeDecomposition disconnected_subtree;
    disconnected_subtree.bags = {{1, 2}, {2, 3}, {2}};
    disconnected_subtree.tree_edges = {{1, 2}, {1, 3}};
    // vertex 2 appears in bags 1,2,3; bag 3 hangs off bag 1 so its occurrence
    // set {1,2,3} is connected; vertex 3 appears only in bag 2. Valid.
    CHECK_NOTHROW(validate_tree_decomposition(path, disconnected_subtree));

    TreeDecomposition broken;
    broken.bags = {{1, 2}, {3}, {2, 3}};
    broken.tree_edges = {{1, 2}, {2, 3}};
    // vertex 2 occurs in bags 1 and 3, which are joined only through bag 2.
    CHECK_THROWS_WITH_AS(validate_tree_decomposition(path, broken),
                         doctest::Contains("connected subtree"), Error);
}

TEST_CASE("min-fill heuristic: trees, cliques, random partial k-trees") {
    Graph tree = make_graph(5, {{1, 2, 1, 1}, {2, 3, 1, 1}, {2, 4, 1, 1}, {4, 5, 1, 1}});
    TreeDecomposition td = heuristic_tree_decomposition(tree);
    CHECK_NOTHROW(validate_tree_decomposition(tree, td));
    CHECK(td.width() == 1);

    Graph k4 = make_graph(4, {{1, 2, 1, 1}, {1, 3, 1, 1}, {1, 4, 1, 1},
                              {2, 3, 1, 1}, {2, 4, 1, 1}, {3, 4, 1, 1}});
    TreeDecomposition tdk = heuristic_tree_decomposition(k4);
    CHECK_NOTHROW(validate_tree_decomposition(k4, tdk));
    CHECK(tdk.width() == 3);

    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        GeneratorParams p;
        p.n = rng.range(5, 20);
        p.k = 3;
        p.edge_keep_prob = 1.0;
        p.num_pairs = 0;
        p.seed = 100 + trial;
        GeneratedInstance inst = generate_partial_ktree(p);
        TreeDecomposition h = heuristic_tree_decomposition(inst.graph_file.graph);
        CHECK_NOTHROW(validate_tree_decomposition(inst.graph_file.graph, h));
        CHECK(h.width() >= 3);  // full 3-trees have treewidth exactly 3
    }
}

TEST_CASE("tree_to_width: single bag has no copies or links") {
    Graph tri = make_graph(3, {{1, 2, 1, 1}, {1, 3, 1, 1}, {2, 3, 1, 1}});
    TreeDecomposition td;
    td.bags = {{1, 2, 3}};
    WidthDecomposition wd = tree_to_width(tri, td);
    CHECK(wd.graph.vertex_count() == 3);
    CHECK(wd.graph.edge_count() == 3);
    CHECK(wd.width == 3);
    CHECK_NOTHROW(validate_width_decomposition(tri, wd));
    for (size_t i = 1; i < wd.edge_to_original.size(); ++i)
        CHECK(wd.edge_to_original[i] != kLinkEdge);
}

TEST_CASE("tree_to_width: path with shared vertex gets one LINK") {
    Graph path = make_graph(3, {{1, 2, 2.0, 0.3}, {2, 3, 1.5, 0.4}}, {{1, 3}});
    TreeDecomposition td;
    td.bags = {{1, 2}, {2, 3}};
    td.tree_edges = {{1, 2}};
    WidthDecomposition wd = tree_to_width(path, td);

    CHECK(wd.graph.vertex_count() == 4);  // a, b1 | b2, c
    CHECK(wd.width == 2);
    int links = 0, originals = 0;
    for (const Edge& e : wd.graph.edges()) {
        if (wd.edge_to_original[e.id] == kLinkEdge) {
            ++links;
            CHECK(e.cap.infinite);
            CHECK(e.length == 0.0);
        } else {
            ++originals;
        }
    }
    CHECK(links == 1);
    CHECK(originals == 2);
    CHECK_NOTHROW(validate_width_decomposition(path, wd));

    // lifted pair distance equals the original distance
    const TerminalPair& lifted = wd.graph.pairs()[0];
    VertexId src[1] = {lifted.s};
    DistanceField df = multi_source_distances(wd.graph, src);
    CHECK(df.dist[lifted.t] == doctest::Approx(0.7));
}

TEST_CASE("tree_to_width: mass preserved and invariants hold on random instances") {
    Rng rng(77);
    for (int trial = 0; trial < 15; ++trial) {
        GeneratorParams p;
        p.n = rng.range(6, 24);
        p.k = rng.range(1, 4);
        p.edge_keep_prob = rng.uniform(0.4, 1.0);
        p.num_pairs = rng.range(0, 4);
        p.cap_min = 0.5;
        p.cap_max = 3.0;
        p.with_lengths = true;
        p.seed = 500 + trial;
        GeneratedInstance inst = generate_partial_ktree(p);
        const Graph& g = inst.graph_file.graph;
        WidthDecomposition wd = tree_to_width(g, inst.td);
        CHECK_NOTHROW(validate_width_decomposition(g, wd));
        CHECK(wd.width <= inst.td.width() + 1);
        CHECK(wd.graph.total_mass() == doctest::Approx(g.total_mass()).epsilon(1e-12));

        // copies of one original vertex sit at transformed distance 0
        for (VertexId ov = 1; ov <= g.vertex_count(); ++ov) {
            std::vector<VertexId> copies;
            for (VertexId v = 1; v <= wd.graph.vertex_count(); ++v)
                if (wd.copy_to_original[v] == ov) copies.push_back(v);
            if (copies.size() < 2) continue;
            VertexId src[1] = {copies[0]};
            DistanceField df = multi_source_distances(wd.graph, src);
            for (VertexId c : copies) CHECK(df.dist[c] == 0.0);
        }
    }
}

TEST_CASE("round-trip: transformed cuts map back with identical cost and feasibility") {
    Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        GeneratorParams p;
        p.n = rng.range(5, 14);
        p.k = rng.range(1, 3);
        p.edge_keep_prob = rng.uniform(0.5, 1.0);
        p.num_pairs = rng.range(1, 3);
        p.cap_min = 0.5;
        p.cap_max = 2.0;
        p.with_lengths = true;
        p.seed = 900 + trial;
        GeneratedInstance inst = generate_partial_ktree(p);
        const Graph& g = inst.graph_file.graph;
        WidthDecomposition wd = tree_to_width(g, inst.td);

        // random subset of non-LINK transformed edges
        std::vector<EdgeId> subset;
        for (const Edge& e : wd.graph.edges())
            if (wd.edge_to_original[e.id] != kLinkEdge && rng.chance(0.35))
                subset.push_back(e.id);
        CutSet tcut = make_cut_set(wd.graph, subset);
        CutSet ocut = map_cut_to_original(g, wd, tcut);
        CHECK(ocut.cost == doctest::Approx(tcut.cost).epsilon(1e-12));

        // a pair separates in the original exactly when its lift separates
        Graph gminus = g.minus_edge_ids(ocut.edge_ids);
        Graph tminus = wd.graph.minus_edge_ids(tcut.edge_ids);
        for (int i = 0; i < g.pair_count(); ++i) {
            bool orig_conn = connected(gminus, g.pairs()[i].s, g.pairs()[i].t);
            bool lift_conn = connected(tminus, wd.graph.pairs()[i].s, wd.graph.pairs()[i].t);
            CHECK(orig_conn == lift_conn);
        }
    }
}

TEST_CASE("tree_to_width rejects invalid decompositions") {
    Graph path = make_graph(3, {{1, 2, 1, 1}, {2, 3, 1, 1}});
    TreeDecomposition bad;
    bad.bags = {{1, 2}, {3}};  // edge (2,3) uncovered
    bad.tree_edges = {{1, 2}};
    CHECK_THROWS_AS((void)tree_to_width(path, bad), Error);
}
