#include <cmath>

#include "doctest.h"
#include "mcut/error.hpp"
#include "mcut/fractional.hpp"
#include "mcut/oracle.hpp"
#include "test_util.hpp"

using namespace mcut;
using test::make_graph;

namespace {

void check_feasible(const Graph& g, const LpResult& lp) {
    auto primal = verify_primal(g, lp.solution);
    CHECK_MESSAGE(!primal.has_value(), (primal ? primal->message : std::string()));
    auto dual = verify_dual(g, lp.flow);
    CHECK_MESSAGE(!dual.has_value(), (dual ? dual->message : std::string()));
    CHECK(lp.flow.total <= lp.solution.cost + 1e-6);  // weak duality
}

}  // namespace

TEST_CASE("lp: single path instance") {
    const double eps = 0.05;
    Graph g = make_graph(3, {{1, 2, 1.0, 0.0}, {2, 3, 1.0, 0.0}}, {{1, 3}});
    LpResult lp = solve_fractional(g, eps);
    check_feasible(g, lp);
    // exact optimum is 1 (cut either edge); flow within (1-3eps)
    CHECK(lp.solution.cost >= 1.0 - 1e-9);
    CHECK(lp.solution.cost <= 1.0 / (1.0 - 3.0 * eps) + 1e-6);
    CHECK(lp.flow.total >= (1.0 - 3.0 * eps) * 1.0 - 1e-9);
    CHECK(lp.flow.total <= 1.0 + 1e-9);
}

TEST_CASE("lp: star with three leaf pairs") {
    const double eps = 0.05;
    // center 4; leaves 1,2,3; optimum x = 1/2 per edge, maxflow = 1.5
    Graph g = make_graph(4, {{1, 4, 1.0, 0.0}, {2, 4, 1.0, 0.0}, {3, 4, 1.0, 0.0}},
                         {{1, 2}, {1, 3}, {2, 3}});
    LpResult lp = solve_fractional(g, eps);
    check_feasible(g, lp);
    CHECK(lp.solution.cost >= 1.5 - 1e-9);
    CHECK(lp.solution.cost <= 1.5 / (1.0 - 3.0 * eps) + 1e-6);
    CHECK(lp.flow.total >= (1.0 - 3.0 * eps) * 1.5 - 1e-9);
    CHECK(lp.flow.total <= 1.5 + 1e-9);
}

TEST_CASE("lp: two vertex-disjoint paths carry flow 2") {
    const double eps = 0.05;
    Graph g = make_graph(4, {{1, 3, 1.0, 0.0}, {3, 2, 1.0, 0.0}, {1, 4, 1.0, 0.0},
                             {4, 2, 1.0, 0.0}},
                         {{1, 2}});
    LpResult lp = solve_fractional(g, eps);
    check_feasible(g, lp);
    CHECK(lp.solution.cost >= 2.0 - 1e-9);
    CHECK(lp.solution.cost <= 2.0 / (1.0 - 3.0 * eps) + 1e-6);
    CHECK(lp.flow.total >= (1.0 - 3.0 * eps) * 2.0 - 1e-9);
    CHECK(lp.flow.total <= 2.0 + 1e-9);
}

TEST_CASE("lp: no pairs and dropped pairs") {
    Graph none = make_graph(3, {{1, 2, 1.0, 0.0}}, {});
    LpResult lp = solve_fractional(none, 0.1);
    CHECK(lp.solution.cost == 0.0);
    CHECK(lp.flow.total == 0.0);
    for (double v : lp.solution.x) CHECK(v == 0.0);

    // disconnected pair gets dropped with a record
    Graph split = make_graph(4, {{1, 2, 1.0, 0.0}, {3, 4, 1.0, 0.0}}, {{1, 3}, {1, 2}});
    LpResult lp2 = solve_fractional(split, 0.1);
    CHECK(lp2.solution.dropped_pairs == std::vector<int>{0});
    check_feasible(split, lp2);
    CHECK(lp2.solution.pair_distances[1] >= 1.0 - 1e-9);
}

TEST_CASE("lp: epsilon validation and INFINITE-path rejection") {
    Graph g = make_graph(3, {{1, 2, 1.0, 0.0}, {2, 3, 1.0, 0.0}}, {{1, 3}});
    CHECK_THROWS_AS((void)solve_fractional(g, 0.0), Error);
    CHECK_THROWS_AS((void)solve_fractional(g, 1.0), Error);

    std::vector<Edge> es{Edge{1, 1, 2, Capacity::inf(), 0.0}};
    Graph inf(2, es, {{1, 2}});
    CHECK_THROWS_AS((void)solve_fractional(inf, 0.1), Error);
}

TEST_CASE("verifiers: witness reporting") {
    Graph g = make_graph(3, {{1, 2, 1.0, 0.0}, {2, 3, 1.0, 0.0}}, {{1, 3}});

    FractionalSolution zero;
    zero.x = {0.0, 0.0};
    auto bad = verify_primal(g, zero);
    REQUIRE(bad.has_value());
    CHECK(bad->message.find("pair 1") != std::string::npos);

    FlowPaths over;
    over.paths.push_back(FlowPath{0, {1, 2}, 2.0});
    over.total = 2.0;
    auto dual_bad = verify_dual(g, over);
    REQUIRE(dual_bad.has_value());
    CHECK(dual_bad->message.find("overloaded") != std::string::npos);

    FlowPaths broken;
    broken.paths.push_back(FlowPath{0, {2}, 0.5});  // does not start at s
    CHECK(verify_dual(g, broken).has_value());
}

TEST_CASE("lp: sandwich against the exact oracle on small instances") {
    Rng rng(2718);
    const double eps = 0.1;
    int tested = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = test::random_graph(rng, rng.range(4, 8), 0.55, rng.range(1, 3));
        int finite = g.edge_count();
        if (finite > 18 || finite == 0) continue;
        LpResult lp = solve_fractional(g, eps);
        check_feasible(g, lp);
        CutSet opt = brute_force_multicut(g, 18);
        CHECK(lp.flow.total <= opt.cost + 1e-6);
        CHECK(lp.solution.cost <= opt.cost / (1.0 - 3.0 * eps) + 1e-6);
        ++tested;
    }
    CHECK(tested >= 20);
}

TEST_CASE("lp: determinism") {
    Rng rng(5151);
    Graph g = test::random_graph(rng, 12, 0.4, 3);
    LpResult a = solve_fractional(g, 0.1);
    LpResult b = solve_fractional(g, 0.1);
    CHECK(a.solution.x == b.solution.x);
    CHECK(a.solution.cost == b.solution.cost);
    CHECK(a.flow.total == b.flow.total);
}

TEST_CASE("normalization: power-of-two scaling leaves x bit-identical") {
    Rng rng(808);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = test::random_graph(rng, rng.range(4, 10), 0.6, rng.range(1, 3));
        std::vector<double> raw;
        for (int i = 0; i < g.edge_count(); ++i) raw.push_back(rng.uniform(0.01, 2.0));

        // Pairs may be disconnected; exclude them the way the solver does.
        std::vector<int> dropped;
        for (int i = 0; i < g.pair_count(); ++i)
            if (!connected(g, g.pairs()[i].s, g.pairs()[i].t)) dropped.push_back(i);
        if (static_cast<int>(dropped.size()) == g.pair_count()) continue;

        std::vector<double> base = normalize_lengths(g, raw, dropped);
        for (double lambda : {0.5, 2.0, 8.0, 1024.0}) {
            std::vector<double> scaled = raw;
            for (double& v : scaled) v *= lambda;
            CHECK(normalize_lengths(g, scaled, dropped) == base);
        }
    }
}
