#include "mcut/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "mcut/error.hpp"

namespace mcut {

namespace {

// Branch and bound state over an edge ordering; edges are either forced in
// the cut, forced out, or undecided (undecided edges count as present when
// testing whether the pairs are already disconnected, and as absent when
// testing whether a branch can still succeed).
struct BnB {
    const Graph& g;
    std::vector<int> edge_order;      // indices into g.edges(), finite caps only
    std::vector<char> in_cut;         // per edge index
    std::vector<char> excluded;       // per edge index
    double best_cost = kInf;
    std::vector<EdgeId> best_ids;
    bool has_best = false;

    explicit BnB(const Graph& graph) : g(graph) {
        in_cut.assign(g.edge_count(), 0);
        excluded.assign(g.edge_count(), 0);
    }

    bool pair_connected(const TerminalPair& p, bool optimistic) const {
        // optimistic: only excluded + INFINITE edges conduct (the branch can
        // never disconnect this pair anymore).
        std::vector<char> seen(static_cast<size_t>(g.vertex_count()) + 1, 0);
        std::vector<VertexId> stack{p.s};
        seen[p.s] = 1;
        while (!stack.empty()) {
            VertexId u = stack.back();
            stack.pop_back();
            if (u == p.t) return true;
            for (int ei : g.incident(u)) {
                if (in_cut[ei]) continue;
                if (optimistic && !excluded[ei] && !g.edge(ei).cap.infinite) continue;
                VertexId w = g.edge(ei).other(u);
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        return false;
    }

    void record(double cost) {
        std::vector<EdgeId> ids;
        for (int i = 0; i < g.edge_count(); ++i)
            if (in_cut[i]) ids.push_back(g.edge(i).id);
        std::sort(ids.begin(), ids.end());
        if (cost < best_cost - 1e-12 ||
            (std::abs(cost - best_cost) <= 1e-12 && (!has_best || ids < best_ids))) {
            best_cost = std::min(cost, best_cost);
            best_ids = std::move(ids);
            has_best = true;
        }
    }

    void search(size_t depth, double cost) {
        if (cost > best_cost + 1e-12) return;
        bool all_cut = true;
        for (const TerminalPair& p : g.pairs())
            if (pair_connected(p, false)) {
                all_cut = false;
                break;
            }
        if (all_cut) {
            // Adding more edges only costs more; this branch is settled.
            record(cost);
            return;
        }
        if (depth == edge_order.size()) return;
        for (const TerminalPair& p : g.pairs())
            if (pair_connected(p, true)) return;  // unreachable feasibility

        int ei = edge_order[depth];
        in_cut[ei] = 1;
        search(depth + 1, cost + g.edge(ei).cap.value);
        in_cut[ei] = 0;
        excluded[ei] = 1;
        search(depth + 1, cost);
        excluded[ei] = 0;
    }
};

}  // namespace

CutSet brute_force_multicut(const Graph& g, int max_edges, const CutSet* upper_bound_hint) {
    int finite = 0;
    for (const Edge& e : g.edges())
        if (!e.cap.infinite) ++finite;
    if (finite > max_edges)
        throw_input("brute_force_multicut: " + std::to_string(finite) +
                    " finite-capacity edges exceed the limit of " + std::to_string(max_edges) +
                    "; raise --max-edges only for instances you can afford to enumerate");

    for (const TerminalPair& p : g.pairs()) {
        // A pair joined by INFINITE edges alone cannot be cut.
        std::vector<char> seen(static_cast<size_t>(g.vertex_count()) + 1, 0);
        std::vector<VertexId> stack{p.s};
        seen[p.s] = 1;
        bool hit = false;
        while (!stack.empty() && !hit) {
            VertexId u = stack.back();
            stack.pop_back();
            if (u == p.t) hit = true;
            for (int ei : g.incident(u)) {
                if (!g.edge(ei).cap.infinite) continue;
                VertexId w = g.edge(ei).other(u);
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        if (hit) throw_input("brute_force_multicut: no finite multicut exists");
    }

    BnB bnb(g);
    for (int i = 0; i < g.edge_count(); ++i)
        if (!g.edge(i).cap.infinite) bnb.edge_order.push_back(i);
    std::sort(bnb.edge_order.begin(), bnb.edge_order.end(), [&](int a, int b) {
        if (g.edge(a).cap.value != g.edge(b).cap.value)
            return g.edge(a).cap.value > g.edge(b).cap.value;
        return g.edge(a).id < g.edge(b).id;
    });
    if (upper_bound_hint) bnb.best_cost = upper_bound_hint->cost;
    bnb.search(0, 0.0);
    if (!bnb.has_best) {
        if (upper_bound_hint) {
            // The hint was already optimal and pruned everything else.
            return *upper_bound_hint;
        }
        throw_internal("brute_force_multicut: search found no cut");
    }
    return make_cut_set(g, std::move(bnb.best_ids));
}

std::optional<std::vector<VertexId>> verify_multicut(const Graph& g, const CutSet& cut) {
    Graph remaining = g.minus_edge_ids(cut.edge_ids);
    for (const TerminalPair& p : g.pairs()) {
        std::vector<VertexId> path = find_path(remaining, p.s, p.t);
        if (!path.empty()) return path;
    }
    return std::nullopt;
}

std::optional<DiameterWitness> verify_sdd(const Graph& g_full, const CutSet& cut) {
    Graph remaining = g_full.minus_edge_ids(cut.edge_ids);
    for (const auto& comp : connected_components(remaining)) {
        if (comp.size() < 2) continue;
        for (VertexId u : comp) {
            VertexId src[1] = {u};
            DistanceField df = multi_source_distances(g_full, src);
            for (VertexId v : comp)
                if (!(df.dist[v] < 1.0)) return DiameterWitness{u, v, df.dist[v]};
        }
    }
    return std::nullopt;
}

GapReport gap_report(const Graph& g, const FractionalSolution& fs, const FlowPaths& fp,
                     double algorithm_cost, std::optional<double> integral_opt,
                     std::optional<double> gvy_cost) {
    GapReport r;
    r.flow_value = fp.total;
    r.fstar = fs.cost;
    r.integral_opt = integral_opt;
    r.algorithm_cost = algorithm_cost;
    r.gvy_cost = gvy_cost;
    r.ratio_cost_over_fstar = fs.cost > 0.0 ? algorithm_cost / fs.cost : (algorithm_cost > 0 ? kInf : 1.0);
    if (integral_opt && *integral_opt > 0.0) r.ratio_cost_over_opt = algorithm_cost / *integral_opt;

    auto check = [&](bool ok, const std::string& what) {
        if (!ok) r.violations.push_back(what);
    };
    if (auto bad = verify_primal(g, fs)) check(false, "primal infeasible: " + bad->message);
    if (auto bad = verify_dual(g, fp)) check(false, "dual infeasible: " + bad->message);
    check(r.flow_value <= r.fstar + 1e-6, "weak duality: flow > F*");
    if (integral_opt) {
        check(r.flow_value <= *integral_opt + 1e-6, "flow exceeds the exact optimum");
        check(*integral_opt <= algorithm_cost + 1e-9, "exact optimum exceeds the algorithm cost");
        if (gvy_cost) check(*integral_opt <= *gvy_cost + 1e-9, "exact optimum exceeds the gvy cost");
    }
    return r;
}

}  // namespace mcut
