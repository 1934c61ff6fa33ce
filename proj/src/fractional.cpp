#include "mcut/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <string>

#include "mcut/error.hpp"

namespace mcut {

namespace {

// Dijkstra specialized for the solver: custom length array, zero-capacity
// finite edges are unusable (they carry no flow), parents recorded for path
// reconstruction.
struct Router {
    const Graph& g;
    std::vector<double> dist;
    std::vector<int> parent_edge;  // index into g.edges(), -1 = none
    std::vector<char> usable;      // per edge index

    explicit Router(const Graph& graph) : g(graph) {
        usable.assign(g.edge_count(), 0);
        for (int i = 0; i < g.edge_count(); ++i) {
            const Edge& e = g.edge(i);
            usable[i] = (e.cap.infinite || e.cap.value > 0.0) ? 1 : 0;
        }
    }

    void run(VertexId s, const std::vector<double>& len) {
        dist.assign(static_cast<size_t>(g.vertex_count()) + 1, kInf);
        parent_edge.assign(static_cast<size_t>(g.vertex_count()) + 1, -1);
        using Item = std::pair<double, VertexId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[s] = 0.0;
        heap.emplace(0.0, s);
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[u]) continue;
            for (int ei : g.incident(u)) {
                if (!usable[ei]) continue;
                const Edge& e = g.edge(ei);
                VertexId w = e.other(u);
                double nd = d + len[ei];
                if (nd < dist[w]) {
                    dist[w] = nd;
                    parent_edge[w] = ei;
                    heap.emplace(nd, w);
                }
            }
        }
    }

    std::vector<int> path_to(VertexId s, VertexId t) const {
        std::vector<int> out;
        VertexId v = t;
        while (v != s) {
            int ei = parent_edge[v];
            if (ei < 0) throw_internal("router: broken parent chain");
            out.push_back(ei);
            v = g.edge(ei).other(v);
        }
        std::reverse(out.begin(), out.end());
        return out;
    }
};

// Connectivity restricted to edges selected by `keep`.
bool connected_filtered(const Graph& g, VertexId s, VertexId t, const std::vector<char>& keep) {
    std::vector<char> seen(static_cast<size_t>(g.vertex_count()) + 1, 0);
    std::vector<VertexId> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
        VertexId u = stack.back();
        stack.pop_back();
        if (u == t) return true;
        for (int ei : g.incident(u)) {
            if (!keep[ei]) continue;
            VertexId w = g.edge(ei).other(u);
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return false;
}

}  // namespace

LpResult solve_fractional(const Graph& g, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw_input("solve_fractional: epsilon must lie in (0,1)");
    const int k = g.pair_count();
    const int m = g.edge_count();

    LpResult res;
    res.solution.epsilon = epsilon;
    res.solution.x.assign(m, 0.0);
    res.solution.pair_distances.assign(k, kInf);
    res.flow.scale = 1.0;
    if (k == 0) return res;

    for (const TerminalPair& p : g.pairs())
        if (p.s == p.t)
            throw_input("solve_fractional: degenerate pair with source == sink at vertex " +
                        std::to_string(p.s));

    // Classify edges and pairs. Pairs connected through INFINITE edges alone
    // admit unbounded flow and no finite cut; pairs disconnected from their
    // partner are dropped; pairs connected only through zero-capacity edges
    // are satisfied for free by unit lengths on those edges.
    std::vector<char> keep_all(m, 1), keep_routable(m, 0), keep_infinite(m, 0);
    int finite_routable = 0;
    for (int i = 0; i < m; ++i) {
        const Edge& e = g.edge(i);
        if (e.cap.infinite) {
            keep_routable[i] = keep_infinite[i] = 1;
        } else if (e.cap.value > 0.0) {
            keep_routable[i] = 1;
            ++finite_routable;
        }
    }
    std::vector<int> routable_pairs;
    std::vector<char> free_pair(k, 0);
    for (int i = 0; i < k; ++i) {
        const TerminalPair& p = g.pairs()[i];
        if (connected_filtered(g, p.s, p.t, keep_infinite))
            throw_input("solve_fractional: pair " + std::to_string(i + 1) +
                        " is joined by INFINITE-capacity edges; no finite multicut exists");
        if (!connected_filtered(g, p.s, p.t, keep_all)) {
            res.solution.dropped_pairs.push_back(i);
        } else if (!connected_filtered(g, p.s, p.t, keep_routable)) {
            free_pair[i] = 1;  // cut for free through zero-capacity edges
        } else {
            routable_pairs.push_back(i);
        }
    }

    auto finish = [&](const std::vector<double>& lengths, double alpha) {
        for (int i = 0; i < m; ++i) {
            const Edge& e = g.edge(i);
            if (e.cap.infinite)
                res.solution.x[i] = 0.0;
            else if (e.cap.value == 0.0)
                res.solution.x[i] = 1.0;
            else
                res.solution.x[i] = std::min(lengths[i] / alpha, 1.0);
        }
        res.solution.scale = alpha;
        res.solution.cost = 0.0;
        for (int i = 0; i < m; ++i) {
            const Edge& e = g.edge(i);
            if (!e.cap.infinite) res.solution.cost += e.cap.value * res.solution.x[i];
        }
        // Pair distances under the final lengths, in the full graph.
        std::vector<double> xlen = res.solution.x;
        Graph measured = g.with_lengths(xlen);
        for (int i = 0; i < k; ++i) {
            const TerminalPair& p = g.pairs()[i];
            VertexId src[1] = {p.s};
            DistanceField df = multi_source_distances(measured, src);
            res.solution.pair_distances[i] = df.dist[p.t];
        }
    };

    if (routable_pairs.empty()) {
        // Nothing to route: zero lengths on flow-carrying edges suffice.
        std::vector<double> zero(m, 0.0);
        finish(zero, 1.0);
        return res;
    }

    // Width-free multiplicative weights. Lengths start at delta/c(e); each
    // routed increment multiplies traversed lengths by (1 + eps f / c(e)).
    // D = sum c(e) l(e) caps the run; routing happens in rounds whose
    // admission threshold (1+eps) * alphabar tracks the cheapest pair.
    const double delta =
        (1.0 + epsilon) * std::pow((1.0 + epsilon) * finite_routable, -1.0 / epsilon);
    std::vector<double> len(m, 0.0);
    double D = 0.0;
    for (int i = 0; i < m; ++i) {
        const Edge& e = g.edge(i);
        if (!e.cap.infinite && e.cap.value > 0.0) {
            len[i] = delta / e.cap.value;
            D += e.cap.value * len[i];
        }
    }

    Router router(g);
    auto pair_dist = [&](int pi) {
        const TerminalPair& p = g.pairs()[pi];
        router.run(p.s, len);
        return router.dist[p.t];
    };

    double alphabar = kInf;
    for (int pi : routable_pairs) alphabar = std::min(alphabar, pair_dist(pi));
    if (!(alphabar > 0.0)) {
        // A zero-length route means some capacity is never constraining; with
        // delta > 0 this cannot happen for positive finite capacities.
        throw_internal("solve_fractional: zero initial pair distance");
    }

    std::vector<double> best_len = len;
    double best_candidate = D / alphabar;
    std::vector<double> load(m, 0.0);

    bool done = false;
    while (!done && D < 1.0) {
        const double threshold = std::min(1.0, (1.0 + epsilon) * alphabar);
        for (int pi : routable_pairs) {
            const TerminalPair& p = g.pairs()[pi];
            while (true) {
                if (D >= 1.0) {
                    done = true;
                    break;
                }
                router.run(p.s, len);
                if (!(router.dist[p.t] < threshold)) break;
                double candidate = D / alphabar;
                if (candidate < best_candidate) {
                    best_candidate = candidate;
                    best_len = len;
                }
                std::vector<int> path = router.path_to(p.s, p.t);
                double f = kInf;
                for (int ei : path) {
                    const Edge& e = g.edge(ei);
                    if (!e.cap.infinite) f = std::min(f, e.cap.value);
                }
                if (!(f < kInf))
                    throw_internal("solve_fractional: routed path without finite capacity");
                FlowPath fp;
                fp.pair_index = pi;
                fp.value = f;
                for (int ei : path) fp.edge_ids.push_back(g.edge(ei).id);
                res.flow.paths.push_back(std::move(fp));
                for (int ei : path) {
                    const Edge& e = g.edge(ei);
                    if (e.cap.infinite) continue;
                    load[ei] += f;
                    double grown = len[ei] * (1.0 + epsilon * f / e.cap.value);
                    D += e.cap.value * (grown - len[ei]);
                    len[ei] = grown;
                }
            }
            if (done) break;
        }
        if (done) break;
        if (threshold >= 1.0) break;  // a full sweep left every pair at distance >= 1
        alphabar = threshold;
    }

    // Pick the better of the final lengths and the best snapshot, each
    // normalized by its own exact cheapest pair distance.
    auto exact_alpha_and_D = [&](const std::vector<double>& lengths) {
        double alpha = kInf;
        for (int pi : routable_pairs) {
            const TerminalPair& p = g.pairs()[pi];
            router.run(p.s, lengths);
            alpha = std::min(alpha, router.dist[p.t]);
        }
        double dual = 0.0;
        for (int i = 0; i < m; ++i) {
            const Edge& e = g.edge(i);
            if (!e.cap.infinite && e.cap.value > 0.0) dual += e.cap.value * lengths[i];
        }
        return std::make_pair(alpha, dual);
    };
    auto [alpha_final, dual_final] = exact_alpha_and_D(len);
    auto [alpha_best, dual_best] = exact_alpha_and_D(best_len);
    if (dual_final / alpha_final <= dual_best / alpha_best)
        finish(len, alpha_final);
    else
        finish(best_len, alpha_best);

    // Feasible flow: divide by the worst theoretical edge congestion.
    res.flow.scale = std::log((1.0 + epsilon) / delta) / std::log(1.0 + epsilon);
    res.flow.total = 0.0;
    for (FlowPath& fp : res.flow.paths) {
        fp.value /= res.flow.scale;
        res.flow.total += fp.value;
    }
    return res;
}

std::optional<Violation> verify_primal(const Graph& g, const FractionalSolution& fs) {
    if (static_cast<int>(fs.x.size()) != g.edge_count())
        return Violation{"length vector size mismatch"};
    for (int i = 0; i < g.edge_count(); ++i) {
        if (fs.x[i] < 0.0 || std::isnan(fs.x[i]))
            return Violation{"negative length on edge " + std::to_string(g.edge(i).id)};
        if (g.edge(i).cap.infinite && fs.x[i] != 0.0)
            return Violation{"nonzero length on INFINITE edge " + std::to_string(g.edge(i).id)};
    }
    Graph measured = g.with_lengths(fs.x);
    std::vector<char> dropped(g.pair_count(), 0);
    for (int i : fs.dropped_pairs) {
        if (i < 0 || i >= g.pair_count()) return Violation{"dropped pair index out of range"};
        dropped[i] = 1;
    }
    for (int i = 0; i < g.pair_count(); ++i) {
        const TerminalPair& p = g.pairs()[i];
        if (dropped[i]) {
            if (connected(g, p.s, p.t))
                return Violation{"pair " + std::to_string(i + 1) + " marked dropped but connected"};
            continue;
        }
        VertexId src[1] = {p.s};
        DistanceField df = multi_source_distances(measured, src);
        if (!(df.dist[p.t] >= 1.0 - 1e-9))
            return Violation{"pair " + std::to_string(i + 1) + " (" + std::to_string(p.s) + "," +
                             std::to_string(p.t) + ") at distance " +
                             std::to_string(df.dist[p.t]) + " < 1"};
    }
    return std::nullopt;
}

std::optional<Violation> verify_dual(const Graph& g, const FlowPaths& fp) {
    std::map<EdgeId, int> index_of;
    for (int i = 0; i < g.edge_count(); ++i) index_of[g.edge(i).id] = i;
    std::vector<double> load(g.edge_count(), 0.0);
    for (const FlowPath& path : fp.paths) {
        if (path.value < 0.0) return Violation{"negative path value"};
        if (path.pair_index < 0 || path.pair_index >= g.pair_count())
            return Violation{"path pair index out of range"};
        const TerminalPair& p = g.pairs()[path.pair_index];
        VertexId at = p.s;
        for (EdgeId id : path.edge_ids) {
            auto it = index_of.find(id);
            if (it == index_of.end()) return Violation{"unknown edge id " + std::to_string(id)};
            const Edge& e = g.edge(it->second);
            if (e.u != at && e.v != at)
                return Violation{"path is not contiguous at vertex " + std::to_string(at)};
            at = e.other(at);
            load[it->second] += path.value;
        }
        if (at != p.t) return Violation{"path does not end at its sink"};
    }
    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edge(i);
        if (e.cap.infinite) continue;
        if (load[i] > e.cap.value * (1.0 + 1e-9))
            return Violation{"edge " + std::to_string(e.id) + " overloaded: " +
                             std::to_string(load[i]) + " > " + std::to_string(e.cap.value)};
    }
    return std::nullopt;
}

std::vector<double> normalize_lengths(const Graph& g, const std::vector<double>& raw,
                                      const std::vector<int>& dropped_pairs) {
    std::vector<char> dropped(g.pair_count(), 0);
    for (int i : dropped_pairs) dropped[i] = 1;
    Graph measured = g.with_lengths(raw);
    double alpha = kInf;
    for (int i = 0; i < g.pair_count(); ++i) {
        if (dropped[i]) continue;
        const TerminalPair& p = g.pairs()[i];
        VertexId src[1] = {p.s};
        DistanceField df = multi_source_distances(measured, src);
        alpha = std::min(alpha, df.dist[p.t]);
    }
    if (!(alpha > 0.0) || alpha == kInf) return raw;
    std::vector<double> out(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / alpha;
    return out;
}

}  // namespace mcut
