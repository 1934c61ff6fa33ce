#include "mcut/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "mcut/error.hpp"

namespace mcut {

namespace {

bool sorted_contains(const std::vector<VertexId>& vs, VertexId v) {
    return std::binary_search(vs.begin(), vs.end(), v);
}

bool intersects(const std::vector<VertexId>& sorted_a, const std::vector<VertexId>& sorted_b) {
    size_t i = 0, j = 0;
    while (i < sorted_a.size() && j < sorted_b.size()) {
        if (sorted_a[i] == sorted_b[j]) return true;
        if (sorted_a[i] < sorted_b[j])
            ++i;
        else
            ++j;
    }
    return false;
}

void merge_into(std::vector<VertexId>& dst, const std::vector<VertexId>& sorted_src) {
    std::vector<VertexId> merged;
    merged.reserve(dst.size() + sorted_src.size());
    std::set_union(dst.begin(), dst.end(), sorted_src.begin(), sorted_src.end(),
                   std::back_inserter(merged));
    dst = std::move(merged);
}

}  // namespace

CutSet sdd_with_cover(const Graph& g, std::span<const VertexId> cover) {
    std::vector<VertexId> centers(cover.begin(), cover.end());
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());

    if (centers.empty()) {
        if (g.active_count() > 0) throw_input("sdd_with_cover: empty cover for nonempty graph");
        return CutSet{};
    }
    {
        DistanceField dc = multi_source_distances(g, centers);
        for (VertexId v = 1; v <= g.vertex_count(); ++v)
            if (g.is_active(v) && !(dc.dist[v] <= 0.25 + 1e-9))
                throw_input("sdd_with_cover: vertex " + std::to_string(v) + " at distance " +
                            std::to_string(dc.dist[v]) + " > 1/4 from the cover");
    }

    const double mass = g.total_mass();
    const double r = static_cast<double>(centers.size());
    // Zero total mass forces zero-capacity boundaries; any positive initial
    // volume then makes the certificate demand exactly that.
    const double initial = mass > 0.0 ? mass / r : 1.0;

    Graph work = g;
    std::vector<EdgeId> cut_ids;
    for (size_t i = 0; i < centers.size(); ++i) {
        VertexId s = centers[i];
        if (!work.is_active(s))
            throw_internal("sdd_with_cover: center " + std::to_string(s) + " lost");
        VertexId src[1] = {s};
        DistanceField df = multi_source_distances(work, src);
        RadiusChoice rc = choose_radius(work, df, 0.25, 0.5, initial);
        std::vector<VertexId> region = ball(work, df, rc.t);
        for (int ei : crossing_edge_indices(work, df, rc.t)) {
            const Edge& e = work.edge(ei);
            if (e.id == kAuxEdge) continue;  // center stubs are not graph edges
            if (e.cap.infinite) throw_internal("sdd_with_cover: INFINITE edge crosses ball");
            cut_ids.push_back(e.id);
        }
        // Later centers swallowed by this ball come back as zero-capacity
        // stubs carrying original-graph distances to the survivors.
        std::vector<VertexId> swallowed;
        for (size_t j = i + 1; j < centers.size(); ++j)
            if (sorted_contains(region, centers[j])) swallowed.push_back(centers[j]);
        work = work.remove_vertices(region);
        std::vector<VertexId> survivors = work.active_vertices();
        for (VertexId sj : swallowed) {
            VertexId sj_src[1] = {sj};
            DistanceField dorig = multi_source_distances(g, sj_src);
            std::vector<Edge> stubs;
            for (VertexId u : survivors) {
                double d = dorig.dist[u];
                if (std::isinf(d)) continue;
                stubs.push_back(Edge{kAuxEdge, sj, u, Capacity::finite(0.0), d});
            }
            work = work.revived(sj, std::move(stubs));
        }
    }
    return make_cut_set(g, std::move(cut_ids));
}

Phase1Result phase1_grow_cores(const WidthDecomposition& wd, const PipelineConfig& cfg) {
    const Graph& g = wd.graph;
    const int n = g.vertex_count();
    const int nbags = wd.bag_count();

    Phase1Result out;
    out.attachments.assign(nbags + 1, {});
    std::vector<char> covered(static_cast<size_t>(n) + 1, 0);
    int covered_count = 0;

    std::vector<std::vector<int>> children(nbags + 1);
    for (int b = 1; b <= nbags; ++b)
        if (wd.parent[b] != 0) children[wd.parent[b]].push_back(b);
    for (auto& c : children) std::sort(c.begin(), c.end());

    auto bag_uncovered = [&](int b) {
        for (VertexId v : wd.bags[b - 1])
            if (!covered[v]) return true;
        return false;
    };

    while (covered_count < n) {
        ++out.iterations;
        if (out.iterations > n) throw_internal("phase 1: no progress after n iterations");

        // The forest over uncovered bags is frozen for this iteration;
        // coverage itself is applied live as cores appear.
        std::vector<char> in_forest(nbags + 1, 0);
        for (int b = 1; b <= nbags; ++b) in_forest[b] = bag_uncovered(b) ? 1 : 0;

        // Connected components of the forest; the root of each is the unique
        // shallowest bag. Components processed by ascending root id.
        std::vector<int> comp_of(nbags + 1, 0);
        std::vector<std::vector<int>> comp_bags;
        std::vector<int> comp_root;
        for (int b = 1; b <= nbags; ++b) {
            if (!in_forest[b] || comp_of[b] != 0) continue;
            int cid = static_cast<int>(comp_bags.size()) + 1;
            std::vector<int> stack{b}, members;
            comp_of[b] = cid;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                members.push_back(x);
                int p = wd.parent[x];
                if (p != 0 && in_forest[p] && comp_of[p] == 0) {
                    comp_of[p] = cid;
                    stack.push_back(p);
                }
                for (int c : children[x])
                    if (in_forest[c] && comp_of[c] == 0) {
                        comp_of[c] = cid;
                        stack.push_back(c);
                    }
            }
            std::sort(members.begin(), members.end());
            int root = members[0];
            for (int x : members)
                if (wd.level[x] < wd.level[root] || (wd.level[x] == wd.level[root] && x < root))
                    root = x;
            comp_bags.push_back(std::move(members));
            comp_root.push_back(root);
        }

        for (size_t c = 0; c < comp_bags.size(); ++c) {
            const std::vector<int>& members = comp_bags[c];
            const int root = comp_root[c];
            std::set<int> unvisited(members.begin(), members.end());
            std::vector<char> in_comp(nbags + 1, 0);
            for (int b : members) in_comp[b] = 1;

            while (!unvisited.empty()) {
                int B = *unvisited.begin();
                for (int b : unvisited)
                    if (wd.level[b] < wd.level[B]) B = b;
                unvisited.erase(B);

                std::vector<VertexId> center;
                for (VertexId v : wd.bags[B - 1])
                    if (!covered[v]) center.push_back(v);
                if (center.empty()) continue;

                // Growth graph: uncovered vertices of the subtree of B within
                // this component, plus all attachments hanging below B.
                std::vector<VertexId> grow_set;
                {
                    std::vector<int> stack{B};
                    while (!stack.empty()) {
                        int x = stack.back();
                        stack.pop_back();
                        for (VertexId v : wd.bags[x - 1])
                            if (!covered[v]) grow_set.push_back(v);
                        for (VertexId v : out.attachments[x]) grow_set.push_back(v);
                        for (int ch : children[x])
                            if (in_comp[ch]) stack.push_back(ch);
                    }
                    std::sort(grow_set.begin(), grow_set.end());
                    grow_set.erase(std::unique(grow_set.begin(), grow_set.end()), grow_set.end());
                }
                Graph grow = g.induced_subgraph(grow_set);
                DistanceField df = multi_source_distances(grow, center);
                std::vector<VertexId> region = ball(grow, df, cfg.a);

                Core core;
                core.id = static_cast<int>(out.cores.size()) + 1;
                core.vertices = region;
                core.center = center;
                core.center_bag = B;
                core.rank = out.iterations;
                out.cores.push_back(core);

                for (VertexId v : region)
                    if (!covered[v]) {
                        covered[v] = 1;
                        ++covered_count;
                    }
                for (auto it = unvisited.begin(); it != unvisited.end();) {
                    if (intersects(wd.bags[*it - 1], region))
                        it = unvisited.erase(it);
                    else
                        ++it;
                }
                if (B != root) merge_into(out.attachments[wd.parent[B]], region);
            }
        }
    }
    return out;
}

Phase2Result phase2_grow_components(const WidthDecomposition& wd, const Phase1Result& p1,
                                    const PipelineConfig& cfg) {
    if (cfg.b != 2.0 * cfg.a) throw_input("phase 2: requires b = 2a");
    const Graph& g = wd.graph;
    const double span = cfg.b - cfg.a;
    const double h = cfg.h > 0.0 ? cfg.h : PipelineConfig::default_h(wd.width);

    std::vector<int> order(p1.cores.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Core& ca = p1.cores[a];
        const Core& cb = p1.cores[b];
        int la = wd.level[ca.center_bag], lb = wd.level[cb.center_bag];
        if (la != lb) return la < lb;
        return ca.center_bag < cb.center_bag;
    });

    Phase2Result out;
    Graph cur = g;
    std::vector<int> comp_of(static_cast<size_t>(g.vertex_count()) + 1, 0);

    for (int oi : order) {
        const Core& core = p1.cores[oi];
        Phase2Result::CoreTrace tr;
        tr.core_id = core.id;

        std::vector<VertexId> remainder;
        for (VertexId v : core.vertices)
            if (cur.is_active(v)) remainder.push_back(v);
        if (remainder.empty()) {
            tr.skipped = true;
            out.trace.push_back(std::move(tr));
            continue;
        }

        std::vector<char> in_r(static_cast<size_t>(g.vertex_count()) + 1, 0);
        for (VertexId v : remainder) in_r[v] = 1;
        bool isolated = true;
        for (VertexId v : remainder) {
            for (int ei : cur.incident(v))
                if (!in_r[cur.edge(ei).other(v)]) {
                    isolated = false;
                    break;
                }
            if (!isolated) break;
        }

        DistanceField df = multi_source_distances(cur, remainder);
        std::vector<VertexId> region;
        if (isolated) {
            tr.isolated = true;
            region = remainder;
        } else {
            double vol_span = volume_left_limit(cur, df, span, 0.0);
            if (vol_span == 0.0) {
                // No volume anywhere in [0, span): every crossing edge has
                // zero capacity, so the zero radius already cuts nothing.
                Capacity c0 = cut_capacity(cur, df, 0.0);
                if (c0.infinite || c0.value != 0.0)
                    throw_internal("phase 2: zero-volume ball with positive boundary");
                tr.radius = 0.0;
                region = ball(cur, df, 0.0);
            } else {
                tr.initial_volume = vol_span / h;
                RadiusChoice rc = choose_radius(cur, df, 0.0, span, tr.initial_volume);
                tr.choice = rc;
                tr.radius = rc.t;
                region = ball(cur, df, rc.t);
            }
        }
        for (int i = 0; i < cur.edge_count(); ++i) {
            const Edge& e = cur.edge(i);
            if (std::min(df.dist[e.u], df.dist[e.v]) <= span) tr.shadow_edge_ids.push_back(e.id);
        }

        Component comp;
        comp.id = static_cast<int>(out.components.size()) + 1;
        comp.vertices = region;
        comp.core_id = core.id;
        comp.center = core.center;
        for (VertexId v : region) comp_of[v] = comp.id;
        out.components.push_back(std::move(comp));
        out.trace.push_back(std::move(tr));
        cur = cur.remove_vertices(region);
    }

    for (VertexId v = 1; v <= g.vertex_count(); ++v)
        if (comp_of[v] == 0)
            throw_internal("phase 2: vertex " + std::to_string(v) + " ended in no component");

    std::vector<EdgeId> ids;
    for (const Edge& e : g.edges()) {
        if (comp_of[e.u] == comp_of[e.v]) continue;
        if (e.cap.infinite)
            throw_internal("phase 2: components split an INFINITE edge");
        ids.push_back(e.id);
    }
    out.x2 = make_cut_set(g, std::move(ids));
    return out;
}

CutSet phase3_decompose(const Graph& transformed, const std::vector<Component>& components,
                        const PipelineConfig& cfg) {
    if (cfg.b != 0.25)
        throw_input("phase 3: the cover decomposition needs b = 1/4");

    std::vector<EdgeId> ids;
    for (const Component& comp : components) {
        Graph induced = transformed.induced_subgraph(comp.vertices);

        // Auxiliary graph: the component plus its center vertices, each tied
        // to every component vertex by a zero-capacity stub of original-graph
        // length. Centers already inside the component are reused.
        std::vector<VertexId> cover_in_aux;
        std::vector<Edge> stubs;
        int extra = 0;
        for (VertexId y : comp.center) {
            VertexId src[1] = {y};
            DistanceField dy = multi_source_distances(transformed, src);
            VertexId y_aux;
            if (sorted_contains(comp.vertices, y)) {
                y_aux = y;
            } else {
                ++extra;
                y_aux = transformed.vertex_count() + extra;
            }
            cover_in_aux.push_back(y_aux);
            for (VertexId s : comp.vertices) {
                if (s == y_aux) continue;
                double d = dy.dist[s];
                if (std::isinf(d)) continue;
                stubs.push_back(Edge{kAuxEdge, y_aux, s, Capacity::finite(0.0), d});
            }
        }
        Graph aux = induced.augmented(extra, std::move(stubs));
        CutSet local = sdd_with_cover(aux, cover_in_aux);
        ids.insert(ids.end(), local.edge_ids.begin(), local.edge_ids.end());
    }
    return make_cut_set(transformed, std::move(ids));
}

std::vector<int> shadow_counts(const Graph& transformed, const Phase2Result& p2) {
    std::vector<int> counts(static_cast<size_t>(transformed.edge_count()) + 1, 0);
    for (const auto& tr : p2.trace)
        for (EdgeId id : tr.shadow_edge_ids) ++counts[id];
    return counts;
}

PipelineRun run_pipeline(const Graph& g, const TreeDecomposition& td,
                         const PipelineOptions& options) {
    validate_tree_decomposition(g, td);
    PipelineRun run;

    // Lengths for the decomposition metric.
    std::vector<double> x;
    if (g.pair_count() == 0) {
        // Nothing to cut; no LP, no phases.
        run.result.wd = tree_to_width(g, td);
        run.result.fstar =
            options.lengths == LengthsSource::Given ? g.total_mass() : 0.0;
        run.primal_feasible = true;
        return run;
    }
    if (options.lengths == LengthsSource::SolveLp) {
        run.lp = solve_fractional(g, options.epsilon);
        x = run.lp->solution.x;
        run.primal_feasible = true;
    } else {
        x.reserve(g.edge_count());
        for (const Edge& e : g.edges()) x.push_back(e.cap.infinite ? 0.0 : e.length);
        run.primal_feasible = true;
        Graph measured = g.with_lengths(x);
        for (const TerminalPair& p : g.pairs()) {
            VertexId src[1] = {p.s};
            DistanceField df = multi_source_distances(measured, src);
            if (!(df.dist[p.t] >= 1.0 - 1e-9)) {
                run.primal_feasible = false;  // still a valid decomposition input
                break;
            }
        }
    }

    Graph metric = g.with_lengths(x);
    PipelineResult& res = run.result;
    res.wd = tree_to_width(metric, td);
    res.fstar = metric.total_mass();

    PipelineConfig cfg = options.config;
    if (cfg.h <= 0.0) cfg.h = PipelineConfig::default_h(res.wd.width);
    if (!(cfg.a > 0.0) || cfg.b != 2.0 * cfg.a)
        throw_input("run_pipeline: config requires 0 < a and b = 2a");

    Phase1Result p1 = phase1_grow_cores(res.wd, cfg);
    Phase2Result p2 = phase2_grow_components(res.wd, p1, cfg);
    res.x3 = phase3_decompose(res.wd.graph, p2.components, cfg);

    res.cores = p1.cores;
    res.components = p2.components;
    res.x2 = p2.x2;
    res.cost_x2 = res.x2.cost;
    res.cost_x3 = res.x3.cost;

    std::vector<EdgeId> all_ids = res.x2.edge_ids;
    all_ids.insert(all_ids.end(), res.x3.edge_ids.begin(), res.x3.edge_ids.end());
    CutSet transformed_cut = make_cut_set(res.wd.graph, std::move(all_ids));
    res.original_cut = map_cut_to_original(g, res.wd, transformed_cut);

    res.diagnostics.phase1_iterations = p1.iterations;
    for (int b = 1; b <= res.wd.bag_count(); ++b) {
        int count = 0;
        for (const Core& core : res.cores)
            if (intersects(core.vertices, res.wd.bags[b - 1])) ++count;
        res.diagnostics.max_cores_per_bag = std::max(res.diagnostics.max_cores_per_bag, count);
    }
    std::vector<int> shadows = shadow_counts(res.wd.graph, p2);
    for (int c : shadows)
        res.diagnostics.max_shadow_count = std::max(res.diagnostics.max_shadow_count, c);
    for (const auto& tr : p2.trace) res.diagnostics.shadow_volume_sum += tr.initial_volume;

    return run;
}

}  // namespace mcut
