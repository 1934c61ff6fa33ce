#include "mcut/width_decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "mcut/error.hpp"

namespace mcut {

WidthDecomposition tree_to_width(const Graph& g, const TreeDecomposition& td) {
    validate_tree_decomposition(g, td);
    int m = td.bag_count();

    // One copy per (bag, vertex) occurrence; copies numbered bag by bag.
    std::vector<std::map<VertexId, VertexId>> copy_in_bag(m + 1);  // bag -> original -> copy
    WidthDecomposition wd;
    wd.bags.assign(m, {});
    wd.copy_to_original.push_back(0);  // 1-based
    wd.bag_of_.push_back(0);
    VertexId next = 1;
    for (int b = 1; b <= m; ++b) {
        for (VertexId v : td.bags[b - 1]) {
            copy_in_bag[b][v] = next;
            wd.bags[b - 1].push_back(next);
            wd.copy_to_original.push_back(v);
            wd.bag_of_.push_back(b);
            ++next;
        }
    }
    int transformed_n = next - 1;

    std::vector<Edge> edges;
    std::vector<EdgeId> edge_to_original{0};  // 1-based
    EdgeId next_edge_id = 1;

    // LINK edges between copies of the same vertex in td-adjacent bags.
    for (auto [a, b] : td.tree_edges) {
        for (VertexId v : td.bags[a - 1]) {
            auto it = copy_in_bag[b].find(v);
            if (it == copy_in_bag[b].end()) continue;
            edges.push_back(Edge{next_edge_id, copy_in_bag[a][v], it->second, Capacity::inf(), 0.0});
            edge_to_original.push_back(kLinkEdge);
            ++next_edge_id;
        }
    }

    // Each original edge realized once, in the lowest-id bag containing both
    // endpoints.
    for (const Edge& e : g.edges()) {
        int home = 0;
        for (int b = 1; b <= m && home == 0; ++b)
            if (copy_in_bag[b].count(e.u) && copy_in_bag[b].count(e.v)) home = b;
        if (home == 0) throw_internal("tree_to_width: edge not covered after validation");
        edges.push_back(
            Edge{next_edge_id, copy_in_bag[home][e.u], copy_in_bag[home][e.v], e.cap, e.length});
        edge_to_original.push_back(e.id);
        ++next_edge_id;
    }

    // Terminals lifted to their copy in the lowest-id containing bag.
    auto lift = [&](VertexId v) -> VertexId {
        for (int b = 1; b <= m; ++b) {
            auto it = copy_in_bag[b].find(v);
            if (it != copy_in_bag[b].end()) return it->second;
        }
        throw_internal("tree_to_width: terminal in no bag after validation");
    };
    std::vector<TerminalPair> pairs;
    for (const TerminalPair& p : g.pairs()) pairs.push_back({lift(p.s), lift(p.t)});

    wd.graph = Graph(transformed_n, std::move(edges), std::move(pairs));
    wd.edge_to_original = std::move(edge_to_original);

    // Root at bag 1; levels by BFS.
    wd.parent.assign(m + 1, 0);
    wd.level.assign(m + 1, 0);
    wd.root = 1;
    std::vector<std::vector<int>> bag_adj(m + 1);
    for (auto [a, b] : td.tree_edges) {
        bag_adj[a].push_back(b);
        bag_adj[b].push_back(a);
    }
    for (auto& adj : bag_adj) std::sort(adj.begin(), adj.end());
    std::vector<char> seen(m + 1, 0);
    std::queue<int> q;
    q.push(1);
    seen[1] = 1;
    while (!q.empty()) {
        int b = q.front();
        q.pop();
        for (int nb : bag_adj[b]) {
            if (seen[nb]) continue;
            seen[nb] = 1;
            wd.parent[nb] = b;
            wd.level[nb] = wd.level[b] + 1;
            q.push(nb);
        }
    }

    wd.width = 0;
    for (const auto& bag : wd.bags) wd.width = std::max(wd.width, static_cast<int>(bag.size()));
    return wd;
}

void validate_width_decomposition(const Graph& original, const WidthDecomposition& wd) {
    const Graph& tg = wd.graph;
    // Disjoint cover of all transformed vertices.
    std::vector<int> owner(static_cast<size_t>(tg.vertex_count()) + 1, 0);
    for (int b = 1; b <= wd.bag_count(); ++b) {
        if (static_cast<int>(wd.bags[b - 1].size()) > wd.width)
            throw_internal("width decomposition: bag exceeds width");
        for (VertexId v : wd.bags[b - 1]) {
            if (owner[v] != 0) throw_internal("width decomposition: bags not disjoint");
            owner[v] = b;
        }
    }
    for (VertexId v = 1; v <= tg.vertex_count(); ++v)
        if (owner[v] == 0) throw_internal("width decomposition: vertex not in any bag");

    // Every edge inside a bag or between a bag and its parent; LINK edges have
    // INFINITE capacity and zero length.
    for (const Edge& e : tg.edges()) {
        int bu = owner[e.u], bv = owner[e.v];
        bool ok = bu == bv || wd.parent[bu] == bv || wd.parent[bv] == bu;
        if (!ok) throw_internal("width decomposition: edge violates parent condition");
        EdgeId orig = wd.edge_to_original[e.id];
        if (orig == kLinkEdge) {
            if (!e.cap.infinite || e.length != 0.0)
                throw_internal("width decomposition: malformed LINK edge");
        } else if (e.cap.infinite != original.edge(original.index_of_id(orig)).cap.infinite) {
            throw_internal("width decomposition: capacity class changed");
        }
    }

    // Copies of one original vertex connected under LINK edges.
    {
        std::vector<std::vector<VertexId>> copies(static_cast<size_t>(original.vertex_count()) + 1);
        for (VertexId v = 1; v <= tg.vertex_count(); ++v)
            copies[wd.copy_to_original[v]].push_back(v);
        std::vector<Edge> links;
        for (const Edge& e : tg.edges())
            if (wd.edge_to_original[e.id] == kLinkEdge) links.push_back(e);
        Graph link_graph(tg.vertex_count(), links, {});
        for (VertexId ov = 1; ov <= original.vertex_count(); ++ov) {
            const auto& cs = copies[ov];
            for (size_t i = 1; i < cs.size(); ++i)
                if (!connected(link_graph, cs[0], cs[i]))
                    throw_internal("width decomposition: copies of vertex " + std::to_string(ov) +
                                   " not LINK-connected");
        }
    }

    // Mass preservation.
    double mo = original.total_mass(), mt = tg.total_mass();
    if (std::abs(mo - mt) > 1e-9 * std::max(1.0, std::abs(mo)))
        throw_internal("width decomposition: cap*length mass not preserved");
}

CutSet map_cut_to_original(const Graph& original, const WidthDecomposition& wd,
                           const CutSet& transformed_cut) {
    std::vector<EdgeId> ids;
    for (EdgeId id : transformed_cut.edge_ids) {
        EdgeId orig = wd.edge_to_original[id];
        if (orig == kLinkEdge)
            throw_internal("cut contains LINK edge " + std::to_string(id));
        ids.push_back(orig);
    }
    return make_cut_set(original, std::move(ids));
}

}  // namespace mcut
