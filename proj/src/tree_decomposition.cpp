#include "mcut/tree_decomposition.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "mcut/error.hpp"

namespace mcut {

int TreeDecomposition::width() const {
    int w = -1;
    for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
    return w;
}

namespace {

// Union-find over bag ids, used for the tree-shape check.
struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n + 1) {
        for (int i = 0; i <= n; ++i) p[i] = i;
    }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[a] = b;
        return true;
    }
};

}  // namespace

void validate_tree_decomposition(const Graph& g, const TreeDecomposition& td) {
    int m = td.bag_count();
    if (m < 1) throw_input("tree decomposition: no bags");
    for (const auto& bag : td.bags)
        for (VertexId v : bag)
            if (v < 1 || v > g.vertex_count())
                throw_input("tree decomposition: bag vertex " + std::to_string(v) +
                            " out of range");

    // Tree shape: exactly m-1 edges, acyclic, connected.
    if (static_cast<int>(td.tree_edges.size()) != m - 1)
        throw_input("tree decomposition: " + std::to_string(td.tree_edges.size()) +
                    " tree edges for " + std::to_string(m) + " bags (tree needs " +
                    std::to_string(m - 1) + ")");
    Dsu dsu(m);
    for (auto [a, b] : td.tree_edges) {
        if (a < 1 || a > m || b < 1 || b > m)
            throw_input("tree decomposition: tree edge bag id out of range");
        if (!dsu.unite(a, b))
            throw_input("tree decomposition: tree edges contain a cycle through bag " +
                        std::to_string(a));
    }

    // Vertex coverage.
    std::vector<char> covered(static_cast<size_t>(g.vertex_count()) + 1, 0);
    for (const auto& bag : td.bags)
        for (VertexId v : bag) covered[v] = 1;
    for (VertexId v = 1; v <= g.vertex_count(); ++v)
        if (g.is_active(v) && !covered[v])
            throw_input("tree decomposition: vertex " + std::to_string(v) + " is in no bag");

    // Edge coverage (condition ii).
    for (const Edge& e : g.edges()) {
        bool found = false;
        for (const auto& bag : td.bags) {
            if (std::binary_search(bag.begin(), bag.end(), e.u) &&
                std::binary_search(bag.begin(), bag.end(), e.v)) {
                found = true;
                break;
            }
        }
        if (!found)
            throw_input("tree decomposition: edge (" + std::to_string(e.u) + "," +
                        std::to_string(e.v) + ") not covered by any bag");
    }

    // Connected occurrence subtrees (condition iii): for each vertex, the bags
    // containing it must form one connected piece of the tree.
    std::vector<std::vector<int>> bag_adj(m + 1);
    for (auto [a, b] : td.tree_edges) {
        bag_adj[a].push_back(b);
        bag_adj[b].push_back(a);
    }
    std::vector<std::vector<int>> bags_of_vertex(static_cast<size_t>(g.vertex_count()) + 1);
    for (int i = 0; i < m; ++i)
        for (VertexId v : td.bags[i]) bags_of_vertex[v].push_back(i + 1);
    std::vector<char> in_set(m + 1, 0), seen(m + 1, 0);
    for (VertexId v = 1; v <= g.vertex_count(); ++v) {
        const auto& occ = bags_of_vertex[v];
        if (occ.size() <= 1) continue;
        for (int b : occ) in_set[b] = 1;
        std::vector<int> stack{occ[0]};
        seen[occ[0]] = 1;
        size_t reached = 1;
        while (!stack.empty()) {
            int b = stack.back();
            stack.pop_back();
            for (int nb : bag_adj[b]) {
                if (in_set[nb] && !seen[nb]) {
                    seen[nb] = 1;
                    ++reached;
                    stack.push_back(nb);
                }
            }
        }
        for (int b : occ) in_set[b] = seen[b] = 0;
        if (reached != occ.size())
            throw_input("tree decomposition: bags containing vertex " + std::to_string(v) +
                        " do not form a connected subtree");
    }
}

TreeDecomposition heuristic_tree_decomposition(const Graph& g) {
    int n = g.vertex_count();
    std::vector<std::set<VertexId>> nbr(static_cast<size_t>(n) + 1);
    for (const Edge& e : g.edges()) {
        nbr[e.u].insert(e.v);
        nbr[e.v].insert(e.u);
    }
    std::vector<char> eliminated(static_cast<size_t>(n) + 1, 0);
    std::vector<VertexId> order;
    std::vector<std::vector<VertexId>> elim_bag(static_cast<size_t>(n) + 1);

    std::vector<VertexId> alive = g.active_vertices();
    for (size_t step = 0; step < alive.size(); ++step) {
        // Pick the vertex whose neighborhood needs the fewest fill-in edges.
        VertexId best = 0;
        long best_fill = -1;
        for (VertexId v : alive) {
            if (eliminated[v]) continue;
            std::vector<VertexId> nb(nbr[v].begin(), nbr[v].end());
            long fill = 0;
            for (size_t i = 0; i < nb.size(); ++i)
                for (size_t j = i + 1; j < nb.size(); ++j)
                    if (!nbr[nb[i]].count(nb[j])) ++fill;
            if (best == 0 || fill < best_fill) {
                best = v;
                best_fill = fill;
            }
        }
        std::vector<VertexId> nb(nbr[best].begin(), nbr[best].end());
        for (size_t i = 0; i < nb.size(); ++i)
            for (size_t j = i + 1; j < nb.size(); ++j) {
                nbr[nb[i]].insert(nb[j]);
                nbr[nb[j]].insert(nb[i]);
            }
        for (VertexId w : nb) nbr[w].erase(best);
        elim_bag[best] = nb;
        elim_bag[best].push_back(best);
        std::sort(elim_bag[best].begin(), elim_bag[best].end());
        eliminated[best] = 1;
        order.push_back(best);
    }

    // Standard elimination-order construction: the bag of v connects to the
    // bag of its earliest-eliminated remaining neighbor.
    std::vector<int> elim_pos(static_cast<size_t>(n) + 1, 0);
    for (size_t i = 0; i < order.size(); ++i) elim_pos[order[i]] = static_cast<int>(i);
    TreeDecomposition td;
    std::vector<int> bag_id_of(static_cast<size_t>(n) + 1, 0);
    for (size_t i = 0; i < order.size(); ++i) {
        td.bags.push_back(elim_bag[order[i]]);
        bag_id_of[order[i]] = static_cast<int>(i) + 1;
    }
    for (VertexId v : order) {
        VertexId next = 0;
        for (VertexId w : elim_bag[v]) {
            if (w == v || elim_pos[w] < elim_pos[v]) continue;
            if (next == 0 || elim_pos[w] < elim_pos[next]) next = w;
        }
        if (next != 0) td.tree_edges.emplace_back(bag_id_of[v], bag_id_of[next]);
    }
    // Vertices in separate connected components leave a forest; chain the
    // remaining roots together (bags overlap nothing, still a valid tree).
    {
        Dsu dsu(td.bag_count());
        for (auto [a, b] : td.tree_edges) dsu.unite(a, b);
        int prev_root = 0;
        for (int i = 1; i <= td.bag_count(); ++i) {
            if (dsu.find(i) == i) {
                if (prev_root != 0) {
                    td.tree_edges.emplace_back(prev_root, i);
                    dsu.unite(prev_root, i);
                }
                prev_root = dsu.find(i);
            }
        }
    }
    return td;
}

}  // namespace mcut
