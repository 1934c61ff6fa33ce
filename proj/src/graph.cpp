#include "mcut/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include "mcut/error.hpp"

namespace mcut {

Graph::Graph(int vertex_count, std::vector<Edge> edges, std::vector<TerminalPair> pairs)
    : Graph(vertex_count, std::move(edges), std::move(pairs),
            std::vector<char>(static_cast<size_t>(vertex_count) + 1, 1)) {}

Graph::Graph(int vertex_count, std::vector<Edge> edges, std::vector<TerminalPair> pairs,
             std::vector<char> active)
    : vertex_count_(vertex_count),
      edges_(std::move(edges)),
      pairs_(std::move(pairs)),
      active_(std::move(active)) {
    if (vertex_count_ < 0) throw_input("graph: negative vertex count");
    active_.resize(static_cast<size_t>(vertex_count_) + 1, 0);
    active_[0] = 0;
    active_count_ = 0;
    for (VertexId v = 1; v <= vertex_count_; ++v) active_count_ += active_[v] ? 1 : 0;
    for (const Edge& e : edges_) {
        if (e.u < 1 || e.u > vertex_count_ || e.v < 1 || e.v > vertex_count_)
            throw_input("graph: edge endpoint out of range");
        if (!active_[e.u] || !active_[e.v])
            throw_internal("graph: edge incident to inactive vertex");
    }
    build_adjacency();
}

void Graph::build_adjacency() {
    adj_offsets_.assign(static_cast<size_t>(vertex_count_) + 2, 0);
    for (const Edge& e : edges_) {
        ++adj_offsets_[e.u + 1];
        ++adj_offsets_[e.v + 1];
    }
    for (size_t i = 1; i < adj_offsets_.size(); ++i) adj_offsets_[i] += adj_offsets_[i - 1];
    adj_edge_indices_.assign(edges_.size() * 2, 0);
    std::vector<int> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
        adj_edge_indices_[fill[edges_[i].u]++] = i;
        adj_edge_indices_[fill[edges_[i].v]++] = i;
    }
}

std::span<const int> Graph::incident(VertexId v) const {
    return std::span<const int>(adj_edge_indices_.data() + adj_offsets_[v],
                                adj_edge_indices_.data() + adj_offsets_[v + 1]);
}

std::vector<VertexId> Graph::active_vertices() const {
    std::vector<VertexId> out;
    out.reserve(active_count_);
    for (VertexId v = 1; v <= vertex_count_; ++v)
        if (active_[v]) out.push_back(v);
    return out;
}

int Graph::index_of_id(EdgeId id) const {
    if (id == kAuxEdge) return -1;
    for (int i = 0; i < static_cast<int>(edges_.size()); ++i)
        if (edges_[i].id == id) return i;
    return -1;
}

double Graph::total_mass() const {
    double sum = 0.0;
    for (const Edge& e : edges_)
        if (!e.cap.infinite) sum += e.cap.value * e.length;
    return sum;
}

bool Graph::has_infinite_edges() const {
    for (const Edge& e : edges_)
        if (e.cap.infinite) return true;
    return false;
}

Graph Graph::remove_vertices(std::span<const VertexId> vs) const {
    std::vector<char> act = active_;
    for (VertexId v : vs) {
        if (v < 1 || v > vertex_count_) throw_input("remove_vertices: vertex id out of range");
        act[v] = 0;
    }
    std::vector<Edge> kept;
    kept.reserve(edges_.size());
    for (const Edge& e : edges_)
        if (act[e.u] && act[e.v]) kept.push_back(e);
    return Graph(vertex_count_, std::move(kept), pairs_, std::move(act));
}

Graph Graph::induced_subgraph(std::span<const VertexId> vs) const {
    std::vector<char> act(static_cast<size_t>(vertex_count_) + 1, 0);
    for (VertexId v : vs) {
        if (v < 1 || v > vertex_count_) throw_input("induced_subgraph: vertex id out of range");
        if (!active_[v]) throw_input("induced_subgraph: vertex not active");
        act[v] = 1;
    }
    std::vector<Edge> kept;
    for (const Edge& e : edges_)
        if (act[e.u] && act[e.v]) kept.push_back(e);
    return Graph(vertex_count_, std::move(kept), pairs_, std::move(act));
}

Graph Graph::with_lengths(std::span<const double> lengths) const {
    if (lengths.size() != edges_.size()) throw_input("with_lengths: size mismatch");
    std::vector<Edge> es = edges_;
    for (size_t i = 0; i < es.size(); ++i) {
        if (lengths[i] < 0.0 || std::isnan(lengths[i]))
            throw_input("with_lengths: negative length");
        es[i].length = es[i].cap.infinite ? 0.0 : lengths[i];
    }
    return Graph(vertex_count_, std::move(es), pairs_, active_);
}

Graph Graph::with_pairs(std::vector<TerminalPair> pairs) const {
    return Graph(vertex_count_, edges_, std::move(pairs), active_);
}

Graph Graph::augmented(int extra_vertices, std::vector<Edge> extra_edges) const {
    std::vector<char> act = active_;
    act.resize(static_cast<size_t>(vertex_count_ + extra_vertices) + 1, 1);
    std::vector<Edge> es = edges_;
    es.insert(es.end(), extra_edges.begin(), extra_edges.end());
    return Graph(vertex_count_ + extra_vertices, std::move(es), pairs_, std::move(act));
}

Graph Graph::revived(VertexId v, std::vector<Edge> aux_edges) const {
    if (v < 1 || v > vertex_count_) throw_input("revived: vertex id out of range");
    std::vector<char> act = active_;
    act[v] = 1;
    std::vector<Edge> es = edges_;
    es.insert(es.end(), aux_edges.begin(), aux_edges.end());
    return Graph(vertex_count_, std::move(es), pairs_, std::move(act));
}

Graph Graph::minus_edge_ids(std::span<const EdgeId> ids) const {
    std::set<EdgeId> drop(ids.begin(), ids.end());
    std::vector<Edge> kept;
    kept.reserve(edges_.size());
    for (const Edge& e : edges_)
        if (e.id == kAuxEdge || !drop.count(e.id)) kept.push_back(e);
    return Graph(vertex_count_, std::move(kept), pairs_, active_);
}

void Graph::validate_input() const {
    if (vertex_count_ < 1) throw_input("graph: vertex count must be positive");
    std::set<std::pair<VertexId, VertexId>> seen;
    for (const Edge& e : edges_) {
        if (e.u == e.v) throw_input("graph: self-loop at vertex " + std::to_string(e.u));
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second)
            throw_input("graph: duplicate edge (" + std::to_string(key.first) + "," +
                        std::to_string(key.second) + ")");
        if (!e.cap.infinite && (e.cap.value < 0.0 || std::isnan(e.cap.value)))
            throw_input("graph: negative capacity on edge " + std::to_string(e.id));
        if (e.length < 0.0 || std::isnan(e.length))
            throw_input("graph: negative length on edge " + std::to_string(e.id));
        if (e.cap.infinite && e.length != 0.0)
            throw_input("graph: INFINITE-capacity edge must have length 0 (edge " +
                        std::to_string(e.id) + ")");
    }
    for (const TerminalPair& p : pairs_) {
        if (p.s < 1 || p.s > vertex_count_ || p.t < 1 || p.t > vertex_count_)
            throw_input("graph: terminal out of range");
        if (p.s == p.t)
            throw_input("graph: degenerate pair with source == sink at vertex " +
                        std::to_string(p.s));
    }
}

DistanceField multi_source_distances(const Graph& g, std::span<const VertexId> sources) {
    if (sources.empty()) throw_input("multi_source_distances: empty source set");
    DistanceField df;
    df.sources.assign(sources.begin(), sources.end());
    std::sort(df.sources.begin(), df.sources.end());
    df.sources.erase(std::unique(df.sources.begin(), df.sources.end()), df.sources.end());
    df.dist.assign(static_cast<size_t>(g.vertex_count()) + 1, kInf);

    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (VertexId s : df.sources) {
        if (!g.is_active(s))
            throw_input("multi_source_distances: invalid source vertex " + std::to_string(s));
        df.dist[s] = 0.0;
        heap.emplace(0.0, s);
    }
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > df.dist[u]) continue;
        for (int ei : g.incident(u)) {
            const Edge& e = g.edge(ei);
            VertexId w = e.other(u);
            double nd = d + e.length;
            if (nd < df.dist[w]) {
                df.dist[w] = nd;
                heap.emplace(nd, w);
            }
        }
    }
    return df;
}

std::vector<VertexId> ball(const Graph& g, const DistanceField& df, double t) {
    std::vector<VertexId> out;
    for (VertexId v = 1; v <= g.vertex_count(); ++v)
        if (g.is_active(v) && df.dist[v] <= t) out.push_back(v);
    return out;
}

double volume(const Graph& g, const DistanceField& df, double t, double initial) {
    if (t < 0.0) throw_input("volume: negative radius");
    double vol = initial;
    for (const Edge& e : g.edges()) {
        if (e.cap.infinite) continue;
        double du = df.dist[e.u], dv = df.dist[e.v];
        bool in_u = du <= t, in_v = dv <= t;
        if (in_u && in_v) {
            vol += e.cap.value * e.length;
        } else if (in_u || in_v) {
            vol += e.cap.value * (t - std::min(du, dv));
        }
    }
    return vol;
}

double volume_left_limit(const Graph& g, const DistanceField& df, double t, double initial) {
    if (t < 0.0) throw_input("volume: negative radius");
    double vol = initial;
    for (const Edge& e : g.edges()) {
        if (e.cap.infinite) continue;
        double du = df.dist[e.u], dv = df.dist[e.v];
        bool in_u = du < t, in_v = dv < t;
        if (in_u && in_v) {
            vol += e.cap.value * e.length;
        } else if (in_u || in_v) {
            vol += e.cap.value * (t - std::min(du, dv));
        }
    }
    return vol;
}

Capacity cut_capacity(const Graph& g, const DistanceField& df, double t) {
    Capacity total = Capacity::finite(0.0);
    for (const Edge& e : g.edges()) {
        bool in_u = df.dist[e.u] <= t, in_v = df.dist[e.v] <= t;
        if (in_u == in_v) continue;
        if (e.cap.infinite)
            total.infinite = true;
        else
            total.value += e.cap.value;
    }
    return total;
}

std::vector<int> crossing_edge_indices(const Graph& g, const DistanceField& df, double t) {
    std::vector<int> out;
    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edge(i);
        bool in_u = df.dist[e.u] <= t, in_v = df.dist[e.v] <= t;
        if (in_u != in_v) out.push_back(i);
    }
    return out;
}

double weak_diameter(const Graph& g, std::span<const VertexId> vertices) {
    if (vertices.empty()) throw_input("weak_diameter: empty vertex set");
    double diam = 0.0;
    for (VertexId u : vertices) {
        VertexId src[1] = {u};
        DistanceField df = multi_source_distances(g, src);
        for (VertexId v : vertices) diam = std::max(diam, df.dist[v]);
    }
    return diam;
}

std::vector<std::vector<VertexId>> connected_components(const Graph& g) {
    std::vector<char> seen(static_cast<size_t>(g.vertex_count()) + 1, 0);
    std::vector<std::vector<VertexId>> comps;
    for (VertexId v = 1; v <= g.vertex_count(); ++v) {
        if (!g.is_active(v) || seen[v]) continue;
        std::vector<VertexId> comp;
        std::vector<VertexId> stack{v};
        seen[v] = 1;
        while (!stack.empty()) {
            VertexId u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (int ei : g.incident(u)) {
                VertexId w = g.edge(ei).other(u);
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

bool connected(const Graph& g, VertexId s, VertexId t) {
    if (!g.is_active(s) || !g.is_active(t)) return false;
    return !find_path(g, s, t).empty();
}

std::vector<VertexId> find_path(const Graph& g, VertexId s, VertexId t) {
    if (!g.is_active(s) || !g.is_active(t)) return {};
    std::vector<VertexId> parent(static_cast<size_t>(g.vertex_count()) + 1, 0);
    std::queue<VertexId> q;
    parent[s] = s;
    q.push(s);
    while (!q.empty() && parent[t] == 0) {
        VertexId u = q.front();
        q.pop();
        for (int ei : g.incident(u)) {
            VertexId w = g.edge(ei).other(u);
            if (parent[w] == 0) {
                parent[w] = u;
                q.push(w);
            }
        }
    }
    if (parent[t] == 0) return {};
    std::vector<VertexId> path;
    for (VertexId v = t; v != s; v = parent[v]) path.push_back(v);
    path.push_back(s);
    std::reverse(path.begin(), path.end());
    return path;
}

CutSet make_cut_set(const Graph& g, std::vector<EdgeId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    CutSet cut;
    cut.edge_ids = std::move(ids);
    for (EdgeId id : cut.edge_ids) {
        if (id == kAuxEdge) throw_internal("cut set contains auxiliary edge");
        int idx = g.index_of_id(id);
        if (idx < 0) throw_input("cut set references unknown edge id " + std::to_string(id));
        if (g.edge(idx).cap.infinite)
            throw_internal("cut set contains INFINITE-capacity edge " + std::to_string(id));
        cut.cost += g.edge(idx).cap.value;
    }
    return cut;
}

std::string format_vertex_set(std::span<const VertexId> vs, size_t limit) {
    std::ostringstream os;
    os << '{';
    for (size_t i = 0; i < vs.size() && i < limit; ++i) {
        if (i) os << ',';
        os << vs[i];
    }
    if (vs.size() > limit) os << ",...(" << vs.size() << " total)";
    os << '}';
    return os.str();
}

}  // namespace mcut
