#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mcut {

// Vertex ids are 1-based and stable: derived graphs (vertex removal, induced
// subgraphs, augmentation) keep the id space and toggle an activity mask, so a
// vertex means the same thing at every stage of the algorithm.
using VertexId = int;

// Edge ids are 1-based positions in the defining edge list of the graph they
// belong to. Helper edges created internally (re-introduced centers, Phase 3
// center stubs) carry id 0 and are never reported in any cut.
using EdgeId = int;
inline constexpr EdgeId kAuxEdge = 0;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Capacity is either a finite nonnegative value or the symbolic INFINITE used
// for never-cut bundling edges. Symbolic, not a large float: INFINITE edges
// always have length 0, contribute nothing to volumes, and an INFINITE edge in
// a cut is a hard invariant violation.
struct Capacity {
    double value = 0.0;
    bool infinite = false;

    static Capacity finite(double v) { return Capacity{v, false}; }
    static Capacity inf() { return Capacity{0.0, true}; }

    bool operator==(const Capacity&) const = default;
};

struct Edge {
    EdgeId id = kAuxEdge;
    VertexId u = 0;
    VertexId v = 0;
    Capacity cap;
    double length = 0.0;

    VertexId other(VertexId w) const { return w == u ? v : u; }
};

struct TerminalPair {
    VertexId s = 0;
    VertexId t = 0;
    bool operator==(const TerminalPair&) const = default;
};

// Undirected graph with capacities, lengths and terminal pairs. Immutable
// after construction; all derivation operations return a new Graph.
class Graph {
public:
    Graph() = default;
    Graph(int vertex_count, std::vector<Edge> edges, std::vector<TerminalPair> pairs);

    int vertex_count() const { return vertex_count_; }
    int active_count() const { return active_count_; }
    bool is_active(VertexId v) const { return v >= 1 && v <= vertex_count_ && active_[v]; }
    std::vector<VertexId> active_vertices() const;

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int index) const { return edges_[index]; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    // Index of the edge with the given (nonzero) id, or -1 if absent.
    int index_of_id(EdgeId id) const;

    std::span<const int> incident(VertexId v) const;

    const std::vector<TerminalPair>& pairs() const { return pairs_; }
    int pair_count() const { return static_cast<int>(pairs_.size()); }

    // Sum of cap*length over finite-capacity edges (INFINITE edges carry zero
    // length and are excluded from all volume accounting).
    double total_mass() const;
    bool has_infinite_edges() const;

    Graph remove_vertices(std::span<const VertexId> vs) const;
    Graph induced_subgraph(std::span<const VertexId> vs) const;
    // Same structure with lengths replaced positionally (edges() order).
    Graph with_lengths(std::span<const double> lengths) const;
    // Same structure with pairs replaced.
    Graph with_pairs(std::vector<TerminalPair> pairs) const;
    // Adds `extra_vertices` fresh active vertices (ids vertex_count+1..) and
    // the given extra edges.
    Graph augmented(int extra_vertices, std::vector<Edge> extra_edges) const;
    // Re-activates an inactive vertex and attaches the given edges.
    Graph revived(VertexId v, std::vector<Edge> aux_edges) const;
    // Same vertex set with the listed edge ids removed.
    Graph minus_edge_ids(std::span<const EdgeId> ids) const;

    // Full input validation (simplicity, ranges, sign constraints); used by
    // parsers and the instance generator. Internal derived graphs skip it.
    void validate_input() const;

private:
    Graph(int vertex_count, std::vector<Edge> edges, std::vector<TerminalPair> pairs,
          std::vector<char> active);
    void build_adjacency();

    int vertex_count_ = 0;
    int active_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<TerminalPair> pairs_;
    std::vector<char> active_;           // 1-based
    std::vector<int> adj_offsets_;       // CSR over vertices, 1-based
    std::vector<int> adj_edge_indices_;  // indices into edges_
};

// Shortest-path distances from a source set under the length function.
struct DistanceField {
    std::vector<VertexId> sources;
    std::vector<double> dist;  // 1-based; +inf = unreachable

    double operator[](VertexId v) const { return dist[v]; }
};

DistanceField multi_source_distances(const Graph& g, std::span<const VertexId> sources);

// Closed ball: active vertices with dist <= t, ascending id.
std::vector<VertexId> ball(const Graph& g, const DistanceField& df, double t);

// Volume of the ball of radius t: initial volume, plus cap*length of edges
// with both endpoints inside, plus cap*(t - dist(inner endpoint)) for each
// crossing edge. INFINITE edges are excluded throughout.
double volume(const Graph& g, const DistanceField& df, double t, double initial);

// One-sided limit of volume as the radius approaches t from below: the ball
// excludes vertices at distance exactly t while crossing contributions use t.
double volume_left_limit(const Graph& g, const DistanceField& df, double t, double initial);

// Total capacity crossing the ball boundary at radius t. The infinite flag is
// set if an INFINITE edge crosses, which no algorithm-chosen radius permits.
Capacity cut_capacity(const Graph& g, const DistanceField& df, double t);

// Edge indices with exactly one endpoint inside the ball at radius t.
std::vector<int> crossing_edge_indices(const Graph& g, const DistanceField& df, double t);

// Max over u,v in `vertices` of the shortest-path distance measured in the
// full graph `g` (weak diameter: paths may leave the set).
double weak_diameter(const Graph& g, std::span<const VertexId> vertices);

// Connected components over active vertices (edges of any capacity connect);
// each component sorted ascending, components ordered by smallest member.
std::vector<std::vector<VertexId>> connected_components(const Graph& g);

// True if s and t are both active and connected.
bool connected(const Graph& g, VertexId s, VertexId t);

// Vertex path from s to t if one exists (BFS, deterministic), else empty.
std::vector<VertexId> find_path(const Graph& g, VertexId s, VertexId t);

// A set of edge ids plus its total capacity.
struct CutSet {
    std::vector<EdgeId> edge_ids;  // sorted ascending, unique, no id 0
    double cost = 0.0;
};

// Builds a CutSet from edge ids of `g`, recomputing the cost; rejects
// INFINITE-capacity and auxiliary (id 0) edges.
CutSet make_cut_set(const Graph& g, std::vector<EdgeId> ids);

std::string format_vertex_set(std::span<const VertexId> vs, size_t limit = 16);

}  // namespace mcut
