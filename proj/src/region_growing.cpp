#include "mcut/region_growing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcut/error.hpp"

namespace mcut {

RadiusChoice choose_radius(const Graph& g, std::span<const VertexId> sources, double a, double b,
                           double initial_volume) {
    DistanceField df = multi_source_distances(g, sources);
    return choose_radius(g, df, a, b, initial_volume);
}

RadiusChoice choose_radius(const Graph& g, const DistanceField& df, double a, double b,
                           double initial_volume) {
    if (!(a >= 0.0 && a < b)) throw_input("choose_radius: need 0 <= a < b");
    if (!(initial_volume > 0.0)) throw_input("choose_radius: initial volume must be positive");

    double vol_a = volume(g, df, a, initial_volume);
    double vol_b = volume_left_limit(g, df, b, initial_volume);
    double coef = std::log(vol_b / vol_a) / (b - a);

    // Interval starts: a plus every distinct distance value in (a, b).
    std::vector<double> starts{a};
    for (VertexId v = 1; v <= g.vertex_count(); ++v) {
        if (!g.is_active(v)) continue;
        double d = df.dist[v];
        if (d > a && d < b) starts.push_back(d);
    }
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

    for (size_t i = 0; i < starts.size(); ++i) {
        double p = starts[i];
        double q = i + 1 < starts.size() ? starts[i + 1] : b;
        double cut_p = cut_capacity(g, df, p).value;  // INFINITE never crosses: length 0
        double vol_p = volume(g, df, p, initial_volume);
        // Within [p, q): C(t) = cut_p, Vol(t) = vol_p + cut_p * (t - p).
        auto accept = [&](double t) {
            RadiusChoice rc;
            rc.t = t;
            Capacity c = cut_capacity(g, df, t);
            if (c.infinite) throw_internal("choose_radius: INFINITE edge crosses chosen ball");
            rc.cut = c.value;
            rc.vol = volume(g, df, t, initial_volume);
            rc.bound_coefficient = coef;
            return rc;
        };
        if (cut_p <= coef * vol_p) return accept(p);
        if (cut_p <= 0.0 || coef <= 0.0) continue;  // no growth can help in this interval
        // Smallest t with cut_p <= coef * (vol_p + cut_p (t - p)).
        double t = p + (cut_p / coef - vol_p) / cut_p;
        if (t < q && t < b) return accept(std::max(t, p));
    }

    std::ostringstream os;
    os << "choose_radius: no feasible radius in [" << a << "," << b << "); sources "
       << format_vertex_set(df.sources) << ", initial volume " << initial_volume << ", Vol(a)="
       << vol_a << ", Vol(b-)=" << vol_b << ", coefficient=" << coef;
    throw_internal(os.str());
}

CutSet gvy_multicut(const Graph& g, const FractionalSolution& fs) {
    if (auto bad = verify_primal(g, fs))
        throw_input("gvy_multicut: infeasible fractional solution: " + bad->message);

    Graph work = g.with_lengths(fs.x);
    int k = g.pair_count();
    double fstar = fs.cost;
    // All-zero mass still admits zero-capacity cuts; any positive initial
    // volume makes the certificate demand a zero-capacity boundary.
    double initial = fstar > 0.0 ? fstar / std::max(k, 1) : 1.0;

    std::vector<EdgeId> cut_ids;
    for (int i = 0; i < k; ++i) {
        TerminalPair p = g.pairs()[i];
        if (!connected(work, p.s, p.t)) continue;
        VertexId src[1] = {p.s};
        DistanceField df = multi_source_distances(work, src);
        RadiusChoice rc = choose_radius(work, df, 0.0, 0.5, initial);
        std::vector<VertexId> region = ball(work, df, rc.t);
        // The ball has diameter < 1 under fs.x, so it cannot contain a whole
        // terminal pair.
        for (const TerminalPair& q : g.pairs()) {
            bool s_in = std::binary_search(region.begin(), region.end(), q.s);
            bool t_in = std::binary_search(region.begin(), region.end(), q.t);
            if (s_in && t_in)
                throw_internal("gvy_multicut: ball of radius " + std::to_string(rc.t) +
                               " contains both terminals of a pair");
        }
        for (int ei : crossing_edge_indices(work, df, rc.t)) {
            const Edge& e = work.edge(ei);
            if (e.cap.infinite) throw_internal("gvy_multicut: INFINITE edge crosses ball");
            cut_ids.push_back(e.id);
        }
        work = work.remove_vertices(region);
    }
    return make_cut_set(g, std::move(cut_ids));
}

}  // namespace mcut
