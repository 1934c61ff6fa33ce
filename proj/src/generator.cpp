#include "mcut/generator.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mcut/error.hpp"
#include "mcut/rng.hpp"

namespace mcut {

std::string GeneratedInstance::stem() const {
    std::ostringstream os;
    os << "pk_n" << params.n << "_k" << params.k << "_p"
       << static_cast<int>(params.edge_keep_prob * 100 + 0.5) << "_q" << params.num_pairs << "_s"
       << params.seed;
    return os.str();
}

GeneratedInstance generate_partial_ktree(const GeneratorParams& p) {
    if (p.n < p.k + 1) throw_input("generator: need n >= k+1");
    if (p.k < 1) throw_input("generator: need k >= 1");
    if (p.edge_keep_prob < 0.0 || p.edge_keep_prob > 1.0)
        throw_input("generator: edge_keep_prob must lie in [0,1]");
    if (p.cap_min < 0.0 || p.cap_max < p.cap_min) throw_input("generator: bad capacity range");
    if (p.num_pairs < 0) throw_input("generator: negative pair count");

    Rng rng(p.seed);

    // k-tree: seed clique {1..k+1}, then attach each new vertex to a random
    // existing k-clique. Bags record the construction, giving a width-k tree
    // decomposition for free.
    std::vector<std::pair<VertexId, VertexId>> ktree_edges;
    std::vector<std::vector<VertexId>> cliques;    // candidate k-cliques
    std::vector<int> clique_home_bag;              // bag that contains the clique
    TreeDecomposition td;

    std::vector<VertexId> seed_bag;
    for (VertexId v = 1; v <= p.k + 1; ++v) seed_bag.push_back(v);
    td.bags.push_back(seed_bag);
    for (VertexId u = 1; u <= p.k + 1; ++u)
        for (VertexId v = u + 1; v <= p.k + 1; ++v) ktree_edges.emplace_back(u, v);
    for (VertexId skip = 1; skip <= p.k + 1; ++skip) {
        std::vector<VertexId> c;
        for (VertexId v = 1; v <= p.k + 1; ++v)
            if (v != skip) c.push_back(v);
        cliques.push_back(c);
        clique_home_bag.push_back(1);
    }

    for (VertexId v = p.k + 2; v <= p.n; ++v) {
        size_t pick = static_cast<size_t>(rng.below(cliques.size()));
        const std::vector<VertexId> base = cliques[pick];
        for (VertexId u : base) ktree_edges.emplace_back(std::min(u, v), std::max(u, v));
        std::vector<VertexId> bag = base;
        bag.push_back(v);
        std::sort(bag.begin(), bag.end());
        td.bags.push_back(bag);
        int bag_id = td.bag_count();
        td.tree_edges.emplace_back(clique_home_bag[pick], bag_id);
        for (size_t drop = 0; drop < base.size(); ++drop) {
            std::vector<VertexId> c;
            for (size_t j = 0; j < base.size(); ++j)
                if (j != drop) c.push_back(base[j]);
            c.push_back(v);
            std::sort(c.begin(), c.end());
            cliques.push_back(c);
            clique_home_bag.push_back(bag_id);
        }
        // The base clique itself stays available; new vertex cliques point at
        // the new bag so the occurrence subtrees stay connected.
        cliques.push_back(base);
        clique_home_bag.push_back(bag_id);
    }

    std::sort(ktree_edges.begin(), ktree_edges.end());
    ktree_edges.erase(std::unique(ktree_edges.begin(), ktree_edges.end()), ktree_edges.end());

    std::vector<Edge> edges;
    for (auto [u, v] : ktree_edges) {
        if (!rng.chance(p.edge_keep_prob)) continue;
        double cap = p.cap_min == p.cap_max ? p.cap_min : rng.uniform(p.cap_min, p.cap_max);
        double len = p.with_lengths ? rng.uniform() : 0.0;
        edges.push_back(Edge{static_cast<EdgeId>(edges.size()) + 1, u, v, Capacity::finite(cap),
                             len});
    }

    std::vector<TerminalPair> pairs;
    std::set<std::pair<VertexId, VertexId>> used;
    int attempts = 0;
    while (static_cast<int>(pairs.size()) < p.num_pairs && attempts < p.num_pairs * 50) {
        ++attempts;
        VertexId s = rng.range(1, p.n);
        VertexId t = rng.range(1, p.n);
        if (s == t) continue;
        auto key = std::minmax(s, t);
        if (!used.insert(key).second) continue;
        pairs.push_back({s, t});
    }

    GeneratedInstance inst;
    inst.params = p;
    inst.graph_file.graph = Graph(p.n, std::move(edges), std::move(pairs));
    inst.graph_file.graph.validate_input();
    inst.graph_file.has_lengths = p.with_lengths;
    inst.graph_file.seed = p.seed;
    inst.td = std::move(td);
    validate_tree_decomposition(inst.graph_file.graph, inst.td);
    return inst;
}

}  // namespace mcut
