#include "mcut/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mcut/error.hpp"

namespace mcut {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

[[noreturn]] void fail(int line_no, const std::string& msg) {
    throw_input("line " + std::to_string(line_no) + ": " + msg);
}

long parse_int(const std::string& tok, int line_no, const char* what) {
    long value = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || p != tok.data() + tok.size())
        fail(line_no, std::string("bad ") + what + " '" + tok + "'");
    return value;
}

double parse_real(const std::string& tok, int line_no, const char* what) {
    try {
        size_t pos = 0;
        double value = std::stod(tok, &pos);
        if (pos != tok.size() || std::isnan(value)) throw std::invalid_argument(tok);
        return value;
    } catch (const std::exception&) {
        fail(line_no, std::string("bad ") + what + " '" + tok + "'");
    }
}

// Shortest representation that round-trips, used for file output.
std::string real_to_string(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

}  // namespace

GraphFile parse_graph(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    long n = 0, m = 0, k = 0;
    bool have_header = false;
    std::vector<Edge> edges;
    std::vector<TerminalPair> pairs;
    bool all_lengths = true;
    std::optional<uint64_t> seed;

    while (std::getline(is, line)) {
        ++line_no;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "c") {
            if (toks.size() == 3 && toks[1] == "seed")
                seed = static_cast<uint64_t>(parse_int(toks[2], line_no, "seed"));
            continue;
        }
        if (toks[0] == "p") {
            if (have_header) fail(line_no, "duplicate problem line");
            if (toks.size() != 5 || toks[1] != "mcg") fail(line_no, "expected 'p mcg <n> <m> <k>'");
            n = parse_int(toks[2], line_no, "vertex count");
            m = parse_int(toks[3], line_no, "edge count");
            k = parse_int(toks[4], line_no, "pair count");
            if (n < 1) fail(line_no, "vertex count must be positive");
            if (m < 0 || k < 0) fail(line_no, "negative count");
            have_header = true;
        } else if (toks[0] == "e") {
            if (!have_header) fail(line_no, "edge before problem line");
            if (static_cast<long>(edges.size()) >= m) fail(line_no, "more edges than declared");
            if (toks.size() != 4 && toks.size() != 5) fail(line_no, "expected 'e u v cap [len]'");
            VertexId u = static_cast<VertexId>(parse_int(toks[1], line_no, "vertex id"));
            VertexId v = static_cast<VertexId>(parse_int(toks[2], line_no, "vertex id"));
            Capacity cap;
            if (toks[3] == "inf" || toks[3] == "INF") {
                cap = Capacity::inf();
            } else {
                double c = parse_real(toks[3], line_no, "capacity");
                if (c < 0) fail(line_no, "negative capacity");
                if (std::isinf(c)) fail(line_no, "use 'inf' for INFINITE capacity");
                cap = Capacity::finite(c);
            }
            double len = 0.0;
            if (toks.size() == 5) {
                len = parse_real(toks[4], line_no, "length");
                if (len < 0) fail(line_no, "negative length");
            } else if (!cap.infinite) {
                all_lengths = false;
            }
            edges.push_back(Edge{static_cast<EdgeId>(edges.size()) + 1, u, v, cap, len});
        } else if (toks[0] == "t") {
            if (!have_header) fail(line_no, "pair before problem line");
            if (static_cast<long>(edges.size()) != m) fail(line_no, "pair line before all edges");
            if (static_cast<long>(pairs.size()) >= k) fail(line_no, "more pairs than declared");
            if (toks.size() != 3) fail(line_no, "expected 't s t'");
            pairs.push_back({static_cast<VertexId>(parse_int(toks[1], line_no, "terminal")),
                             static_cast<VertexId>(parse_int(toks[2], line_no, "terminal"))});
        } else {
            fail(line_no, "unknown line type '" + toks[0] + "'");
        }
    }
    if (!have_header) throw_input("graph file: missing 'p mcg' line");
    if (static_cast<long>(edges.size()) != m)
        throw_input("graph file: declared " + std::to_string(m) + " edges, found " +
                    std::to_string(edges.size()));
    if (static_cast<long>(pairs.size()) != k)
        throw_input("graph file: declared " + std::to_string(k) + " pairs, found " +
                    std::to_string(pairs.size()));

    GraphFile gf;
    gf.graph = Graph(static_cast<int>(n), std::move(edges), std::move(pairs));
    gf.graph.validate_input();
    gf.has_lengths = all_lengths && m > 0;
    if (m == 0) gf.has_lengths = true;  // vacuously complete
    gf.seed = seed;
    return gf;
}

std::string format_graph(const GraphFile& gf) {
    const Graph& g = gf.graph;
    std::ostringstream os;
    if (gf.seed) os << "c seed " << *gf.seed << "\n";
    os << "p mcg " << g.vertex_count() << ' ' << g.edge_count() << ' ' << g.pair_count() << "\n";
    for (const Edge& e : g.edges()) {
        os << "e " << e.u << ' ' << e.v << ' ';
        if (e.cap.infinite)
            os << "inf";
        else
            os << real_to_string(e.cap.value);
        if (gf.has_lengths && !e.cap.infinite) os << ' ' << real_to_string(e.length);
        os << "\n";
    }
    for (const TerminalPair& p : g.pairs()) os << "t " << p.s << ' ' << p.t << "\n";
    return os.str();
}

TreeDecomposition parse_tree_decomposition(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    long num_bags = -1, max_bag = 0, n = 0;
    TreeDecomposition td;
    std::vector<char> bag_seen;

    while (std::getline(is, line)) {
        ++line_no;
        auto toks = tokenize(line);
        if (toks.empty() || toks[0] == "c") continue;
        if (toks[0] == "s") {
            if (num_bags >= 0) fail(line_no, "duplicate solution line");
            if (toks.size() != 5 || toks[1] != "td")
                fail(line_no, "expected 's td <num_bags> <max_bag_size> <n>'");
            num_bags = parse_int(toks[2], line_no, "bag count");
            max_bag = parse_int(toks[3], line_no, "max bag size");
            n = parse_int(toks[4], line_no, "vertex count");
            if (num_bags < 1) fail(line_no, "need at least one bag");
            td.bags.assign(num_bags, {});
            bag_seen.assign(num_bags + 1, 0);
        } else if (toks[0] == "b") {
            if (num_bags < 0) fail(line_no, "bag before solution line");
            if (toks.size() < 2) fail(line_no, "expected 'b <id> <v>...'");
            long id = parse_int(toks[1], line_no, "bag id");
            if (id < 1 || id > num_bags) fail(line_no, "bag id out of range");
            if (bag_seen[id]) fail(line_no, "duplicate bag " + std::to_string(id));
            bag_seen[id] = 1;
            for (size_t i = 2; i < toks.size(); ++i) {
                long v = parse_int(toks[i], line_no, "vertex id");
                if (v < 1 || v > n) fail(line_no, "bag vertex out of range");
                td.bags[id - 1].push_back(static_cast<VertexId>(v));
            }
            std::sort(td.bags[id - 1].begin(), td.bags[id - 1].end());
            td.bags[id - 1].erase(std::unique(td.bags[id - 1].begin(), td.bags[id - 1].end()),
                                  td.bags[id - 1].end());
            if (static_cast<long>(td.bags[id - 1].size()) > max_bag)
                fail(line_no, "bag larger than declared max size");
        } else {
            if (num_bags < 0) fail(line_no, "tree edge before solution line");
            if (toks.size() != 2) fail(line_no, "expected '<bag id> <bag id>'");
            long a = parse_int(toks[0], line_no, "bag id");
            long b = parse_int(toks[1], line_no, "bag id");
            if (a < 1 || a > num_bags || b < 1 || b > num_bags)
                fail(line_no, "tree edge bag id out of range");
            td.tree_edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    }
    if (num_bags < 0) throw_input("td file: missing 's td' line");
    for (long i = 1; i <= num_bags; ++i)
        if (!bag_seen[i]) throw_input("td file: bag " + std::to_string(i) + " never declared");
    return td;
}

std::string format_tree_decomposition(const TreeDecomposition& td, int n) {
    std::ostringstream os;
    size_t max_bag = 0;
    for (const auto& b : td.bags) max_bag = std::max(max_bag, b.size());
    os << "s td " << td.bag_count() << ' ' << max_bag << ' ' << n << "\n";
    for (int i = 0; i < td.bag_count(); ++i) {
        os << "b " << i + 1;
        for (VertexId v : td.bags[i]) os << ' ' << v;
        os << "\n";
    }
    for (auto [a, b] : td.tree_edges) os << a << ' ' << b << "\n";
    return os.str();
}

std::vector<EdgeId> parse_cut(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    std::vector<EdgeId> ids;
    while (std::getline(is, line)) {
        ++line_no;
        auto toks = tokenize(line);
        if (toks.empty() || toks[0] == "c") continue;
        if (toks.size() != 1) fail(line_no, "expected one edge id per line");
        long id = parse_int(toks[0], line_no, "edge id");
        if (id < 1) fail(line_no, "edge id must be positive");
        ids.push_back(static_cast<EdgeId>(id));
    }
    return ids;
}

std::string format_cut(const CutSet& cut) {
    std::ostringstream os;
    for (EdgeId id : cut.edge_ids) os << id << "\n";
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw_input("cannot open file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw_input("cannot write file: " + path);
    f << content;
}

}  // namespace mcut
