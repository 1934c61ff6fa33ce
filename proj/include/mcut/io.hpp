#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcut/graph.hpp"
#include "mcut/tree_decomposition.hpp"

namespace mcut {

// Parsed .mcg instance. Lengths are optional per file: when absent they must
// come from the LP.
struct GraphFile {
    Graph graph;
    bool has_lengths = false;
    std::optional<uint64_t> seed;  // from a "c seed N" comment, if present
};

// .mcg format, 1-indexed, 'c' comment lines allowed anywhere:
//   p mcg <n> <m> <k>
//   m lines: e <u> <v> <capacity> [<length>]   (capacity "inf" = INFINITE)
//   k lines: t <s> <t>
GraphFile parse_graph(const std::string& text);
std::string format_graph(const GraphFile& gf);

// PACE-2017 .td:
//   s td <num_bags> <max_bag_size> <n>
//   b <id> <v>... lines, then bag tree edges "<id1> <id2>"
TreeDecomposition parse_tree_decomposition(const std::string& text);
std::string format_tree_decomposition(const TreeDecomposition& td, int n);

// Cut file: one edge id per line, matching .mcg edge order (1-based).
std::vector<EdgeId> parse_cut(const std::string& text);
std::string format_cut(const CutSet& cut);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace mcut
