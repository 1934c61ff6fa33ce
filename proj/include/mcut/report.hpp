#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcut/generator.hpp"
#include "mcut/graph.hpp"
#include "mcut/io.hpp"
#include "mcut/pipeline.hpp"
#include "mcut/tree_decomposition.hpp"

namespace mcut {

// Deterministic JSON printer: insertion-ordered keys, floats with up to 17
// significant digits, no whitespace variance. Reports produced from the same
// inputs are byte-identical.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(int v);
    JsonWriter& value(int64_t v);
    JsonWriter& value(uint64_t v);
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v);
    // Splices a pre-rendered JSON value verbatim (used to embed standalone
    // per-instance reports unchanged).
    JsonWriter& raw(const std::string& fragment);

    std::string str() const { return out_; }

private:
    void separate();
    std::string out_;
    std::vector<char> needs_comma_;
    bool pending_key_ = false;
};

std::string json_double(double v);

struct SolveOptions {
    LengthsSource lengths = LengthsSource::SolveLp;
    double epsilon = 0.1;
    bool with_gvy = false;
    bool with_exact = false;
    int exact_max_edges = 24;
    bool include_timings = true;
};

struct SolveOutcome {
    std::string json;
    bool verified = true;      // multicut (when applicable), sdd, and cost bounds
    std::string summary;       // one-line human text
    double total_cost = 0.0;
    double fstar = 0.0;
    int width = 0;
};

// Runs the pipeline (plus optional gvy/exact) on one instance and renders the
// run report.
SolveOutcome solve_instance(const std::string& name, const GraphFile& gf,
                            const TreeDecomposition& td, const SolveOptions& options);

struct BenchResult {
    std::string json;  // aggregate: per-instance reports sorted by name + summary
    bool all_verified = true;
    int count = 0;
};

// Runs every instance in the list on `threads` workers (1 = sequential).
// Instances are independent; the aggregate is assembled in name order, so the
// output does not depend on the thread count.
BenchResult run_bench(const std::vector<std::string>& graph_paths, int threads,
                      const SolveOptions& options);

}  // namespace mcut
