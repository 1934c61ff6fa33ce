#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcut/error.hpp"
#include "mcut/generator.hpp"
#include "mcut/graph.hpp"
#include "mcut/io.hpp"
#include "mcut/oracle.hpp"
#include "mcut/pipeline.hpp"
#include "mcut/region_growing.hpp"
#include "mcut/report.hpp"

namespace {

using namespace mcut;

struct Inputs {
    GraphFile gf;
    TreeDecomposition td;
};

Inputs load(const std::string& graph_path, const std::string& td_path) {
    Inputs in;
    in.gf = parse_graph(read_file(graph_path));
    if (!td_path.empty()) {
        in.td = parse_tree_decomposition(read_file(td_path));
        validate_tree_decomposition(in.gf.graph, in.td);
    } else {
        in.td = heuristic_tree_decomposition(in.gf.graph);
    }
    return in;
}

void emit(const std::string& text, const std::string& json_path) {
    if (json_path.empty() || json_path == "-")
        std::cout << text << "\n";
    else
        write_file(json_path, text + "\n");
}

int cmd_solve(const std::string& graph_path, const std::string& td_path, double eps,
              const std::string& lengths, const std::string& json_out) {
    Inputs in = load(graph_path, td_path);
    SolveOptions opt;
    opt.epsilon = eps;
    if (lengths == "given")
        opt.lengths = LengthsSource::Given;
    else if (lengths != "lp")
        throw_input("--lengths must be 'lp' or 'given'");
    SolveOutcome res = solve_instance(std::filesystem::path(graph_path).stem().string(), in.gf,
                                      in.td, opt);
    emit(res.json, json_out);
    if (json_out.empty()) std::cerr << res.summary << "\n";
    return res.verified ? 0 : 1;
}

int cmd_lp(const std::string& graph_path, double eps, const std::string& json_out) {
    GraphFile gf = parse_graph(read_file(graph_path));
    LpResult lp = solve_fractional(gf.graph, eps);
    if (auto bad = verify_primal(gf.graph, lp.solution))
        throw_internal("lp: primal verification failed: " + bad->message);
    if (auto bad = verify_dual(gf.graph, lp.flow))
        throw_internal("lp: dual verification failed: " + bad->message);
    JsonWriter w;
    w.begin_object();
    w.key("epsilon").value(lp.solution.epsilon);
    w.key("fstar").value(lp.solution.cost);
    w.key("flow").value(lp.flow.total);
    w.key("scale").value(lp.flow.scale);
    w.key("x").begin_array();
    for (double v : lp.solution.x) w.value(v);
    w.end_array();
    w.key("dropped_pairs").begin_array();
    for (int i : lp.solution.dropped_pairs) w.value(i + 1);
    w.end_array();
    w.end_object();
    emit(w.str(), json_out);
    return 0;
}

int cmd_gvy(const std::string& graph_path, double eps, const std::string& json_out) {
    GraphFile gf = parse_graph(read_file(graph_path));
    LpResult lp = solve_fractional(gf.graph, eps);
    CutSet cut = gvy_multicut(gf.graph, lp.solution);
    bool ok = !verify_multicut(gf.graph, cut).has_value();
    double bound = 4.0 * std::log(gf.graph.pair_count() + 1.0) * lp.solution.cost;
    bool bound_ok = cut.cost <= bound + 1e-6;
    JsonWriter w;
    w.begin_object();
    w.key("fstar").value(lp.solution.cost);
    w.key("cost").value(cut.cost);
    w.key("bound").value(bound);
    w.key("cut_edges").begin_array();
    for (EdgeId id : cut.edge_ids) w.value(id);
    w.end_array();
    w.key("multicut_ok").value(ok);
    w.key("bound_ok").value(bound_ok);
    w.end_object();
    emit(w.str(), json_out);
    return ok && bound_ok ? 0 : 1;
}

int cmd_exact(const std::string& graph_path, int max_edges, const std::string& json_out) {
    GraphFile gf = parse_graph(read_file(graph_path));
    CutSet cut = brute_force_multicut(gf.graph, max_edges);
    JsonWriter w;
    w.begin_object();
    w.key("opt_cost").value(cut.cost);
    w.key("cut_edges").begin_array();
    for (EdgeId id : cut.edge_ids) w.value(id);
    w.end_array();
    w.end_object();
    emit(w.str(), json_out);
    return 0;
}

int cmd_verify(const std::string& graph_path, const std::string& cut_path, bool sdd) {
    GraphFile gf = parse_graph(read_file(graph_path));
    CutSet cut = make_cut_set(gf.graph, parse_cut(read_file(cut_path)));
    if (auto path = verify_multicut(gf.graph, cut)) {
        std::cout << "violation: pair still connected along path "
                  << format_vertex_set(*path, 64) << "\n";
        return 1;
    }
    std::cout << "multicut ok (cost " << cut.cost << ")\n";
    if (sdd) {
        if (!gf.has_lengths) throw_input("verify --sdd needs edge lengths in the graph file");
        if (auto witness = verify_sdd(gf.graph, cut)) {
            std::cout << "violation: vertices " << witness->u << " and " << witness->v
                      << " share a component at distance " << witness->distance << " >= 1\n";
            return 1;
        }
        std::cout << "sdd ok\n";
    }
    return 0;
}

int cmd_gen(const std::string& out_dir, int count, int n, int k, double prob, int pairs,
            double cap_min, double cap_max, bool with_lengths, uint64_t seed) {
    std::filesystem::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        GeneratorParams p;
        p.n = n;
        p.k = k;
        p.edge_keep_prob = prob;
        p.num_pairs = pairs;
        p.cap_min = cap_min;
        p.cap_max = cap_max;
        p.with_lengths = with_lengths;
        p.seed = seed + static_cast<uint64_t>(i);
        GeneratedInstance inst = generate_partial_ktree(p);
        std::filesystem::path base = std::filesystem::path(out_dir) / inst.stem();
        write_file(base.string() + ".mcg", format_graph(inst.graph_file));
        write_file(base.string() + ".td",
                   format_tree_decomposition(inst.td, inst.graph_file.graph.vertex_count()));
        std::cout << base.string() << ".mcg\n";
    }
    return 0;
}

int cmd_bench(const std::string& dir, int parallel, double eps, const std::string& json_out) {
    if (const char* env = std::getenv("MCUT_THREADS")) parallel = std::atoi(env);
    std::vector<std::string> paths;
    if (std::filesystem::exists(dir))
        for (const auto& entry : std::filesystem::directory_iterator(dir))
            if (entry.path().extension() == ".mcg") paths.push_back(entry.path().string());
    SolveOptions opt;
    opt.epsilon = eps;
    BenchResult res = run_bench(paths, parallel, opt);
    emit(res.json, json_out);
    std::cerr << "bench: " << res.count << " instance(s), "
              << (res.all_verified ? "all verified" : "FAILURES") << "\n";
    return res.all_verified ? 0 : 1;
}

int cmd_gap(const std::string& out_csv, int per_cell, int max_k, double eps, uint64_t seed) {
    std::ostringstream csv;
    csv << "n,m,ktree,width,pairs,seed,fstar,flow,cost,gvy_cost,opt_cost,ratio_cost_fstar,"
           "ln_r1,ln_k1,b136\n";
    for (int ktree = 1; ktree <= max_k; ++ktree) {
        for (int pairs : {2, 4, 8}) {
            for (int rep = 0; rep < per_cell; ++rep) {
                GeneratorParams p;
                p.n = 12 + 6 * ktree;
                p.k = ktree;
                p.edge_keep_prob = 0.8;
                p.num_pairs = pairs;
                p.cap_min = 0.5;
                p.cap_max = 4.0;
                p.seed = seed + static_cast<uint64_t>(ktree * 1000 + pairs * 100 + rep);
                GeneratedInstance inst = generate_partial_ktree(p);
                const Graph& g = inst.graph_file.graph;

                PipelineOptions popt;
                popt.epsilon = eps;
                PipelineRun run = run_pipeline(g, inst.td, popt);
                CutSet gvy;
                if (run.lp) gvy = gvy_multicut(g, run.lp->solution);
                std::optional<double> opt_cost;
                int finite = 0;
                for (const Edge& e : g.edges())
                    if (!e.cap.infinite) ++finite;
                if (finite <= 18)
                    opt_cost = brute_force_multicut(g, 18, &run.result.original_cut).cost;

                double fstar = run.result.fstar;
                double lnr1 = std::log(run.result.wd.width + 1.0);
                csv << g.vertex_count() << ',' << g.edge_count() << ',' << ktree << ','
                    << run.result.wd.width << ',' << g.pair_count() << ',' << p.seed << ','
                    << json_double(fstar) << ',' << json_double(run.lp ? run.lp->flow.total : 0.0)
                    << ',' << json_double(run.result.original_cut.cost) << ','
                    << json_double(gvy.cost) << ','
                    << (opt_cost ? json_double(*opt_cost) : std::string("")) << ','
                    << json_double(fstar > 0 ? run.result.original_cut.cost / fstar : 0.0) << ','
                    << json_double(lnr1) << ','
                    << json_double(std::log(g.pair_count() + 1.0)) << ','
                    << json_double(136.0 * lnr1 * fstar) << "\n";
            }
        }
    }
    if (out_csv.empty() || out_csv == "-")
        std::cout << csv.str();
    else
        write_file(out_csv, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimum multicut and small-diameter decomposition on bounded-treewidth graphs"};
    app.require_subcommand(1);

    std::string graph_path, td_path, cut_path, json_out, lengths = "lp", dir, out_dir, out_csv;
    double eps = 0.1, prob = 0.8, cap_min = 0.5, cap_max = 4.0;
    int max_edges = 24, parallel = 1, count = 1, n = 20, k = 3, pairs = 3, per_cell = 5,
        max_k = 5;
    bool sdd = false, with_lengths = false;
    uint64_t seed = 1;

    auto* solve = app.add_subcommand("solve", "run the decomposition pipeline on one instance");
    solve->add_option("--graph", graph_path)->required();
    solve->add_option("--td", td_path, "tree decomposition (.td); min-fill heuristic if omitted");
    solve->add_option("--eps", eps, "LP accuracy in (0,1)");
    solve->add_option("--lengths", lengths, "lp | given");
    solve->add_option("--json", json_out, "write the run report here ('-' = stdout)");

    auto* lp = app.add_subcommand("lp", "solve the fractional relaxation only");
    lp->add_option("--graph", graph_path)->required();
    lp->add_option("--eps", eps);
    lp->add_option("--json", json_out);

    auto* gvy = app.add_subcommand("gvy", "baseline region-growing multicut");
    gvy->add_option("--graph", graph_path)->required();
    gvy->add_option("--eps", eps);
    gvy->add_option("--json", json_out);

    auto* exact = app.add_subcommand("exact", "exact multicut by branch and bound");
    exact->add_option("--graph", graph_path)->required();
    exact->add_option("--max-edges", max_edges);
    exact->add_option("--json", json_out);

    auto* verify = app.add_subcommand("verify", "check a cut file against an instance");
    verify->add_option("--graph", graph_path)->required();
    verify->add_option("--cut", cut_path)->required();
    verify->add_flag("--sdd", sdd, "also check the small-diameter property");

    auto* gen = app.add_subcommand("gen", "generate partial k-tree instances");
    gen->add_option("--out-dir", out_dir)->required();
    gen->add_option("--count", count);
    gen->add_option("--n", n);
    gen->add_option("--k", k);
    gen->add_option("--prob", prob);
    gen->add_option("--pairs", pairs);
    gen->add_option("--cap-min", cap_min);
    gen->add_option("--cap-max", cap_max);
    gen->add_flag("--with-lengths", with_lengths);
    gen->add_option("--seed", seed);

    auto* bench = app.add_subcommand("bench", "run every instance in a directory");
    bench->add_option("--dir", dir)->required();
    bench->add_option("--parallel", parallel, "worker threads (MCUT_THREADS overrides)");
    bench->add_option("--eps", eps);
    bench->add_option("--json", json_out);

    auto* gap = app.add_subcommand("gap", "sweep a family and tabulate gap curves as CSV");
    gap->add_option("--out", out_csv);
    gap->add_option("--per-cell", per_cell);
    gap->add_option("--max-k", max_k);
    gap->add_option("--eps", eps);
    gap->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // malformed invocation is an input error
    }

    try {
        if (solve->parsed()) return cmd_solve(graph_path, td_path, eps, lengths, json_out);
        if (lp->parsed()) return cmd_lp(graph_path, eps, json_out);
        if (gvy->parsed()) return cmd_gvy(graph_path, eps, json_out);
        if (exact->parsed()) return cmd_exact(graph_path, max_edges, json_out);
        if (verify->parsed()) return cmd_verify(graph_path, cut_path, sdd);
        if (gen->parsed())
            return cmd_gen(out_dir, count, n, k, prob, pairs, cap_min, cap_max, with_lengths,
                           seed);
        if (bench->parsed()) return cmd_bench(dir, parallel, eps, json_out);
        if (gap->parsed()) return cmd_gap(out_csv, per_cell, max_k, eps, seed);
    } catch (const mcut::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == mcut::ErrorKind::Input ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
