// cosep: generate planted instances, run co-separable selection, benchmark.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosep/bench.hpp"
#include "cosep/docs_prep.hpp"
#include "cosep/error.hpp"
#include "cosep/metrics.hpp"
#include "cosep/mmio.hpp"

namespace fs = std::filesystem;
using namespace cosep;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct SolverFlags {
    std::optional<double> lambda;
    double lambda_factor = 1e-6;
    double delta = 1e-6;
    int max_iter = 1000;
    int outer_max_iter = 50;
    std::string postprocess = "diag";
    std::string init = "zero";
    bool normalize = false;
    int ahals_iters = 1000;
};

void add_solver_flags(CLI::App* app, SolverFlags& f)
{
    app->add_option("--lambda", f.lambda, "Trace penalty (absolute); default is lambda-factor * sigma_max^2 / n");
    app->add_option("--lambda-factor", f.lambda_factor, "Relative trace penalty used when --lambda is unset")
        ->capture_default_str();
    app->add_option("--delta", f.delta, "Stopping tolerance of the alternation")->capture_default_str();
    app->add_option("--max-iter", f.max_iter, "Fast-gradient iterations per subproblem")->capture_default_str();
    app->add_option("--outer-max-iter", f.outer_max_iter, "Alternation passes")->capture_default_str();
    app->add_option("--postprocess", f.postprocess, "Index extraction from Y")
        ->check(CLI::IsMember({"diag", "spa"}))
        ->capture_default_str();
    app->add_option("--init", f.init, "Fast-gradient starting point")
        ->check(CLI::IsMember({"zero", "identity"}))
        ->capture_default_str();
    app->add_flag("--normalize", f.normalize, "Scale columns to unit l1 norm inside each fast-gradient solve");
    app->add_option("--ahals-iters", f.ahals_iters, "A-HALS outer iterations")->capture_default_str();
}

SolveParams solve_params(const SolverFlags& f, Index r1, Index r2)
{
    SolveParams p;
    p.r1 = r1;
    p.r2 = r2;
    p.cos.fgm.lambda = f.lambda;
    p.cos.fgm.lambda_factor = f.lambda_factor;
    p.cos.fgm.max_iter = f.max_iter;
    p.cos.fgm.init = f.init == "identity" ? FgmInit::Identity : FgmInit::Zero;
    p.cos.fgm.normalize_columns = f.normalize;
    p.cos.delta = f.delta;
    p.cos.outer_max_iter = f.outer_max_iter;
    p.cos.postprocess = f.postprocess == "spa" ? Postprocess::SpaSort : Postprocess::Diag;
    p.ahals_iters = f.ahals_iters;
    return p;
}

std::vector<double> parse_reals(const std::string& list)
{
    std::vector<double> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw InvalidInputError("invalid number '" + tok + "'");
        }
        if (used != tok.size()) throw InvalidInputError("invalid number '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

struct GridFlags {
    Index m = 100;
    Index n = 100;
    Index r1 = 10;
    Index r2 = 3;
    std::string eps_grid = "paper";
    std::string eps_list;
    int trials = 25;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
};

void add_grid_flags(CLI::App* app, GridFlags& g)
{
    app->add_option("--m", g.m, "Rows")->capture_default_str();
    app->add_option("--n", g.n, "Columns")->capture_default_str();
    app->add_option("--r1", g.r1, "Planted rows")->capture_default_str();
    app->add_option("--r2", g.r2, "Planted columns")->capture_default_str();
    app->add_option("--eps-grid", g.eps_grid, "'paper' (20 levels, 1e-7..1e-1) or 'list' (use --eps)")
        ->check(CLI::IsMember({"paper", "list"}))
        ->capture_default_str();
    app->add_option("--eps", g.eps_list, "Comma-separated noise levels for --eps-grid list");
    app->add_option("--trials", g.trials, "Instances per noise level")->capture_default_str();
    app->add_option("--seed", g.seed, "Base seed")->capture_default_str();
    app->add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();
}

ExperimentConfig experiment_config(const GridFlags& g)
{
    ExperimentConfig c;
    c.m = g.m;
    c.n = g.n;
    c.r1 = g.r1;
    c.r2 = g.r2;
    c.trials_per_level = g.trials;
    c.base_seed = g.seed;
    if (g.eps_grid == "paper") {
        c.epsilons = noise_grid();
    } else {
        c.epsilons = parse_reals(g.eps_list);
    }
    return c;
}

int thread_count(int flag)
{
    if (const char* env = std::getenv("COSEP_THREADS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            throw InvalidInputError(std::string("COSEP_THREADS is not an integer: ") + env);
        }
    }
    return std::max(1, flag);
}

nlohmann::ordered_json index_json(const IndexSet& s)
{
    return nlohmann::ordered_json(s.indices());
}

int cmd_synth(const GridFlags& g)
{
    const ExperimentConfig c = experiment_config(g);
    const auto paths = write_instances(c, g.out_dir);
    std::cout << "wrote " << paths.size() << " instances under " << g.out_dir << '\n';
    return kExitOk;
}

struct SolveFlags {
    std::string matrix;
    std::string method = "cos_fgm";
    Index r1 = 10;
    Index r2 = 3;
    std::string out;
    std::string factors_dir;
    std::string doc_labels;
    std::string word_labels;
    std::uint64_t seed = 0;
};

int cmd_solve(const SolveFlags& s, const SolverFlags& sf)
{
    const auto method = parse_method(s.method);
    if (!method) throw InvalidInputError("unknown method '" + s.method + "'");
    const Matrix M = read_matrix_market(fs::path(s.matrix));
    require_nonnegative(M, s.matrix.c_str());
    const auto truth = find_sidecar(s.matrix);
    if (truth && (truth->m != M.rows() || truth->n != M.cols())) {
        throw InvalidInputError("sidecar shape does not match " + s.matrix);
    }

    SolveParams params = solve_params(sf, s.r1, s.r2);
    params.seed = s.seed;
    const MethodResult res = run_method(M, *method, params, truth ? &*truth : nullptr);

    nlohmann::ordered_json j;
    j["matrix"] = s.matrix;
    j["method"] = method_name(*method);
    j["m"] = M.rows();
    j["n"] = M.cols();
    j["r1"] = s.r1;
    j["r2"] = s.r2;
    if (res.k1) j["k1"] = index_json(*res.k1);
    if (res.k2) j["k2"] = index_json(*res.k2);
    j["rel_approx"] = res.rel_approx;
    if (res.accuracy) j["accuracy"] = *res.accuracy;
    if (*method == Method::CosFgm) {
        j["outer_iterations"] = res.outer_iterations;
        j["converged"] = res.converged;
    }
    j["seconds"] = res.seconds;

    if (!s.doc_labels.empty() || !s.word_labels.empty()) {
        auto& cl = j["clustering"];
        if (!s.doc_labels.empty() && res.P1.size() > 0) {
            const auto labels = read_labels(s.doc_labels);
            if (static_cast<Index>(labels.size()) != M.rows()) throw InvalidInputError("document label count mismatch");
            const auto Q = hard_cluster(res.P1);
            cl["rows"] = clustering_accuracy(Q, ClusterAssignment::from_labels(labels, Q.clusters()));
        }
        if (!s.word_labels.empty() && res.P2.size() > 0) {
            const auto labels = read_labels(s.word_labels);
            if (static_cast<Index>(labels.size()) != M.cols()) throw InvalidInputError("word label count mismatch");
            const auto Q = hard_cluster(res.P2.transpose());
            cl["cols"] = clustering_accuracy(Q, ClusterAssignment::from_labels(labels, Q.clusters()));
        }
    }

    if (!s.factors_dir.empty()) {
        fs::create_directories(s.factors_dir);
        if (res.P1.size() > 0) write_matrix_market(fs::path(s.factors_dir) / "P1.mtx", res.P1);
        if (res.S.size() > 0) write_matrix_market(fs::path(s.factors_dir) / "S.mtx", res.S);
        if (res.P2.size() > 0) write_matrix_market(fs::path(s.factors_dir) / "P2.mtx", res.P2);
    }

    const std::string text = j.dump(2) + "\n";
    if (s.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(s.out);
        if (!out) throw Error("cannot write " + s.out);
        out << text;
    }
    return kExitOk;
}

int cmd_bench(const GridFlags& g, const SolverFlags& sf, const std::string& baselines, int threads, bool no_timing)
{
    ExperimentConfig c = experiment_config(g);
    c.solver = solve_params(sf, g.r1, g.r2);
    c.record_time = !no_timing;
    std::stringstream ss(baselines);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const auto m = parse_method(tok);
        if (!m || *m == Method::CosFgm) throw InvalidInputError("unknown baseline '" + tok + "'");
        c.baselines.push_back(*m);
    }
    c.validate();

    const ExperimentReport report = run_experiment(c, thread_count(threads));
    fs::create_directories(g.out_dir);
    const fs::path csv = fs::path(g.out_dir) / "results.csv";
    const fs::path summary = fs::path(g.out_dir) / "summary.json";
    {
        std::ofstream out(csv);
        if (!out) throw Error("cannot write " + csv.string());
        write_csv(out, report.records);
    }
    {
        std::ofstream out(summary);
        if (!out) throw Error("cannot write " + summary.string());
        write_summary_json(out, c, report);
    }
    for (const auto& s : report.summary) {
        std::cout << "eps=" << format_real(s.epsilon) << ' ' << method_name(s.method);
        if (s.mean_accuracy) std::cout << " accuracy=" << *s.mean_accuracy;
        if (s.mean_rel_approx) std::cout << " rel_approx=" << *s.mean_rel_approx;
        if (s.failures > 0) std::cout << " failures=" << s.failures;
        std::cout << '\n';
    }
    std::cout << "wrote " << csv.string() << " and " << summary.string() << '\n';
    return report.has_failures() ? kExitPartial : kExitOk;
}

struct PrepFlags {
    std::string matrix;
    std::string labels;
    Index top_words = 1000;
    std::string row_weights;
    std::string col_weights;
    std::string out_dir = "corpus";
};

int cmd_prep(const PrepFlags& p)
{
    const Matrix M0 = read_matrix_market(fs::path(p.matrix));
    const auto labels = read_labels(p.labels);
    LabeledCorpus corpus = select_top_words(M0, labels, p.top_words);
    if (!p.row_weights.empty()) {
        const auto w = read_labels(p.row_weights);
        if (static_cast<Index>(w.size()) != M0.rows()) throw InvalidInputError("row weight count mismatch");
        std::vector<Index> kept;
        for (Index i : corpus.kept_docs) kept.push_back(w[static_cast<std::size_t>(i)]);
        corpus.M = scale_by_cluster_size(corpus.M, kept, Axis::Rows);
    }
    if (!p.col_weights.empty()) {
        const auto w = read_labels(p.col_weights);
        if (static_cast<Index>(w.size()) != M0.cols()) throw InvalidInputError("column weight count mismatch");
        std::vector<Index> kept;
        for (Index j : corpus.kept_words) kept.push_back(w[static_cast<std::size_t>(j)]);
        corpus.M = scale_by_cluster_size(corpus.M, kept, Axis::Cols);
    }
    fs::create_directories(p.out_dir);
    const fs::path dir(p.out_dir);
    write_matrix_market(dir / "corpus.mtx", corpus.M);
    write_labels(dir / "doc_labels.txt", corpus.doc_labels);
    write_labels(dir / "word_labels.txt", corpus.word_labels);
    std::cout << "kept " << corpus.M.rows() << " documents x " << corpus.M.cols() << " words, " << corpus.r
              << " classes\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Co-separable NMF: planted instances, row/column co-selection, benchmarks"};
    app.require_subcommand(1);

    GridFlags synth_grid;
    auto* synth = app.add_subcommand("synth", "Write planted instances (MatrixMarket + JSON sidecar)");
    add_grid_flags(synth, synth_grid);

    SolveFlags solve_flags;
    SolverFlags solve_solver;
    auto* solve = app.add_subcommand("solve", "Run one method on a matrix file");
    solve->add_option("matrix", solve_flags.matrix, "MatrixMarket file")->required();
    solve->add_option("--method", solve_flags.method, "cos_fgm | spa_plus | spac | spar | ahals")
        ->check(CLI::IsMember({"cos_fgm", "spa_plus", "spac", "spar", "ahals"}))
        ->capture_default_str();
    solve->add_option("--r1", solve_flags.r1, "Rows to select")->capture_default_str();
    solve->add_option("--r2", solve_flags.r2, "Columns to select (rank for ahals)")->capture_default_str();
    solve->add_option("--out", solve_flags.out, "Result JSON path (default: stdout)");
    solve->add_option("--factors-dir", solve_flags.factors_dir, "Write fitted factors here");
    solve->add_option("--doc-labels", solve_flags.doc_labels, "Row ground-truth labels, one per line");
    solve->add_option("--word-labels", solve_flags.word_labels, "Column ground-truth labels, one per line");
    solve->add_option("--seed", solve_flags.seed, "Seed for randomized starts")->capture_default_str();
    add_solver_flags(solve, solve_solver);

    GridFlags bench_grid;
    SolverFlags bench_solver;
    std::string baselines;
    int threads = 1;
    bool no_timing = false;
    auto* bench = app.add_subcommand("bench", "Noise sweep: results.csv + summary.json");
    add_grid_flags(bench, bench_grid);
    add_solver_flags(bench, bench_solver);
    bench->add_option("--baselines", baselines, "Comma-separated subset of spa_plus,spac,spar,ahals");
    bench->add_option("--threads", threads, "Worker threads (COSEP_THREADS overrides)")->capture_default_str();
    bench->add_flag("--no-timing", no_timing, "Leave the seconds column empty (reproducible output)");

    PrepFlags prep_flags;
    auto* prep = app.add_subcommand("prep", "Trim a document-word matrix to its top words and label the words");
    prep->add_option("--matrix", prep_flags.matrix, "Document-word MatrixMarket file")->required();
    prep->add_option("--labels", prep_flags.labels, "Document labels, one per line")->required();
    prep->add_option("--top-words", prep_flags.top_words, "Words to keep")->capture_default_str();
    prep->add_option("--row-weights", prep_flags.row_weights, "Cluster sizes of the documents (sqrt scaling)");
    prep->add_option("--col-weights", prep_flags.col_weights, "Cluster sizes of the words (sqrt scaling)");
    prep->add_option("--out-dir", prep_flags.out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*synth) return cmd_synth(synth_grid);
        if (*solve) return cmd_solve(solve_flags, solve_solver);
        if (*bench) return cmd_bench(bench_grid, bench_solver, baselines, threads, no_timing);
        if (*prep) return cmd_prep(prep_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
