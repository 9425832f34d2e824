#include "cosep/bench.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "cosep/error.hpp"
#include "cosep/metrics.hpp"
#include "cosep/spa.hpp"

namespace cosep {

std::string_view method_name(Method m)
{
    switch (m) {
    case Method::CosFgm: return "cos_fgm";
    case Method::SpaPlus: return "spa_plus";
    case Method::Spac: return "spac";
    case Method::Spar: return "spar";
    case Method::Ahals: return "ahals";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name)
{
    for (Method m : {Method::CosFgm, Method::SpaPlus, Method::Spac, Method::Spar, Method::Ahals}) {
        if (method_name(m) == name) return m;
    }
    return std::nullopt;
}

std::string format_real(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

std::optional<double> method_accuracy(const MethodResult& r, const GroundTruth& truth)
{
    if (r.k1 && r.k2) return index_accuracy(*r.k1, *r.k2, truth.k1_star, truth.k2_star);
    if (r.k1) return static_cast<double>(intersection_size(*r.k1, truth.k1_star)) / static_cast<double>(truth.k1_star.size());
    if (r.k2) return static_cast<double>(intersection_size(*r.k2, truth.k2_star)) / static_cast<double>(truth.k2_star.size());
    return std::nullopt;
}

MethodResult run_method(const Matrix& M, Method method, const SolveParams& params, const GroundTruth* truth)
{
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    MethodResult out;
    out.method = method;
    const double norm = M.norm();

    switch (method) {
    case Method::CosFgm: {
        CosSelectParams p = params.cos;
        p.r1 = params.r1;
        p.r2 = params.r2;
        const CosSelection sel = cos_fgm(M, p);
        out.k1 = sel.k1;
        out.k2 = sel.k2;
        out.outer_iterations = sel.outer_iterations;
        out.converged = sel.converged;
        break;
    }
    case Method::SpaPlus: {
        auto sel = spa_plus(M, params.r1, params.r2);
        if (sel.k1.size() < params.r1 || sel.k2.size() < params.r2) {
            throw DegenerateSelectionError("spa_plus stopped early: matrix rank below the requested size",
                                           std::move(sel.k2));
        }
        out.k1 = std::move(sel.k1);
        out.k2 = std::move(sel.k2);
        break;
    }
    case Method::Spac:
        out.k2 = spac(M, params.r2);
        break;
    case Method::Spar:
        out.k1 = spar(M, params.r1);
        break;
    case Method::Ahals: {
        NmfResult nmf = ahals_nmf(M, std::min(params.r2, std::min(M.rows(), M.cols())), params.ahals_iters, params.seed);
        out.P1 = std::move(nmf.W);
        out.P2 = std::move(nmf.H);
        out.rel_approx = 1.0 - nmf.rel_residual;
        break;
    }
    }

    if (out.k1 && out.k2) {
        CosFactors f = compute_factors(M, *out.k1, *out.k2, params.factors);
        out.rel_approx = 1.0 - f.rel_residual;
        out.P1 = std::move(f.P1);
        out.S = std::move(f.S);
        out.P2 = std::move(f.P2);
    } else if (out.k2) {
        out.P2 = fit_col_representation(M, *out.k2);
        out.rel_approx = relative_approx_generic(M, submatrix(M, kAll, *out.k2) * out.P2);
    } else if (out.k1) {
        out.P1 = fit_row_representation(M, *out.k1);
        out.rel_approx = relative_approx_generic(M, out.P1 * submatrix(M, *out.k1, kAll));
    }
    (void)norm;
    out.seconds = std::chrono::duration<double>(clock::now() - start).count();
    if (truth) out.accuracy = method_accuracy(out, *truth);
    return out;
}

void ExperimentConfig::validate() const
{
    if (m < 2 || n < 2) throw InvalidInputError("matrix dimensions must be at least 2");
    if (r1 < 1 || r1 >= m) throw InvalidInputError("r1 must satisfy 1 <= r1 < m");
    if (r2 < 1 || r2 >= n) throw InvalidInputError("r2 must satisfy 1 <= r2 < n");
    if (trials_per_level < 1) throw InvalidInputError("trials per level must be >= 1");
    if (epsilons.empty()) throw InvalidInputError("at least one noise level is required");
    for (double e : epsilons) {
        if (!(e >= 0.0) || !std::isfinite(e)) throw InvalidInputError("noise levels must be finite and >= 0");
    }
    if (!(solver.cos.delta > 0.0)) throw InvalidInputError("delta must be positive");
    if (solver.cos.fgm.lambda && !(*solver.cos.fgm.lambda > 0.0)) throw InvalidInputError("lambda must be positive");
    if (!(solver.cos.fgm.lambda_factor > 0.0)) throw InvalidInputError("lambda factor must be positive");
    if (solver.cos.fgm.max_iter < 1) throw InvalidInputError("max iterations must be >= 1");
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t epsilon_index, int trial)
{
    return base_seed + 1000u * static_cast<std::uint64_t>(epsilon_index) + static_cast<std::uint64_t>(trial);
}

bool ExperimentReport::has_failures() const
{
    for (const auto& r : records) {
        if (!r.error.empty()) return true;
    }
    return false;
}

std::vector<LevelSummary> summarize(const std::vector<TrialRecord>& records)
{
    struct Acc {
        LevelSummary s;
        double acc = 0.0, rel = 0.0, sec = 0.0;
        int n_acc = 0, n_rel = 0, n_sec = 0;
    };
    std::vector<Acc> levels;
    std::map<std::pair<std::size_t, int>, std::size_t> slot;
    for (const auto& r : records) {
        const auto key = std::make_pair(r.epsilon_index, static_cast<int>(r.method));
        auto it = slot.find(key);
        if (it == slot.end()) {
            it = slot.emplace(key, levels.size()).first;
            Acc a;
            a.s.epsilon = r.epsilon;
            a.s.method = r.method;
            levels.push_back(a);
        }
        Acc& a = levels[it->second];
        ++a.s.trials;
        if (!r.error.empty()) {
            ++a.s.failures;
            continue;
        }
        if (r.accuracy) {
            a.acc += *r.accuracy;
            ++a.n_acc;
        }
        if (r.rel_approx) {
            a.rel += *r.rel_approx;
            ++a.n_rel;
        }
        if (r.seconds) {
            a.sec += *r.seconds;
            ++a.n_sec;
        }
    }
    std::vector<LevelSummary> out;
    out.reserve(levels.size());
    for (auto& a : levels) {
        if (a.n_acc > 0) a.s.mean_accuracy = a.acc / a.n_acc;
        if (a.n_rel > 0) a.s.mean_rel_approx = a.rel / a.n_rel;
        if (a.n_sec > 0) a.s.mean_seconds = a.sec / a.n_sec;
        out.push_back(a.s);
    }
    return out;
}

namespace {

std::vector<Method> methods_of(const ExperimentConfig& config)
{
    std::vector<Method> methods{Method::CosFgm};
    for (Method b : config.baselines) {
        if (b != Method::CosFgm && std::find(methods.begin(), methods.end(), b) == methods.end()) methods.push_back(b);
    }
    return methods;
}

std::vector<TrialRecord> run_trial(const ExperimentConfig& config, const std::vector<Method>& methods,
                                   std::size_t eps_index, int trial)
{
    const double eps = config.epsilons[eps_index];
    const std::uint64_t seed = trial_seed(config.base_seed, eps_index, trial);
    std::vector<TrialRecord> out;

    auto blank = [&](Method m) {
        TrialRecord r;
        r.epsilon_index = eps_index;
        r.epsilon = eps;
        r.trial = trial;
        r.method = m;
        return r;
    };

    std::optional<SyntheticInstance> inst;
    std::string gen_error;
    try {
        inst = gen_cosep(config.m, config.n, config.r1, config.r2, eps, seed);
    } catch (const std::exception& e) {
        gen_error = std::string("instance generation failed: ") + e.what();
    }

    SolveParams params = config.solver;
    params.r1 = config.r1;
    params.r2 = config.r2;
    params.seed = seed;
    for (Method m : methods) {
        TrialRecord r = blank(m);
        if (!inst) {
            r.error = gen_error;
            out.push_back(std::move(r));
            continue;
        }
        try {
            const GroundTruth truth = ground_truth(*inst);
            const MethodResult res = run_method(inst->M, m, params, &truth);
            r.accuracy = res.accuracy;
            r.rel_approx = res.rel_approx;
            if (config.record_time) r.seconds = res.seconds;
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, int threads)
{
    config.validate();
    const auto methods = methods_of(config);
    const std::size_t levels = config.epsilons.size();
    const auto trials = static_cast<std::size_t>(config.trials_per_level);
    const std::size_t tasks = levels * trials;

    std::vector<std::vector<TrialRecord>> slots(tasks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks; t = next++) {
            slots[t] = run_trial(config, methods, t / trials, static_cast<int>(t % trials));
        }
    };

    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, tasks); ++w) pool.emplace_back(worker);
    }

    ExperimentReport report;
    for (auto& s : slots) {
        for (auto& r : s) report.records.push_back(std::move(r));
    }
    report.summary = summarize(report.records);
    return report;
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    out += '"';
    return out;
}

std::string opt_real(const std::optional<double>& v)
{
    return v ? format_real(*v) : std::string();
}

nlohmann::ordered_json opt_json(const std::optional<double>& v)
{
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

} // namespace

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records)
{
    out << "epsilon,trial,method,accuracy,rel_approx,seconds,error\n";
    for (const auto& r : records) {
        out << format_real(r.epsilon) << ',' << r.trial << ',' << method_name(r.method) << ',' << opt_real(r.accuracy)
            << ',' << opt_real(r.rel_approx) << ',' << opt_real(r.seconds) << ',' << csv_field(r.error) << '\n';
    }
}

void write_summary_json(std::ostream& out, const ExperimentConfig& config, const ExperimentReport& report)
{
    nlohmann::ordered_json j;
    auto& c = j["config"];
    c["m"] = config.m;
    c["n"] = config.n;
    c["r1"] = config.r1;
    c["r2"] = config.r2;
    c["epsilons"] = config.epsilons;
    c["trials_per_level"] = config.trials_per_level;
    c["base_seed"] = config.base_seed;
    if (config.solver.cos.fgm.lambda) {
        c["lambda"] = *config.solver.cos.fgm.lambda;
    } else {
        c["lambda_factor"] = config.solver.cos.fgm.lambda_factor;
    }
    c["fgm_max_iter"] = config.solver.cos.fgm.max_iter;
    c["delta"] = config.solver.cos.delta;
    c["postprocess"] = config.solver.cos.postprocess == Postprocess::Diag ? "diag" : "spa";
    std::vector<std::string> names;
    for (Method m : methods_of(config)) names.emplace_back(method_name(m));
    c["methods"] = names;

    auto& levels = j["levels"];
    levels = nlohmann::ordered_json::array();
    for (const auto& s : report.summary) {
        nlohmann::ordered_json l;
        l["epsilon"] = s.epsilon;
        l["method"] = method_name(s.method);
        l["trials"] = s.trials;
        l["failures"] = s.failures;
        l["mean_accuracy"] = opt_json(s.mean_accuracy);
        l["mean_rel_approx"] = opt_json(s.mean_rel_approx);
        l["mean_seconds"] = opt_json(s.mean_seconds);
        levels.push_back(std::move(l));
    }
    out << j.dump(2) << '\n';
}

std::vector<std::filesystem::path> write_instances(const ExperimentConfig& config, const std::filesystem::path& dir)
{
    config.validate();
    std::vector<std::filesystem::path> written;
    for (std::size_t k = 0; k < config.epsilons.size(); ++k) {
        for (int t = 0; t < config.trials_per_level; ++t) {
            const auto sub = dir / ("epsilon_" + std::to_string(k)) / ("trial_" + std::to_string(t));
            std::error_code ec;
            std::filesystem::create_directories(sub, ec);
            if (ec) throw Error("cannot create " + sub.string() + ": " + ec.message());
            const auto inst = gen_cosep(config.m, config.n, config.r1, config.r2, config.epsilons[k],
                                        trial_seed(config.base_seed, k, t));
            const auto path = sub / "instance.mtx";
            write_instance(path, inst);
            written.push_back(path);
        }
    }
    return written;
}

} // namespace cosep
