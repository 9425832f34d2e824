#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cosep/cosfgm.hpp"
#include "cosep/factors.hpp"
#include "cosep/matrix.hpp"
#include "cosep/synth.hpp"

namespace cosep {

enum class Method { CosFgm, SpaPlus, Spac, Spar, Ahals };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

struct SolveParams {
    Index r1 = 10;
    Index r2 = 3;
    CosSelectParams cos{};  // r1, r2 overwritten from above
    FactorParams factors{};
    int ahals_iters = 1000;
    std::uint64_t seed = 0;  // A-HALS start
};

struct MethodResult {
    Method method = Method::CosFgm;
    std::optional<IndexSet> k1;  // absent for methods that do not pick rows
    std::optional<IndexSet> k2;
    std::optional<double> accuracy;
    double rel_approx = 0.0;
    double seconds = 0.0;
    // cos_fgm only
    int outer_iterations = 0;
    bool converged = false;
    // Fitted factors: P1, S, P2 for selection methods (missing sides empty),
    // W, H for A-HALS stored as P1 and P2 with an empty S.
    Matrix P1;
    Matrix S;
    Matrix P2;
};

// Accuracy restricted to the sides a method identifies: the index accuracy
// for row+column methods, the per-side hit rate for SPAR / SPAC.
std::optional<double> method_accuracy(const MethodResult& r, const GroundTruth& truth);

// Runs one method on M. Accuracy is filled in when `truth` is given.
MethodResult run_method(const Matrix& M, Method method, const SolveParams& params,
                        const GroundTruth* truth = nullptr);

struct ExperimentConfig {
    Index m = 100;
    Index n = 100;
    Index r1 = 10;
    Index r2 = 3;
    std::vector<double> epsilons = noise_grid();
    int trials_per_level = 25;
    std::uint64_t base_seed = 0;
    SolveParams solver{};
    std::vector<Method> baselines{};
    bool record_time = true;

    // Throws InvalidInputError on an unusable configuration.
    void validate() const;
};

// base_seed + 1000 * epsilon_index + trial_index
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t epsilon_index, int trial);

struct TrialRecord {
    std::size_t epsilon_index = 0;
    double epsilon = 0.0;
    int trial = 0;
    Method method = Method::CosFgm;
    std::optional<double> accuracy;
    std::optional<double> rel_approx;
    std::optional<double> seconds;
    std::string error;  // empty on success
};

struct LevelSummary {
    double epsilon = 0.0;
    Method method = Method::CosFgm;
    int trials = 0;
    int failures = 0;
    std::optional<double> mean_accuracy;
    std::optional<double> mean_rel_approx;
    std::optional<double> mean_seconds;
};

struct ExperimentReport {
    std::vector<TrialRecord> records;  // ordered by (epsilon, trial, method)
    std::vector<LevelSummary> summary; // ordered by (epsilon, method)
    bool has_failures() const;
};

// Means over the successful records of each (epsilon, method), in record order.
std::vector<LevelSummary> summarize(const std::vector<TrialRecord>& records);

// Generates every instance and runs cos_fgm plus the baselines. Trials run on
// up to `threads` workers; the report order does not depend on scheduling.
ExperimentReport run_experiment(const ExperimentConfig& config, int threads = 1);

// epsilon,trial,method,accuracy,rel_approx,seconds,error
void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_summary_json(std::ostream& out, const ExperimentConfig& config, const ExperimentReport& report);

// Writes <dir>/epsilon_<k>/trial_<t>/instance.{mtx,json}; returns the .mtx paths.
std::vector<std::filesystem::path> write_instances(const ExperimentConfig& config, const std::filesystem::path& dir);

// %.17g, the round-trip format used in every text output.
std::string format_real(double v);

} // namespace cosep
