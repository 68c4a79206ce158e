#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nsga3oj/metrics.hpp"
#include "nsga3oj/nsga3.hpp"
#include "nsga3oj/ojzj.hpp"

namespace nsga3oj {

inline constexpr std::size_t kDefaultBudgetEvaluations = 10'000'000;

struct ExperimentConfig {
    std::size_t n = 8;
    std::size_t m = 2;
    std::size_t k = 2;
    AlgorithmParams params;
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    /// Evaluation budget; params.max_generations = ceil(budget / mu).
    std::size_t budget_evaluations = kDefaultBudgetEvaluations;

    OjzjInstance instance() const { return OjzjInstance(n, m, k); }
    /// Throws UsageError if any instance, algorithm, or trial-count constraint
    /// fails, or if the closed-form front does not apply (k > n/m).
    void validate() const;
    bool theorem_regime() const { return in_theorem_regime(instance(), params); }
    bool population_bound() const { return population_bound_holds(instance(), params.mu); }
};

/// Config with retention-regime defaults for anything not given:
/// lattice_p = ceil(2 m^(3/2) f_max), eps_nad = f_max.
ExperimentConfig make_config(std::size_t n, std::size_t m, std::size_t k, std::size_t mu, double p_c,
                             std::optional<std::size_t> lattice_p = std::nullopt,
                             std::optional<double> eps_nad = std::nullopt,
                             std::size_t budget_evaluations = kDefaultBudgetEvaluations, std::size_t trials = 1,
                             std::uint64_t master_seed = 0);

struct TrialResult {
    std::size_t config_id = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    bool covered = false;
    /// Generations to cover when covered, the generation budget otherwise.
    std::size_t generations = 0;
    /// generations * mu.
    std::size_t evaluations = 0;
    std::size_t final_covered = 0;
    std::size_t front_size = 0;
    std::size_t budget_generations = 0;
    std::optional<Trajectory> trajectory;

    friend bool operator==(const TrialResult& a, const TrialResult& b)
    {
        return a.config_id == b.config_id && a.trial == b.trial && a.seed == b.seed && a.covered == b.covered &&
               a.generations == b.generations && a.evaluations == b.evaluations &&
               a.final_covered == b.final_covered && a.front_size == b.front_size &&
               a.budget_generations == b.budget_generations;
    }
};

/// Pure function of (config, trial_index). `refs` may be supplied to share a
/// lattice between trials; it must match (m, lattice_p).
TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index, bool record_trajectory = false,
                      std::shared_ptr<const ReferenceSet> refs = nullptr, std::size_t config_id = 0);

/// Statistics cover successful trials only; NaN when there are none.
struct ConfigSummary {
    std::size_t config_id = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t k = 0;
    std::size_t mu = 0;
    double p_c = 0.0;
    std::size_t lattice_p = 0;
    double eps_nad = 0.0;
    std::size_t budget_generations = 0;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double median_generations = 0.0;
    double mean_generations = 0.0;
    double min_generations = 0.0;
    double max_generations = 0.0;
    double median_evaluations = 0.0;
};

ConfigSummary summarize(const ExperimentConfig& config, std::size_t config_id,
                        const std::vector<TrialResult>& trials);

struct SuiteOptions {
    /// Directory for trials.csv, summary.csv and trajectories.csv; empty
    /// means nothing is written.
    std::string out_dir;
    bool trajectories = false;
    /// 0 picks std::thread::hardware_concurrency().
    std::size_t threads = 0;
};

struct SuiteResult {
    std::vector<ExperimentConfig> configs;
    std::vector<std::vector<TrialResult>> trials;
    std::vector<ConfigSummary> summaries;
};

/// Runs every trial of every config, possibly concurrently. Results do not
/// depend on scheduling. Throws IoError if the output directory cannot be
/// written.
SuiteResult run_suite(const std::vector<ExperimentConfig>& configs, const SuiteOptions& options = {});

void write_trials_csv(std::ostream& out, const SuiteResult& result);
void write_summary_csv(std::ostream& out, const std::vector<ConfigSummary>& summaries);
void write_trajectory_csv(std::ostream& out, const SuiteResult& result);
void write_suite_files(const SuiteResult& result, const std::string& out_dir, bool trajectories);

std::vector<ConfigSummary> read_summary_csv(const std::string& path);
std::vector<ConfigSummary> parse_summary_csv(std::istream& in, const std::string& source = "<stream>");

struct SpeedupReport {
    double median_without = 0.0;
    double median_with = 0.0;
    /// median_without / median_with.
    double ratio = 0.0;
};

/// Throws UsageError if (n, m, k, mu) differ or either side has no successes.
SpeedupReport compare_crossover(const ConfigSummary& without_crossover, const ConfigSummary& with_crossover);

/// Six significant digits, as used in every CSV.
std::string format_real(double value);

/// Flat `key = value` file with `#` comments. Throws IoError if unreadable and
/// UsageError on a malformed line.
std::map<std::string, std::string> read_key_value_file(const std::string& path);
std::map<std::string, std::string> parse_key_value(std::istream& in, const std::string& source = "<stream>");

} // namespace nsga3oj
