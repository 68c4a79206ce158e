#include "nsga3oj/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "nsga3oj/errors.hpp"

namespace nsga3oj {

namespace {

double median_of(std::vector<double> values)
{
    if (values.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    return 0.5 * (values[mid - 1] + values[mid]);
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

} // namespace

void ExperimentConfig::validate() const
{
    const OjzjInstance inst = instance();
    params.validate();
    if (trials < 1) {
        throw UsageError("trials must be at least 1");
    }
    if (!inst.front_formula_applies()) {
        throw RegimeError("coverage runs need the closed-form front, which requires k <= n/m (got n=" +
                          std::to_string(n) + ", m=" + std::to_string(m) + ", k=" + std::to_string(k) + ")");
    }
}

ExperimentConfig make_config(std::size_t n, std::size_t m, std::size_t k, std::size_t mu, double p_c,
                             std::optional<std::size_t> lattice_p, std::optional<double> eps_nad,
                             std::size_t budget_evaluations, std::size_t trials, std::uint64_t master_seed)
{
    ExperimentConfig config;
    config.n = n;
    config.m = m;
    config.k = k;
    const OjzjInstance inst = config.instance();
    config.params.mu = mu;
    config.params.p_c = p_c;
    config.params.lattice_p = lattice_p.value_or(theorem_lattice_p(inst));
    config.params.eps_nad = eps_nad.value_or(static_cast<double>(inst.f_max()));
    if (mu == 0) {
        throw UsageError("population size mu must be even and positive (got 0)");
    }
    config.params.max_generations = (budget_evaluations + mu - 1) / mu;
    config.budget_evaluations = budget_evaluations;
    config.trials = trials;
    config.master_seed = master_seed;
    config.validate();
    return config;
}

TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index, bool record_trajectory,
                      std::shared_ptr<const ReferenceSet> refs, std::size_t config_id)
{
    config.validate();
    const OjzjInstance inst = config.instance();
    if (!refs) {
        refs = std::make_shared<const ReferenceSet>(inst.m(), config.params.lattice_p);
    } else if (refs->m() != inst.m() || refs->p() != config.params.lattice_p) {
        throw UsageError("run_trial: supplied reference set does not match (m, lattice_p)");
    }
    const auto front = pareto_front(inst);

    TrialResult result;
    result.config_id = config_id;
    result.trial = trial_index;
    result.seed = RandomStream::trial_seed(config.master_seed, trial_index);
    result.front_size = front.size();
    result.budget_generations = config.params.max_generations;

    Trajectory trajectory;
    const RunOutcome outcome = run_until_covered(inst, config.params, std::move(refs), RandomStream(result.seed),
                                                 front, record_trajectory ? &trajectory : nullptr);
    result.covered = outcome.generations.has_value();
    result.generations = outcome.generations.value_or(config.params.max_generations);
    result.evaluations = result.generations * config.params.mu;
    result.final_covered = outcome.final_covered;
    if (record_trajectory) {
        result.trajectory = std::move(trajectory);
    }
    return result;
}

ConfigSummary summarize(const ExperimentConfig& config, std::size_t config_id, const std::vector<TrialResult>& trials)
{
    ConfigSummary s;
    s.config_id = config_id;
    s.n = config.n;
    s.m = config.m;
    s.k = config.k;
    s.mu = config.params.mu;
    s.p_c = config.params.p_c;
    s.lattice_p = config.params.lattice_p;
    s.eps_nad = config.params.eps_nad;
    s.budget_generations = config.params.max_generations;
    s.trials = trials.size();

    std::vector<double> gens;
    for (const auto& t : trials) {
        if (t.covered) {
            gens.push_back(static_cast<double>(t.generations));
        }
    }
    s.successes = gens.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (gens.empty()) {
        s.median_generations = s.mean_generations = s.min_generations = s.max_generations = nan;
        s.median_evaluations = nan;
        return s;
    }
    s.median_generations = median_of(gens);
    s.mean_generations = std::accumulate(gens.begin(), gens.end(), 0.0) / static_cast<double>(gens.size());
    s.min_generations = *std::min_element(gens.begin(), gens.end());
    s.max_generations = *std::max_element(gens.begin(), gens.end());
    std::vector<double> evals;
    for (const auto& t : trials) {
        if (t.covered) {
            evals.push_back(static_cast<double>(t.evaluations));
        }
    }
    s.median_evaluations = median_of(evals);
    return s;
}

SuiteResult run_suite(const std::vector<ExperimentConfig>& configs, const SuiteOptions& options)
{
    SuiteResult result;
    result.configs = configs;
    result.trials.resize(configs.size());

    std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const ReferenceSet>> lattices;
    std::vector<std::shared_ptr<const ReferenceSet>> refs_of(configs.size());
    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        configs[c].validate();
        const auto key = std::make_pair(configs[c].m, configs[c].params.lattice_p);
        auto& lattice = lattices[key];
        if (!lattice) {
            lattice = std::make_shared<const ReferenceSet>(key.first, key.second);
        }
        refs_of[c] = lattice;
        result.trials[c].resize(configs[c].trials);
        for (std::size_t t = 0; t < configs[c].trials; ++t) {
            tasks.emplace_back(c, t);
        }
    }

    // fail on an unwritable directory before spending time on trials
    if (!options.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(options.out_dir, ec);
        if (ec || !std::filesystem::is_directory(options.out_dir)) {
            throw IoError("cannot create output directory '" + options.out_dir + "': " + ec.message());
        }
    }

    std::size_t threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(tasks.size(), 1));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) {
                return;
            }
            const auto [c, t] = tasks[i];
            try {
                result.trials[c][t] = run_trial(configs[c], t, options.trajectories, refs_of[c], c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(tasks.size());
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    for (std::size_t c = 0; c < configs.size(); ++c) {
        result.summaries.push_back(summarize(configs[c], c, result.trials[c]));
    }
    if (!options.out_dir.empty()) {
        write_suite_files(result, options.out_dir, options.trajectories);
    }
    return result;
}

std::string format_real(double value)
{
    if (std::isnan(value)) {
        return "NA";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

void write_trials_csv(std::ostream& out, const SuiteResult& result)
{
    out << "config_id,trial,seed,n,m,k,mu,pc,lattice_p,eps_nad,generations,evaluations,covered,front_size,budget\n";
    for (std::size_t c = 0; c < result.configs.size(); ++c) {
        const auto& cfg = result.configs[c];
        for (const auto& t : result.trials[c]) {
            out << c << ',' << t.trial << ',' << t.seed << ',' << cfg.n << ',' << cfg.m << ',' << cfg.k << ','
                << cfg.params.mu << ',' << format_real(cfg.params.p_c) << ',' << cfg.params.lattice_p << ','
                << format_real(cfg.params.eps_nad) << ',' << t.generations << ',' << t.evaluations << ','
                << (t.covered ? 1 : 0) << ',' << t.front_size << ',' << t.budget_generations << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, const std::vector<ConfigSummary>& summaries)
{
    out << "config_id,n,m,k,mu,pc,lattice_p,eps_nad,budget,trials,successes,median_generations,"
           "mean_generations,min_generations,max_generations,median_evaluations\n";
    for (const auto& s : summaries) {
        out << s.config_id << ',' << s.n << ',' << s.m << ',' << s.k << ',' << s.mu << ',' << format_real(s.p_c)
            << ',' << s.lattice_p << ',' << format_real(s.eps_nad) << ',' << s.budget_generations << ','
            << s.trials << ',' << s.successes << ',' << format_real(s.median_generations) << ','
            << format_real(s.mean_generations) << ',' << format_real(s.min_generations) << ','
            << format_real(s.max_generations) << ',' << format_real(s.median_evaluations) << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const SuiteResult& result)
{
    out << "config_id,trial,t,covered_front_count,min_cover,capped_min_cover,num_r_classes,jump_events\n";
    for (std::size_t c = 0; c < result.configs.size(); ++c) {
        for (const auto& t : result.trials[c]) {
            if (!t.trajectory) {
                continue;
            }
            for (const auto& rec : t.trajectory->records()) {
                out << c << ',' << t.trial << ',' << rec.t << ',' << rec.covered_front_count << ','
                    << rec.min_cover << ',' << rec.capped_min_cover << ',' << rec.r_classes.size() << ','
                    << rec.jumps.jump_events << '\n';
            }
        }
    }
}

namespace {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    writer(out);
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

} // namespace

void write_suite_files(const SuiteResult& result, const std::string& out_dir, bool trajectories)
{
    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + out_dir + "'");
    }
    write_file(dir / "trials.csv", [&](std::ostream& out) { write_trials_csv(out, result); });
    write_file(dir / "summary.csv", [&](std::ostream& out) { write_summary_csv(out, result.summaries); });
    if (trajectories) {
        write_file(dir / "trajectories.csv", [&](std::ostream& out) { write_trajectory_csv(out, result); });
    }
}

std::vector<ConfigSummary> parse_summary_csv(std::istream& in, const std::string& source)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw UsageError(source + ": empty summary file");
    }
    const auto header = split_csv_line(trim(line));
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        col[header[i]] = i;
    }
    const std::vector<std::string> required = {"config_id", "n", "m", "k", "mu", "pc", "lattice_p", "eps_nad",
                                               "budget", "trials", "successes", "median_generations",
                                               "mean_generations", "min_generations", "max_generations",
                                               "median_evaluations"};
    for (const auto& name : required) {
        if (!col.contains(name)) {
            throw UsageError(source + ": summary header lacks column '" + name + "'");
        }
    }

    std::vector<ConfigSummary> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw UsageError(source + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields");
        }
        auto get = [&](const std::string& name) -> const std::string& { return fields[col[name]]; };
        auto as_size = [&](const std::string& name) -> std::size_t {
            try {
                return static_cast<std::size_t>(std::stoull(get(name)));
            } catch (const std::exception&) {
                throw UsageError(source + ":" + std::to_string(line_no) + ": bad integer in column '" + name + "'");
            }
        };
        auto as_real = [&](const std::string& name) -> double {
            const auto& text = get(name);
            if (text == "NA") {
                return std::numeric_limits<double>::quiet_NaN();
            }
            try {
                return std::stod(text);
            } catch (const std::exception&) {
                throw UsageError(source + ":" + std::to_string(line_no) + ": bad number in column '" + name + "'");
            }
        };
        ConfigSummary s;
        s.config_id = as_size("config_id");
        s.n = as_size("n");
        s.m = as_size("m");
        s.k = as_size("k");
        s.mu = as_size("mu");
        s.p_c = as_real("pc");
        s.lattice_p = as_size("lattice_p");
        s.eps_nad = as_real("eps_nad");
        s.budget_generations = as_size("budget");
        s.trials = as_size("trials");
        s.successes = as_size("successes");
        s.median_generations = as_real("median_generations");
        s.mean_generations = as_real("mean_generations");
        s.min_generations = as_real("min_generations");
        s.max_generations = as_real("max_generations");
        s.median_evaluations = as_real("median_evaluations");
        out.push_back(s);
    }
    return out;
}

std::vector<ConfigSummary> read_summary_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return parse_summary_csv(in, path);
}

SpeedupReport compare_crossover(const ConfigSummary& without_crossover, const ConfigSummary& with_crossover)
{
    const auto key = [](const ConfigSummary& s) { return std::make_tuple(s.n, s.m, s.k, s.mu); };
    if (key(without_crossover) != key(with_crossover)) {
        throw UsageError("compare_crossover: summaries differ in (n, m, k, mu)");
    }
    if (without_crossover.successes == 0 || with_crossover.successes == 0) {
        throw UsageError("compare_crossover: a summary has no successful trials");
    }
    SpeedupReport report;
    report.median_without = without_crossover.median_generations;
    report.median_with = with_crossover.median_generations;
    report.ratio = report.median_with > 0.0 ? report.median_without / report.median_with
                                            : std::numeric_limits<double>::infinity();
    if (report.median_with == 0.0 && report.median_without == 0.0) {
        report.ratio = 1.0;
    }
    return report;
}

std::map<std::string, std::string> parse_key_value(std::istream& in, const std::string& source)
{
    std::map<std::string, std::string> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw UsageError(source + ":" + std::to_string(line_no) + ": empty key");
        }
        values[std::move(key)] = std::move(value);
    }
    return values;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    return parse_key_value(in, path);
}

} // namespace nsga3oj
