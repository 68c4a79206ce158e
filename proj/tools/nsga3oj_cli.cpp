// Command-line front end: front, run, compare, check.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nsga3oj/checks.hpp"
#include "nsga3oj/errors.hpp"
#include "nsga3oj/experiments.hpp"
#include "nsga3oj/ojzj.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kInvariant = 2, kIo = 3 };

using nsga3oj::UsageError;

std::size_t parse_size(const std::string& key, const std::string& text)
{
    std::size_t pos = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(text, &pos);
    } catch (const std::exception&) {
        throw UsageError("'" + key + "' expects a non-negative integer, got '" + text + "'");
    }
    if (pos != text.size() || text.front() == '-') {
        throw UsageError("'" + key + "' expects a non-negative integer, got '" + text + "'");
    }
    return static_cast<std::size_t>(value);
}

// accepts plain integers and forms like 1e7
std::size_t parse_count(const std::string& key, const std::string& text)
{
    if (text.find_first_of("eE.") == std::string::npos) {
        return parse_size(key, text);
    }
    double value = 0.0;
    try {
        std::size_t pos = 0;
        value = std::stod(text, &pos);
        if (pos != text.size()) {
            throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        throw UsageError("'" + key + "' expects a count, got '" + text + "'");
    }
    if (!(value >= 0.0) || value != std::floor(value) || value > 1e18) {
        throw UsageError("'" + key + "' expects a whole non-negative count, got '" + text + "'");
    }
    return static_cast<std::size_t>(value);
}

double parse_real(const std::string& key, const std::string& text)
{
    try {
        std::size_t pos = 0;
        const double value = std::stod(text, &pos);
        if (pos == text.size()) {
            return value;
        }
    } catch (const std::exception&) {
    }
    throw UsageError("'" + key + "' expects a number, got '" + text + "'");
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "1" || text == "true" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "0" || text == "false" || text == "no" || text == "off") {
        return false;
    }
    throw UsageError("'" + key + "' expects a boolean, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    if (items.empty()) {
        throw UsageError("empty value list '" + text + "'");
    }
    return items;
}

struct RunArgs {
    std::string config_file;
    std::map<std::string, std::string> values;
};

int cmd_front(std::size_t n, std::size_t m, std::size_t k, bool brute_force)
{
    const nsga3oj::OjzjInstance inst(n, m, k);
    if (brute_force && n > nsga3oj::kBruteForceMaxBits) {
        throw UsageError("--brute-force supports n <= " + std::to_string(nsga3oj::kBruteForceMaxBits));
    }
    const auto front = brute_force ? nsga3oj::brute_force_front(inst) : nsga3oj::pareto_front(inst);
    for (std::size_t j = 0; j < m; ++j) {
        std::cout << (j ? "," : "") << 'f' << (j + 1);
    }
    std::cout << '\n';
    for (const auto& v : front) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            std::cout << (j ? "," : "") << v[j];
        }
        std::cout << '\n';
    }
    std::cerr << front.size() << " vectors\n";
    return kOk;
}

int cmd_run(const RunArgs& args)
{
    std::map<std::string, std::string> v;
    if (!args.config_file.empty()) {
        v = nsga3oj::read_key_value_file(args.config_file);
    }
    for (const auto& [key, value] : args.values) {
        v[key] = value;
    }
    static const std::vector<std::string> known = {"n",     "m",      "k",   "mu",  "pc",          "lattice_p",
                                                   "eps_nad", "trials", "seed", "budget", "out",
                                                   "trajectories", "threads"};
    for (const auto& [key, value] : v) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw UsageError("unknown setting '" + key + "'");
        }
    }
    for (const char* key : {"n", "m", "k", "mu", "pc"}) {
        if (!v.contains(key)) {
            throw UsageError(std::string("missing required setting '") + key + "'");
        }
    }

    const std::size_t n = parse_size("n", v["n"]);
    const std::size_t m = parse_size("m", v["m"]);
    const std::size_t mu = parse_size("mu", v["mu"]);
    const std::size_t trials = v.contains("trials") ? parse_size("trials", v["trials"]) : 1;
    const std::uint64_t seed = v.contains("seed") ? parse_size("seed", v["seed"]) : 0;
    const std::size_t budget =
        v.contains("budget") ? parse_count("budget", v["budget"]) : nsga3oj::kDefaultBudgetEvaluations;
    std::optional<std::size_t> lattice_p;
    if (v.contains("lattice_p")) {
        lattice_p = parse_size("lattice_p", v["lattice_p"]);
    }
    std::optional<double> eps_nad;
    if (v.contains("eps_nad")) {
        eps_nad = parse_real("eps_nad", v["eps_nad"]);
    }

    std::vector<nsga3oj::ExperimentConfig> configs;
    for (const auto& k_text : split_list(v["k"])) {
        for (const auto& pc_text : split_list(v["pc"])) {
            configs.push_back(nsga3oj::make_config(n, m, parse_size("k", k_text), mu, parse_real("pc", pc_text),
                                                   lattice_p, eps_nad, budget, trials, seed));
        }
    }

    nsga3oj::SuiteOptions options;
    options.out_dir = v.contains("out") ? v["out"] : std::string("results");
    options.trajectories = v.contains("trajectories") && parse_bool("trajectories", v["trajectories"]);
    options.threads = v.contains("threads") ? parse_size("threads", v["threads"]) : 0;

    for (std::size_t c = 0; c < configs.size(); ++c) {
        const auto& cfg = configs[c];
        if (!cfg.theorem_regime()) {
            std::cerr << "note: config " << c << " is outside the retention regime (lattice_p >= "
                      << nsga3oj::theorem_lattice_p(cfg.instance()) << ", eps_nad >= " << cfg.instance().f_max()
                      << ")\n";
        }
        if (!cfg.population_bound()) {
            std::cerr << "note: config " << c << " has mu/2 below (1+2n/m)^(m/2)\n";
        }
    }

    const auto result = nsga3oj::run_suite(configs, options);
    nsga3oj::write_summary_csv(std::cout, result.summaries);
    std::cerr << "wrote " << options.out_dir << "/trials.csv and " << options.out_dir << "/summary.csv\n";
    return kOk;
}

const nsga3oj::ConfigSummary& pick_row(const std::vector<nsga3oj::ConfigSummary>& rows,
                                       std::optional<std::size_t> id, const std::string& path)
{
    if (id) {
        for (const auto& row : rows) {
            if (row.config_id == *id) {
                return row;
            }
        }
        throw UsageError(path + ": no row with config_id " + std::to_string(*id));
    }
    if (rows.size() != 1) {
        throw UsageError(path + ": holds " + std::to_string(rows.size()) +
                         " rows; choose one with --id-a/--id-b");
    }
    return rows.front();
}

int cmd_compare(const std::string& a_path, const std::string& b_path, std::optional<std::size_t> id_a,
                std::optional<std::size_t> id_b)
{
    const auto a_rows = nsga3oj::read_summary_csv(a_path);
    const auto b_rows = nsga3oj::read_summary_csv(b_path);
    const auto& a = pick_row(a_rows, id_a, a_path);
    const auto& b = pick_row(b_rows, id_b, b_path);
    const auto report = nsga3oj::compare_crossover(a, b);
    std::cout << "median_generations_a,median_generations_b,ratio\n"
              << nsga3oj::format_real(report.median_without) << ',' << nsga3oj::format_real(report.median_with)
              << ',' << nsga3oj::format_real(report.ratio) << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"NSGA-III on the m-objective OneJumpZeroJump benchmark"};
    app.require_subcommand(1);

    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t k = 0;
    bool brute_force = false;
    auto* front = app.add_subcommand("front", "Print the Pareto front");
    front->add_option("--n", n, "Genome length")->required();
    front->add_option("--m", m, "Number of objectives (even)")->required();
    front->add_option("--k", k, "Gap size")->required();
    front->add_flag("--brute-force", brute_force, "Enumerate all 2^n genomes instead of the closed form");

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a seeded experiment suite");
    run->add_option("--config", run_args.config_file, "key = value settings file; flags override it");
    struct Flag {
        const char* name;
        const char* key;
        const char* help;
    };
    const Flag run_flags[] = {
        {"--n", "n", "Genome length"},
        {"--m", "m", "Number of objectives"},
        {"--k", "k", "Gap size (comma list allowed)"},
        {"--mu", "mu", "Population size (even)"},
        {"--pc", "pc", "Crossover probability (comma list allowed)"},
        {"--lattice-p", "lattice_p", "Reference lattice parameter [default: ceil(2 m^1.5 f_max)]"},
        {"--eps-nad", "eps_nad", "Nadir threshold [default: f_max]"},
        {"--trials", "trials", "Trials per config [default: 1]"},
        {"--seed", "seed", "Master seed [default: 0]"},
        {"--budget", "budget", "Evaluation budget [default: 1e7]"},
        {"--out", "out", "Output directory [default: results]"},
        {"--threads", "threads", "Concurrent trials [default: hardware]"},
    };
    std::map<std::string, std::string> flag_values;
    for (const auto& f : run_flags) {
        run->add_option(f.name, flag_values[f.key], f.help);
    }
    bool trajectories = false;
    run->add_flag("--trajectories", trajectories, "Also write trajectories.csv");

    std::string a_path;
    std::string b_path;
    std::optional<std::size_t> id_a;
    std::optional<std::size_t> id_b;
    auto* compare = app.add_subcommand("compare", "Speedup of summary B over summary A");
    compare->add_option("--a", a_path, "Summary CSV without crossover")->required();
    compare->add_option("--b", b_path, "Summary CSV with crossover")->required();
    compare->add_option("--id-a", id_a, "config_id to use from A");
    compare->add_option("--id-b", id_b, "config_id to use from B");

    auto* check = app.add_subcommand("check", "Run the built-in invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (front->parsed()) {
            return cmd_front(n, m, k, brute_force);
        }
        if (run->parsed()) {
            for (const auto& f : run_flags) {
                if (run->get_option(f.name)->count() > 0) {
                    run_args.values[f.key] = flag_values[f.key];
                }
            }
            if (trajectories) {
                run_args.values["trajectories"] = "1";
            }
            return cmd_run(run_args);
        }
        if (compare->parsed()) {
            return cmd_compare(a_path, b_path, id_a, id_b);
        }
        if (check->parsed()) {
            return nsga3oj::run_invariant_checks(std::cout) ? kOk : kInvariant;
        }
    } catch (const nsga3oj::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const nsga3oj::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInvariant;
    }
    return kUsage;
}
