#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include "nsga3oj/bitcore.hpp"
#include "nsga3oj/dominance.hpp"
#include "nsga3oj/errors.hpp"
#include "nsga3oj/experiments.hpp"
#include "nsga3oj/metrics.hpp"
#include "nsga3oj/nsga3.hpp"
#include "nsga3oj/ojzj.hpp"

namespace py = pybind11;
using namespace nsga3oj;

namespace {

py::dict trial_to_dict(const TrialResult& t)
{
    py::dict d;
    d["config_id"] = t.config_id;
    d["trial"] = t.trial;
    d["seed"] = t.seed;
    d["covered"] = t.covered;
    d["generations"] = t.generations;
    d["evaluations"] = t.evaluations;
    d["final_covered"] = t.final_covered;
    d["front_size"] = t.front_size;
    d["budget"] = t.budget_generations;
    if (t.trajectory) {
        py::list rows;
        for (const auto& r : t.trajectory->records()) {
            py::dict row;
            row["t"] = r.t;
            row["covered_front_count"] = r.covered_front_count;
            row["min_cover"] = r.min_cover;
            row["capped_min_cover"] = r.capped_min_cover;
            row["num_r_classes"] = r.r_classes.size();
            row["jump_events"] = r.jumps.jump_events;
            row["valley_jumps"] = r.jumps.valley_jumps;
            rows.append(row);
        }
        d["trajectory"] = rows;
    }
    return d;
}

py::dict summary_to_dict(const ConfigSummary& s)
{
    py::dict d;
    d["config_id"] = s.config_id;
    d["n"] = s.n;
    d["m"] = s.m;
    d["k"] = s.k;
    d["mu"] = s.mu;
    d["pc"] = s.p_c;
    d["lattice_p"] = s.lattice_p;
    d["eps_nad"] = s.eps_nad;
    d["budget"] = s.budget_generations;
    d["trials"] = s.trials;
    d["successes"] = s.successes;
    d["median_generations"] = s.median_generations;
    d["mean_generations"] = s.mean_generations;
    d["min_generations"] = s.min_generations;
    d["max_generations"] = s.max_generations;
    d["median_evaluations"] = s.median_evaluations;
    return d;
}

ConfigSummary summary_from_dict(const py::dict& d)
{
    ConfigSummary s;
    s.n = d["n"].cast<std::size_t>();
    s.m = d["m"].cast<std::size_t>();
    s.k = d["k"].cast<std::size_t>();
    s.mu = d["mu"].cast<std::size_t>();
    s.successes = d["successes"].cast<std::size_t>();
    s.median_generations = d["median_generations"].cast<double>();
    return s;
}

} // namespace

PYBIND11_MODULE(_core, mod)
{
    mod.doc() = "NSGA-III on the m-objective OneJumpZeroJump benchmark";

    static py::exception<UsageError> usage_error(mod, "UsageError", PyExc_ValueError);
    static py::exception<RegimeError> regime_error(mod, "RegimeError", usage_error.ptr());
    static py::exception<IoError> io_error(mod, "IoError", PyExc_OSError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const RegimeError& e) {
            py::set_error(regime_error, e.what());
        } catch (const UsageError& e) {
            py::set_error(usage_error, e.what());
        } catch (const IoError& e) {
            py::set_error(io_error, e.what());
        }
    });

    py::class_<RandomStream>(mod, "RandomStream")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def_static("for_trial", &RandomStream::for_trial, py::arg("master_seed"), py::arg("index"))
        .def_static("trial_seed", &RandomStream::trial_seed, py::arg("master_seed"), py::arg("index"))
        .def("below", &RandomStream::below, py::arg("bound"))
        .def("uniform01", &RandomStream::uniform01)
        .def("next_u64", &RandomStream::next_u64);

    py::class_<Genome>(mod, "Genome")
        .def(py::init<std::size_t>(), py::arg("n"))
        .def_static("from_string", &Genome::from_string, py::arg("bits"))
        .def_static("filled", &Genome::filled, py::arg("n"), py::arg("value"))
        .def("__len__", &Genome::size)
        .def("__getitem__", &Genome::test)
        .def("__str__", &Genome::to_string)
        .def("__repr__", [](const Genome& g) { return "Genome('" + g.to_string() + "')"; })
        .def("__eq__", [](const Genome& a, const Genome& b) { return a == b; })
        .def("ones", &Genome::ones)
        .def("zeros", &Genome::zeros)
        .def("complement", &Genome::complement);

    mod.def("hamming", &hamming, py::arg("x"), py::arg("y"));
    mod.def("block", &block, py::arg("x"), py::arg("j"), py::arg("block_len"));
    mod.def("uniform_random_genome", &uniform_random_genome, py::arg("rng"), py::arg("n"));
    mod.def("standard_bit_mutation", &standard_bit_mutation, py::arg("y"), py::arg("rng"));
    mod.def("uniform_crossover", &uniform_crossover, py::arg("a"), py::arg("b"), py::arg("rng"));

    mod.def("weakly_dominates", &weakly_dominates, py::arg("u"), py::arg("v"));
    mod.def("dominates", &dominates, py::arg("u"), py::arg("v"));
    mod.def(
        "non_dominated_sort",
        [](const std::vector<ObjectiveVector>& vs) { return non_dominated_sort(vs).layers; }, py::arg("vectors"),
        "Layers of input indices, best layer first.");

    py::class_<OjzjInstance>(mod, "OjzjInstance")
        .def(py::init<std::size_t, std::size_t, std::size_t>(), py::arg("n"), py::arg("m"), py::arg("k"))
        .def_property_readonly("n", &OjzjInstance::n)
        .def_property_readonly("m", &OjzjInstance::m)
        .def_property_readonly("k", &OjzjInstance::k)
        .def_property_readonly("block_len", &OjzjInstance::block_len)
        .def_property_readonly("f_max", &OjzjInstance::f_max)
        .def("front_size", &OjzjInstance::front_size);

    mod.def("block_objectives", &block_objectives, py::arg("instance"), py::arg("ones_in_block"));
    mod.def("evaluate", &evaluate, py::arg("instance"), py::arg("x"));
    mod.def("r_vector", &r_vector, py::arg("instance"), py::arg("v"));
    mod.def("pareto_front", &pareto_front, py::arg("instance"));
    mod.def("brute_force_front", &brute_force_front, py::arg("instance"));
    mod.def("genome_class", &genome_class, py::arg("instance"), py::arg("x"));

    py::class_<ReferenceSet, std::shared_ptr<ReferenceSet>>(mod, "ReferenceSet")
        .def(py::init(&generate_reference_points), py::arg("m"), py::arg("p"))
        .def("__len__", &ReferenceSet::size)
        .def_property_readonly("m", &ReferenceSet::m)
        .def_property_readonly("p", &ReferenceSet::p)
        .def("parts", [](const ReferenceSet& r, std::size_t i) { return r[i].parts; }, py::arg("i"))
        .def("coordinates", [](const ReferenceSet& r, std::size_t i) { return r[i].coordinates(); }, py::arg("i"));
    mod.def("reference_point_count", &reference_point_count, py::arg("m"), py::arg("p"));

    py::class_<NormalizationState>(mod, "NormalizationState")
        .def(py::init<std::size_t, double>(), py::arg("m"), py::arg("eps_nad"))
        .def("observe", py::overload_cast<const ObjectiveVector&>(&NormalizationState::observe), py::arg("v"))
        .def("normalize", &NormalizationState::normalize, py::arg("v"))
        .def_property_readonly("y_min", &NormalizationState::y_min)
        .def_property_readonly("y_max", &NormalizationState::y_max)
        .def_property_readonly("y_nad", &NormalizationState::y_nad);

    mod.def(
        "perpendicular_distance",
        [](const std::vector<double>& point, const std::vector<double>& direction) {
            return perpendicular_distance(point, direction);
        },
        py::arg("point"), py::arg("direction"));
    mod.def(
        "associate",
        [](const std::vector<std::vector<double>>& points, const ReferenceSet& refs, RandomStream& rng) {
            std::vector<std::pair<std::size_t, double>> out;
            for (const auto& a : associate(points, refs, rng)) {
                out.emplace_back(a.ref, a.distance);
            }
            return out;
        },
        py::arg("points"), py::arg("refs"), py::arg("rng"), "(reference index, distance) per point.");

    mod.def("theorem_lattice_p", &theorem_lattice_p, py::arg("instance"));
    mod.def("cover_cap", &cover_cap, py::arg("instance"), py::arg("mu"));

    py::class_<ExperimentConfig>(mod, "ExperimentConfig")
        .def(py::init(&make_config), py::arg("n"), py::arg("m"), py::arg("k"), py::arg("mu"), py::arg("pc"),
             py::arg("lattice_p") = py::none(), py::arg("eps_nad") = py::none(),
             py::arg("budget") = kDefaultBudgetEvaluations, py::arg("trials") = 1, py::arg("seed") = 0)
        .def_readonly("n", &ExperimentConfig::n)
        .def_readonly("m", &ExperimentConfig::m)
        .def_readonly("k", &ExperimentConfig::k)
        .def_readonly("trials", &ExperimentConfig::trials)
        .def_readonly("seed", &ExperimentConfig::master_seed)
        .def_property_readonly("mu", [](const ExperimentConfig& c) { return c.params.mu; })
        .def_property_readonly("pc", [](const ExperimentConfig& c) { return c.params.p_c; })
        .def_property_readonly("lattice_p", [](const ExperimentConfig& c) { return c.params.lattice_p; })
        .def_property_readonly("eps_nad", [](const ExperimentConfig& c) { return c.params.eps_nad; })
        .def_property_readonly("max_generations", [](const ExperimentConfig& c) { return c.params.max_generations; });

    mod.def(
        "run_trial",
        [](const ExperimentConfig& config, std::size_t index, bool trajectory) {
            TrialResult r;
            {
                py::gil_scoped_release release;
                r = run_trial(config, index, trajectory);
            }
            return trial_to_dict(r);
        },
        py::arg("config"), py::arg("index"), py::arg("trajectory") = false);

    mod.def(
        "run_suite",
        [](const std::vector<ExperimentConfig>& configs, const std::string& out_dir, bool trajectories,
           std::size_t threads) {
            SuiteOptions options{out_dir, trajectories, threads};
            SuiteResult result;
            {
                py::gil_scoped_release release;
                result = run_suite(configs, options);
            }
            py::list summaries;
            for (const auto& s : result.summaries) {
                summaries.append(summary_to_dict(s));
            }
            py::list trials;
            for (const auto& per_config : result.trials) {
                for (const auto& t : per_config) {
                    trials.append(trial_to_dict(t));
                }
            }
            py::dict out;
            out["summaries"] = summaries;
            out["trials"] = trials;
            return out;
        },
        py::arg("configs"), py::arg("out_dir") = "", py::arg("trajectories") = false, py::arg("threads") = 0);

    mod.def(
        "read_summary_csv",
        [](const std::string& path) {
            py::list out;
            for (const auto& s : read_summary_csv(path)) {
                out.append(summary_to_dict(s));
            }
            return out;
        },
        py::arg("path"));

    mod.def(
        "compare_crossover",
        [](const py::dict& without, const py::dict& with) {
            const auto r = compare_crossover(summary_from_dict(without), summary_from_dict(with));
            py::dict d;
            d["median_without"] = r.median_without;
            d["median_with"] = r.median_with;
            d["ratio"] = r.ratio;
            return d;
        },
        py::arg("without_crossover"), py::arg("with_crossover"));
}
