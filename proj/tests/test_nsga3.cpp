#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "nsga3oj/errors.hpp"
#include "nsga3oj/metrics.hpp"
#include "nsga3oj/nsga3.hpp"
#include "oracles.hpp"

using namespace nsga3oj;

namespace {

std::size_t binomial(std::size_t n, std::size_t k)
{
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

NormalizationState state_from(std::size_t m, double eps, const std::vector<ObjectiveVector>& seen)
{
    NormalizationState s(m, eps);
    for (const auto& v : seen) {
        s.observe(v);
    }
    return s;
}

AlgorithmParams params_for(const OjzjInstance& inst, std::size_t mu, double pc, std::size_t gens = 100)
{
    AlgorithmParams p;
    p.mu = mu;
    p.p_c = pc;
    p.lattice_p = theorem_lattice_p(inst);
    p.eps_nad = inst.f_max();
    p.max_generations = gens;
    return p;
}

std::multiset<std::pair<std::string, ObjectiveVector>> as_multiset(const std::vector<Individual>& pop)
{
    std::multiset<std::pair<std::string, ObjectiveVector>> out;
    for (const auto& ind : pop) {
        out.emplace(ind.genome.to_string(), ind.fitness);
    }
    return out;
}

} // namespace

TEST_CASE("reference lattice")
{
    const auto r24 = generate_reference_points(2, 4);
    REQUIRE(r24.size() == 5);
    std::set<std::vector<int>> got;
    for (const auto& rp : r24.points()) {
        got.insert(rp.parts);
    }
    CHECK(got == std::set<std::vector<int>>{{0, 4}, {1, 3}, {2, 2}, {3, 1}, {4, 0}});
    CHECK(r24.direction(1)[0] == doctest::Approx(0.25));

    const auto r31 = generate_reference_points(3, 1);
    REQUIRE(r31.size() == 3);
    for (const auto& rp : r31.points()) {
        CHECK(std::count(rp.parts.begin(), rp.parts.end(), 1) == 1);
    }
    CHECK(generate_reference_points(4, 3).size() == 20);

    for (std::size_t m = 2; m <= 6; ++m) {
        for (std::size_t p = 1; p <= 9; ++p) {
            const auto refs = generate_reference_points(m, p);
            CHECK(refs.size() == binomial(p + m - 1, m - 1));
            CHECK(reference_point_count(m, p) == binomial(p + m - 1, m - 1));
            std::set<std::vector<int>> distinct;
            for (const auto& rp : refs.points()) {
                CHECK(rp.sums_to_one());
                CHECK(std::accumulate(rp.parts.begin(), rp.parts.end(), 0) == static_cast<int>(p));
                CHECK(std::all_of(rp.parts.begin(), rp.parts.end(), [](int a) { return a >= 0; }));
                distinct.insert(rp.parts);
            }
            CHECK(distinct.size() == refs.size());
        }
    }
    CHECK_THROWS_AS(generate_reference_points(1, 3), UsageError);
    CHECK_THROWS_AS(generate_reference_points(3, 0), UsageError);
    CHECK_THROWS_AS(generate_reference_points(12, 200), UsageError);
}

TEST_CASE("theorem lattice parameter")
{
    CHECK(theorem_lattice_p(OjzjInstance(12, 2, 2)) == 80);
    CHECK(theorem_lattice_p(OjzjInstance(16, 2, 2)) == 102);
    CHECK(theorem_lattice_p(OjzjInstance(16, 2, 3)) == 108);
    for (auto [n, m, k] : {std::tuple{8, 2, 2}, {12, 4, 3}, {30, 6, 2}, {100, 4, 2}}) {
        const OjzjInstance inst(n, m, k);
        const double exact = 2.0 * std::pow(static_cast<double>(m), 1.5) * inst.f_max();
        const auto p = static_cast<double>(theorem_lattice_p(inst));
        CHECK(p >= exact - 1e-9);
        CHECK(p - 1 < exact);
    }
}

TEST_CASE("normalization extremes")
{
    NormalizationState s(2, 1.0);
    CHECK(s.empty());
    CHECK_THROWS_AS(s.normalize({1, 1}), UsageError);

    const std::vector<ObjectiveVector> first = {{2, 10}};
    s = update_extremes(s, first);
    CHECK(s.y_min() == ObjectiveVector{2, 10});
    CHECK(s.y_max() == ObjectiveVector{2, 10});

    auto t = state_from(2, 1.0, {{2, 2}, {8, 8}});
    const std::vector<ObjectiveVector> more = {{1, 9}};
    t = update_extremes(t, more);
    CHECK(t.y_min() == ObjectiveVector{1, 2});
    CHECK(t.y_max() == ObjectiveVector{8, 9});
    CHECK_THROWS_AS(t.observe({1, 2, 3}), UsageError);
    CHECK_THROWS_AS(NormalizationState(2, 0.0), UsageError);
}

TEST_CASE("normalize")
{
    const auto s = state_from(2, 10.0, {{2, 2}, {9, 3}});
    CHECK(s.y_nad() == std::vector<double>{10.0, 10.0});
    CHECK(s.normalize({2, 2}) == std::vector<double>{0.0, 0.0});
    const auto half = s.normalize({6, 6});
    CHECK(half[0] == doctest::Approx(0.5));
    CHECK(half[1] == doctest::Approx(0.5));
    const auto edge = s.normalize({10, 2});
    CHECK(edge[0] == doctest::Approx(1.0));
    CHECK(edge[1] == doctest::Approx(0.0));

    // nadir above eps_nad follows the observed maximum
    const auto big = state_from(2, 4.0, {{0, 0}, {8, 2}});
    CHECK(big.y_nad() == std::vector<double>{8.0, 4.0});

    // a degenerate denominator is floored rather than dividing by zero
    const auto flat = state_from(1 + 1, 3.0, {{3, 3}});
    const auto v = flat.normalize({3, 3});
    CHECK(std::isfinite(v[0]));
}

TEST_CASE("perpendicular distance")
{
    const std::vector<double> on = {0.5, 0.5};
    const std::vector<double> diag = {0.5, 0.5};
    CHECK(perpendicular_distance(on, diag) == doctest::Approx(0.0));
    CHECK(perpendicular_distance(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == doctest::Approx(1.0));
    CHECK(perpendicular_distance(std::vector<double>{1, 1}, std::vector<double>{1, 0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(perpendicular_distance(std::vector<double>{1, 1}, std::vector<double>{0, 0}), UsageError);

    // residual is orthogonal to the direction
    RandomStream rng(6);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> x(4);
        std::vector<double> r(4);
        for (auto& c : x) {
            c = rng.uniform01();
        }
        for (auto& c : r) {
            c = rng.uniform01() + 0.01;
        }
        const double rr = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
        const double xr = std::inner_product(x.begin(), x.end(), r.begin(), 0.0);
        const double xx = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
        const double d = perpendicular_distance(x, r);
        CHECK(d * d == doctest::Approx(xx - xr * xr / rr).epsilon(1e-9));
    }
}

TEST_CASE("associate")
{
    RandomStream rng(1);
    const ReferenceSet axes(2, 1);
    const std::vector<std::vector<double>> pts = {{1.0, 0.0}};
    const auto a = associate(pts, axes, rng);
    REQUIRE(a.size() == 1);
    CHECK(axes[a[0].ref].parts == std::vector<int>{1, 0});
    CHECK(a[0].distance == doctest::Approx(0.0));

    const std::vector<std::vector<double>> mid = {{0.5, 0.5}};
    int first = 0;
    const int repeats = 10'000;
    for (int s = 0; s < repeats; ++s) {
        RandomStream r(static_cast<std::uint64_t>(s));
        first += associate(mid, axes, r)[0].ref == 0 ? 1 : 0;
    }
    CHECK(first >= 4700);
    CHECK(first <= 5300);

    // equal points share a line even when it is a tie
    const std::vector<std::vector<double>> copies(50, std::vector<double>{0.5, 0.5});
    for (int s = 0; s < 100; ++s) {
        RandomStream r(static_cast<std::uint64_t>(s));
        const auto as = associate(copies, axes, r);
        CHECK(std::all_of(as.begin(), as.end(), [&](const Association& x) { return x.ref == as[0].ref; }));
    }

    // every point goes to a nearest line
    const ReferenceSet refs(3, 6);
    std::vector<std::vector<double>> many;
    for (int i = 0; i < 200; ++i) {
        many.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
    }
    const auto as = associate(many, refs, rng);
    for (std::size_t i = 0; i < many.size(); ++i) {
        double best = 1e300;
        for (std::size_t r = 0; r < refs.size(); ++r) {
            best = std::min(best, perpendicular_distance(many[i], refs.direction(r)));
        }
        CHECK(as[i].distance <= best + kTieTolerance);
        CHECK(as[i].distance == doctest::Approx(perpendicular_distance(many[i], refs.direction(as[i].ref))));
    }
}

TEST_CASE("survival selection")
{
    const OjzjInstance inst(8, 2, 2);
    const auto front = pareto_front(inst);
    const ReferenceSet refs(2, theorem_lattice_p(inst));
    const auto norm = state_from(2, inst.f_max(), front);
    RandomStream rng(77);

    SUBCASE("forced selection takes the whole layer")
    {
        const std::vector<ObjectiveVector> accepted = {{2, 10}, {10, 2}};
        const std::vector<ObjectiveVector> critical = {{4, 8}, {6, 6}};
        auto got = survival_select(accepted, critical, refs, norm, rng, 4);
        std::sort(got.begin(), got.end());
        CHECK(got == std::vector<std::size_t>{0, 1});
    }

    SUBCASE("niching then uniform fill")
    {
        const std::vector<ObjectiveVector> accepted;
        const std::vector<ObjectiveVector> critical = {{2, 10}, {4, 8}, {5, 7}, {6, 6}, {7, 5}, {10, 2}};
        for (int rep = 0; rep < 200; ++rep) {
            const auto got = survival_select(accepted, critical, refs, norm, rng, 4);
            REQUIRE(got.size() == 4);
            REQUIRE(std::set<std::size_t>(got.begin(), got.end()).size() == 4);
            for (auto i : got) {
                REQUIRE(i < critical.size());
            }
        }
    }

    SUBCASE("identical fitness splits the niche slot evenly")
    {
        const std::vector<ObjectiveVector> accepted = {{2, 10}};
        const std::vector<ObjectiveVector> critical = {{6, 6}, {6, 6}};
        int first = 0;
        const int repeats = 10'000;
        for (int s = 0; s < repeats; ++s) {
            RandomStream r(static_cast<std::uint64_t>(s) + 1000);
            const auto got = survival_select(accepted, critical, refs, norm, r, 2);
            REQUIRE(got.size() == 1);
            first += got[0] == 0 ? 1 : 0;
        }
        CHECK(first >= 4700);
        CHECK(first <= 5300);
    }

    SUBCASE("niching prefers the least crowded reference point")
    {
        // accepted crowds (6,6); the lone (2,10) candidate owns an empty niche
        const std::vector<ObjectiveVector> accepted = {{6, 6}, {6, 6}, {6, 6}};
        const std::vector<ObjectiveVector> critical = {{6, 6}, {2, 10}};
        for (int rep = 0; rep < 100; ++rep) {
            const auto got = survival_select(accepted, critical, refs, norm, rng, 4);
            REQUIRE(got == std::vector<std::size_t>{1});
        }
    }

    SUBCASE("count is mu minus accepted")
    {
        for (int rep = 0; rep < 300; ++rep) {
            const std::size_t mu = 2 * (1 + rng.below(8));
            const std::size_t acc = rng.below(mu);
            const std::size_t crit = mu - acc + rng.below(6);
            std::vector<ObjectiveVector> accepted(acc);
            std::vector<ObjectiveVector> critical(crit);
            for (auto& v : accepted) {
                v = front[rng.below(front.size())];
            }
            for (auto& v : critical) {
                v = front[rng.below(front.size())];
            }
            const auto got = survival_select(accepted, critical, refs, norm, rng, mu);
            REQUIRE(got.size() == mu - acc);
            REQUIRE(std::set<std::size_t>(got.begin(), got.end()).size() == got.size());
        }
    }

    SUBCASE("precondition violations")
    {
        const std::vector<ObjectiveVector> four(4, ObjectiveVector{6, 6});
        const std::vector<ObjectiveVector> one(1, ObjectiveVector{6, 6});
        CHECK_THROWS_AS(survival_select(four, one, refs, norm, rng, 4), UsageError);
        CHECK_THROWS_AS(survival_select(one, one, refs, norm, rng, 4), UsageError);
        CHECK_THROWS_AS(survival_select(one, four, refs, norm, rng, 3), UsageError);
    }
}

TEST_CASE("algorithm parameters")
{
    AlgorithmParams p;
    p.mu = 4;
    p.p_c = 0.5;
    p.lattice_p = 3;
    p.eps_nad = 1.0;
    CHECK_NOTHROW(p.validate());
    p.mu = 3;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p.mu = 4;
    p.p_c = 1.0;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p.p_c = -0.1;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p.p_c = 0;
    p.eps_nad = 0;
    CHECK_THROWS_AS(p.validate(), UsageError);

    const OjzjInstance inst(12, 2, 2);
    CHECK(population_bound_holds(inst, 26));
    CHECK_FALSE(population_bound_holds(inst, 24));
    CHECK(in_theorem_regime(inst, params_for(inst, 26, 0)));
    auto off = params_for(inst, 26, 0);
    off.eps_nad = 13;
    CHECK_FALSE(in_theorem_regime(inst, off));
}

TEST_CASE("generation step invariants")
{
    for (double pc : {0.0, 0.9}) {
        const OjzjInstance inst(12, 2, 2);
        const auto params = params_for(inst, 16, pc);
        Engine engine(inst, params, nullptr, RandomStream(5));
        NormalizationState prev = engine.normalization();
        for (int step = 0; step < 60; ++step) {
            const auto before = engine.population();
            const auto report = engine.step();
            const auto& after = engine.population();
            REQUIRE(after.size() == params.mu);
            REQUIRE(report.merged_size == 2 * params.mu);
            REQUIRE(report.generation == engine.generation());
            REQUIRE(report.accepted_whole + report.from_critical == params.mu);

            // rebuild the merged pool and its layers with the oracle
            std::vector<Individual> merged = before;
            merged.insert(merged.end(), engine.last_offspring().begin(), engine.last_offspring().end());
            std::vector<ObjectiveVector> fit;
            for (const auto& ind : merged) {
                fit.push_back(ind.fitness);
            }
            const auto layers = oracle::peel_layers(fit);
            REQUIRE(report.first_layer_size == layers.front().size());
            std::size_t below = 0;
            std::size_t crit = 0;
            while (below + layers[crit].size() < params.mu) {
                below += layers[crit].size();
                ++crit;
            }
            REQUIRE(report.critical_rank == crit + 1);
            REQUIRE(report.accepted_whole == below);

            const auto next = as_multiset(after);
            std::vector<Individual> whole;
            for (std::size_t l = 0; l < crit; ++l) {
                for (auto i : layers[l]) {
                    whole.push_back(merged[i]);
                }
            }
            const auto must = as_multiset(whole);
            REQUIRE(std::includes(next.begin(), next.end(), must.begin(), must.end()));
            std::set<ObjectiveVector> allowed;
            for (std::size_t l = 0; l <= crit; ++l) {
                for (auto i : layers[l]) {
                    allowed.insert(fit[i]);
                }
            }
            for (const auto& ind : after) {
                REQUIRE(allowed.contains(ind.fitness));
                REQUIRE(ind.fitness == evaluate(inst, ind.genome));
            }

            // extremes only widen and include every offspring
            const auto& now = engine.normalization();
            for (std::size_t j = 0; j < 2; ++j) {
                REQUIRE(now.y_min()[j] <= prev.y_min()[j]);
                REQUIRE(now.y_max()[j] >= prev.y_max()[j]);
                for (const auto& child : engine.last_offspring()) {
                    REQUIRE(child.fitness[j] >= now.y_min()[j]);
                    REQUIRE(child.fitness[j] <= now.y_max()[j]);
                }
            }
            prev = now;
        }
    }
}

TEST_CASE("without crossover offspring are mutated copies")
{
    const OjzjInstance inst(100, 2, 2);
    AlgorithmParams params = params_for(inst, 100, 0.0);
    params.lattice_p = 8; // lattice size does not affect variation
    Engine engine(inst, params, nullptr, RandomStream(31));
    std::size_t identical = 0;
    std::size_t total = 0;
    while (total < 10'000) {
        const auto pop = engine.population();
        engine.step();
        const auto& kids = engine.last_offspring();
        const auto& mids = engine.last_intermediates();
        for (std::size_t i = 0; i < kids.size(); ++i) {
            // every intermediate is a verbatim parent
            REQUIRE(std::any_of(pop.begin(), pop.end(), [&](const Individual& p) { return p.genome == mids[i]; }));
            identical += kids[i].genome == mids[i] ? 1 : 0;
            ++total;
        }
    }
    const double frac = static_cast<double>(identical) / static_cast<double>(total);
    CHECK(frac >= 0.356);
    CHECK(frac <= 0.376);
}

TEST_CASE("front coverage is retained step by step")
{
    const OjzjInstance inst(8, 2, 2);
    const auto front = pareto_front(inst);
    auto params = params_for(inst, 14, 0.9);
    // two copies of each front vector: mu >= 2|F|, cover >= 1 everywhere
    std::vector<Genome> initial;
    for (int copy = 0; copy < 2; ++copy) {
        for (std::size_t ones : {0, 2, 3, 4, 5, 6, 8}) {
            Genome g(8);
            for (std::size_t i = 0; i < ones; ++i) {
                g.set(i, true);
            }
            initial.push_back(g);
        }
    }
    REQUIRE(initial.size() == 14);
    const auto refs = std::make_shared<const ReferenceSet>(2, params.lattice_p);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Engine engine(inst, params, refs, RandomStream(seed), initial);
        engine.step();
        const auto covers = cover_numbers(engine.population(), front);
        for (const auto& [v, c] : covers) {
            REQUIRE(c >= 1);
        }
    }
}

TEST_CASE("engine construction")
{
    const OjzjInstance inst(8, 2, 2);
    const auto params = params_for(inst, 8, 0.0);
    CHECK_THROWS_AS(Engine(inst, params, nullptr, RandomStream(1), std::vector<Genome>(6, Genome(8))), UsageError);
    CHECK_THROWS_AS(Engine(inst, params, std::make_shared<const ReferenceSet>(3, 4), RandomStream(1)), UsageError);

    // the engine's P_0 is initial_population on the same stream
    RandomStream r(12);
    const auto expected = initial_population(r, 8, 8);
    Engine engine(inst, params, nullptr, RandomStream(12));
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(engine.population()[i].genome == expected[i]);
    }
}

TEST_CASE("run until covered")
{
    const OjzjInstance tiny(4, 2, 2);
    const auto tiny_front = pareto_front(tiny);
    auto tiny_params = params_for(tiny, 32, 0.0, 1000);

    SUBCASE("coverage of the initial population returns 0")
    {
        bool found = false;
        for (std::uint64_t seed = 0; seed < 200 && !found; ++seed) {
            RandomStream r(seed);
            std::vector<Individual> p0;
            for (auto& g : initial_population(r, 4, 32)) {
                p0.push_back(make_individual(tiny, g));
            }
            const auto covers = cover_numbers(p0, tiny_front);
            if (std::all_of(covers.begin(), covers.end(), [](const auto& e) { return e.second > 0; })) {
                found = true;
                const auto out = run_until_covered(tiny, tiny_params, nullptr, RandomStream(seed), tiny_front);
                REQUIRE(out.generations.has_value());
                CHECK(*out.generations == 0);
                CHECK(out.final_covered == tiny_front.size());
            }
        }
        CHECK(found);
    }

    SUBCASE("finite in every seeded run and deterministic")
    {
        const OjzjInstance inst(8, 2, 2);
        const auto front = pareto_front(inst);
        const auto params = params_for(inst, 32, 0.0, 100'000 / 32 + 1);
        const auto refs = std::make_shared<const ReferenceSet>(2, params.lattice_p);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto out = run_until_covered(inst, params, refs, RandomStream::for_trial(3, seed), front);
            REQUIRE(out.generations.has_value());
            CHECK(out.final_covered == front.size());
            const auto again = run_until_covered(inst, params, refs, RandomStream::for_trial(3, seed), front);
            CHECK(again.generations == out.generations);
        }
    }

    SUBCASE("trajectory holds one record per population")
    {
        const OjzjInstance inst(8, 2, 2);
        const auto front = pareto_front(inst);
        const auto params = params_for(inst, 32, 0.5, 5000);
        Trajectory traj;
        const auto out = run_until_covered(inst, params, nullptr, RandomStream(4), front, &traj);
        REQUIRE(out.generations.has_value());
        CHECK(traj.size() == *out.generations + 1);
        CHECK(traj.records().back().covered_front_count == front.size());
    }

    SUBCASE("budget exhaustion")
    {
        const OjzjInstance inst(16, 2, 3);
        const auto front = pareto_front(inst);
        const auto params = params_for(inst, 8, 0.0, 3);
        const auto out = run_until_covered(inst, params, nullptr, RandomStream(0), front);
        CHECK_FALSE(out.generations.has_value());
        CHECK(out.generations_run == 3);
    }
}

TEST_CASE("fixed-length runs keep capped cover numbers in the retention regime")
{
    const OjzjInstance inst(8, 2, 2);
    const auto front = pareto_front(inst);
    const auto refs = std::make_shared<const ReferenceSet>(2, theorem_lattice_p(inst));
    for (double pc : {0.0, 0.9}) {
        const auto params = params_for(inst, 40, pc);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto traj = run_fixed_generations(inst, params, refs, RandomStream(seed), front, 150);
            CHECK(traj.size() == 151);
            CHECK(check_monotonicity(traj).clean());
        }
    }
}
