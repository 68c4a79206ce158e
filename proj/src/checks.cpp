#include "nsga3oj/checks.hpp"

#include <memory>
#include <ostream>
#include <set>
#include <string>

#include "nsga3oj/metrics.hpp"
#include "nsga3oj/nsga3.hpp"
#include "nsga3oj/ojzj.hpp"

namespace nsga3oj {

namespace {

struct Tally {
    std::ostream& log;
    bool ok = true;

    void report(bool passed, const std::string& what)
    {
        log << (passed ? "PASS " : "FAIL ") << what << '\n';
        ok = ok && passed;
    }
};

void check_fronts(Tally& tally)
{
    for (std::size_t n : {4, 8, 12}) {
        for (std::size_t m : {2, 4}) {
            for (std::size_t k : {2, 3}) {
                if (n % (m / 2) != 0 || 2 * k > 2 * n / m) {
                    continue;
                }
                const OjzjInstance inst(n, m, k);
                const auto closed = pareto_front(inst);
                const bool same = closed == brute_force_front(inst) && closed.size() == inst.front_size();
                tally.report(same, "front n=" + std::to_string(n) + " m=" + std::to_string(m) +
                                       " k=" + std::to_string(k) + " matches enumeration (" +
                                       std::to_string(closed.size()) + " vectors)");
            }
        }
    }
}

void check_lattices(Tally& tally)
{
    const std::pair<std::size_t, std::size_t> cases[] = {{2, 4}, {3, 5}, {4, 7}};
    for (auto [m, p] : cases) {
        const ReferenceSet refs(m, p);
        std::set<std::vector<int>> distinct;
        bool sums = true;
        for (const auto& rp : refs.points()) {
            distinct.insert(rp.parts);
            sums = sums && rp.sums_to_one();
        }
        const bool ok = refs.size() == reference_point_count(m, p) && distinct.size() == refs.size() && sums;
        tally.report(ok, "lattice m=" + std::to_string(m) + " p=" + std::to_string(p) + " has " +
                             std::to_string(refs.size()) + " distinct points summing to 1");
    }
}

void check_retention(Tally& tally, std::size_t n, std::size_t m, std::size_t k, std::size_t mu, double p_c,
                     std::size_t runs, std::size_t generations)
{
    const OjzjInstance inst(n, m, k);
    AlgorithmParams params;
    params.mu = mu;
    params.p_c = p_c;
    params.lattice_p = theorem_lattice_p(inst);
    params.eps_nad = static_cast<double>(inst.f_max());
    params.max_generations = generations;
    const auto refs = std::make_shared<const ReferenceSet>(m, params.lattice_p);
    const auto front = pareto_front(inst);

    MonotonicityReport total;
    for (std::size_t run = 0; run < runs; ++run) {
        const auto traj =
            run_fixed_generations(inst, params, refs, RandomStream::for_trial(0xC0FFEE, run), front, generations);
        const auto r = check_monotonicity(traj);
        total.capped_min_cover_decreases += r.capped_min_cover_decreases;
        total.covered_count_decreases += r.covered_count_decreases;
        total.r_class_losses += r.r_class_losses;
    }
    tally.report(total.clean(), "cover retention n=" + std::to_string(n) + " m=" + std::to_string(m) +
                                    " k=" + std::to_string(k) + " mu=" + std::to_string(mu) +
                                    " pc=" + std::to_string(p_c).substr(0, 3) + " over " + std::to_string(runs) +
                                    "x" + std::to_string(generations) + " generations (violations: " +
                                    std::to_string(total.capped_min_cover_decreases) + "/" +
                                    std::to_string(total.covered_count_decreases) + "/" +
                                    std::to_string(total.r_class_losses) + ")");
}

} // namespace

bool run_invariant_checks(std::ostream& log)
{
    Tally tally{log};
    check_fronts(tally);
    check_lattices(tally);
    check_retention(tally, 8, 2, 2, 32, 0.0, 5, 200);
    check_retention(tally, 8, 2, 2, 32, 0.9, 5, 200);
    check_retention(tally, 12, 2, 2, 64, 0.5, 3, 200);
    check_retention(tally, 8, 4, 2, 64, 0.0, 2, 30);
    return tally.ok;
}

} // namespace nsga3oj
