#include "nsga3oj/nsga3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nsga3oj/dominance.hpp"
#include "nsga3oj/errors.hpp"

namespace nsga3oj {

// ---------------------------------------------------------------------------
// Reference points

std::vector<double> ReferencePoint::coordinates() const
{
    std::vector<double> c(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        c[i] = coordinate(i);
    }
    return c;
}

bool ReferencePoint::sums_to_one() const
{
    long long sum = 0;
    for (int a : parts) {
        if (a < 0) {
            return false;
        }
        sum += a;
    }
    return sum == p;
}

std::size_t reference_point_count(std::size_t m, std::size_t p)
{
    if (m < 1) {
        return 0;
    }
    // C(p+m-1, m-1) built incrementally; each partial product is itself a
    // binomial coefficient so the division is exact.
    std::size_t result = 1;
    const std::size_t r = m - 1;
    for (std::size_t i = 1; i <= r; ++i) {
        const std::size_t factor = p + i;
        if (result > std::numeric_limits<std::size_t>::max() / factor) {
            throw UsageError("reference_point_count: lattice size overflows");
        }
        result = result * factor / i;
    }
    return result;
}

ReferenceSet::ReferenceSet(std::size_t m, std::size_t p) : m_(m), p_(p)
{
    if (m < 2) {
        throw UsageError("ReferenceSet: m must be at least 2");
    }
    if (p < 1) {
        throw UsageError("ReferenceSet: p must be at least 1");
    }
    if (p > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
        throw UsageError("ReferenceSet: p too large");
    }
    const std::size_t count = reference_point_count(m, p);
    if (count > kMaxReferencePoints) {
        throw UsageError("ReferenceSet: lattice with m=" + std::to_string(m) + ", p=" + std::to_string(p) +
                         " has " + std::to_string(count) + " points (limit " +
                         std::to_string(kMaxReferencePoints) + ")");
    }
    points_.reserve(count);
    coords_.reserve(count * m);

    std::vector<int> parts(m, 0);
    emit_compositions(parts, 0, static_cast<int>(p));
    if (points_.size() != count) {
        throw std::logic_error("ReferenceSet: enumerated " + std::to_string(points_.size()) +
                               " points, expected " + std::to_string(count));
    }
}

void ReferenceSet::emit_compositions(std::vector<int>& parts, std::size_t pos, int remaining)
{
    if (pos + 1 == m_) {
        parts[pos] = remaining;
        ReferencePoint rp{parts, static_cast<int>(p_)};
        for (std::size_t i = 0; i < m_; ++i) {
            coords_.push_back(rp.coordinate(i));
        }
        points_.push_back(std::move(rp));
        return;
    }
    for (int a = 0; a <= remaining; ++a) {
        parts[pos] = a;
        emit_compositions(parts, pos + 1, remaining - a);
    }
}

ReferenceSet generate_reference_points(std::size_t m, std::size_t p) { return ReferenceSet(m, p); }

// ---------------------------------------------------------------------------
// Normalization

NormalizationState::NormalizationState(std::size_t m, double eps_nad)
    : m_(m), eps_nad_(eps_nad), y_min_(m, 0), y_max_(m, 0)
{
    if (!(eps_nad > 0.0)) {
        throw UsageError("NormalizationState: eps_nad must be positive");
    }
}

std::vector<double> NormalizationState::y_nad() const
{
    std::vector<double> nad(m_);
    for (std::size_t j = 0; j < m_; ++j) {
        nad[j] = std::max(static_cast<double>(y_max_[j]), eps_nad_);
    }
    return nad;
}

void NormalizationState::observe(const ObjectiveVector& v)
{
    if (v.size() != m_) {
        throw UsageError("NormalizationState::observe: dimension mismatch");
    }
    if (empty_) {
        y_min_ = v;
        y_max_ = v;
        empty_ = false;
        return;
    }
    for (std::size_t j = 0; j < m_; ++j) {
        y_min_[j] = std::min(y_min_[j], v[j]);
        y_max_[j] = std::max(y_max_[j], v[j]);
    }
}

void NormalizationState::observe(std::span<const ObjectiveVector> vectors)
{
    for (const auto& v : vectors) {
        observe(v);
    }
}

std::vector<double> NormalizationState::normalize(const ObjectiveVector& v) const
{
    if (empty_) {
        throw UsageError("NormalizationState::normalize: no point observed yet");
    }
    if (v.size() != m_) {
        throw UsageError("NormalizationState::normalize: dimension mismatch");
    }
    std::vector<double> out(m_);
    for (std::size_t j = 0; j < m_; ++j) {
        const double lo = static_cast<double>(y_min_[j]);
        const double nad = std::max(static_cast<double>(y_max_[j]), eps_nad_);
        const double den = std::max(nad - lo, kDenominatorFloor);
        if (!(den > 0.0) || !std::isfinite(den)) {
            throw std::logic_error("normalize: degenerate denominator in objective " + std::to_string(j));
        }
        out[j] = (static_cast<double>(v[j]) - lo) / den;
    }
    return out;
}

NormalizationState update_extremes(NormalizationState state, std::span<const ObjectiveVector> vectors)
{
    state.observe(vectors);
    return state;
}

// ---------------------------------------------------------------------------
// Association

double perpendicular_distance(std::span<const double> point, std::span<const double> direction)
{
    if (point.size() != direction.size()) {
        throw UsageError("perpendicular_distance: dimension mismatch");
    }
    double dot = 0.0;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
        dot += point[i] * direction[i];
        norm2 += direction[i] * direction[i];
    }
    if (!(norm2 > 0.0)) {
        throw UsageError("perpendicular_distance: direction is the zero vector");
    }
    const double t = dot / norm2;
    double residual = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
        const double d = point[i] - t * direction[i];
        residual += d * d;
    }
    return std::sqrt(residual);
}

namespace {

struct NearestRef {
    std::size_t ref = 0;
    double distance = 0.0;
};

// Ties are drawn here, once per distinct point, so identical fitness vectors
// always share a reference point.
NearestRef nearest_ref(std::span<const double> point, const ReferenceSet& refs, RandomStream& rng)
{
    std::vector<double> dist(refs.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < refs.size(); ++r) {
        dist[r] = perpendicular_distance(point, refs.direction(r));
        best = std::min(best, dist[r]);
    }
    std::vector<std::size_t> tied;
    for (std::size_t r = 0; r < refs.size(); ++r) {
        if (dist[r] <= best + kTieTolerance) {
            tied.push_back(r);
        }
    }
    const std::size_t pick = tied.size() > 1 ? tied[rng.below(tied.size())] : tied.front();
    return {pick, dist[pick]};
}

} // namespace

std::vector<Association> associate(std::span<const std::vector<double>> points, const ReferenceSet& refs,
                                   RandomStream& rng)
{
    if (refs.size() == 0) {
        throw UsageError("associate: empty reference set");
    }
    std::map<std::vector<double>, NearestRef> cache;
    std::vector<Association> out;
    out.reserve(points.size());
    for (const auto& point : points) {
        if (point.size() != refs.m()) {
            throw UsageError("associate: point dimension does not match reference set");
        }
        auto it = cache.find(point);
        if (it == cache.end()) {
            it = cache.emplace(point, nearest_ref(point, refs, rng)).first;
        }
        out.push_back(Association{it->second.ref, it->second.distance});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Survival selection

std::vector<std::size_t> survival_select(std::span<const ObjectiveVector> accepted,
                                         std::span<const ObjectiveVector> critical, const ReferenceSet& refs,
                                         const NormalizationState& normalization, RandomStream& rng,
                                         std::size_t mu)
{
    if (mu == 0 || mu % 2 != 0) {
        throw UsageError("survival_select: mu must be even and positive");
    }
    if (accepted.size() >= mu || accepted.size() + critical.size() < mu) {
        throw UsageError("survival_select: need |accepted| < mu <= |accepted| + |critical| (got " +
                         std::to_string(accepted.size()) + ", " + std::to_string(mu) + ", " +
                         std::to_string(critical.size()) + ")");
    }

    std::vector<std::vector<double>> normalized;
    normalized.reserve(accepted.size() + critical.size());
    for (const auto& v : accepted) {
        normalized.push_back(normalization.normalize(v));
    }
    for (const auto& v : critical) {
        normalized.push_back(normalization.normalize(v));
    }
    const auto assoc = associate(normalized, refs, rng);

    // Only reference points with unselected critical members can ever yield a
    // selection. A point without candidates would merely be dropped when
    // drawn, and dropping it up front leaves every tie draw among the
    // remaining points uniform, so the output distribution is unchanged.
    struct Niche {
        std::size_t ref;
        std::size_t rho = 0;
        std::vector<std::size_t> candidates; // indices into `critical`
    };
    std::map<std::size_t, Niche> by_ref;
    for (std::size_t i = 0; i < critical.size(); ++i) {
        const std::size_t r = assoc[accepted.size() + i].ref;
        auto& niche = by_ref.try_emplace(r, Niche{r, 0, {}}).first->second;
        niche.candidates.push_back(i);
    }
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        if (auto it = by_ref.find(assoc[i].ref); it != by_ref.end()) {
            ++it->second.rho;
        }
    }
    std::vector<Niche> active;
    active.reserve(by_ref.size());
    for (auto& [r, niche] : by_ref) {
        active.push_back(std::move(niche));
    }

    const std::size_t half = mu / 2;
    std::vector<std::size_t> selected;
    std::vector<bool> taken(critical.size(), false);
    std::vector<std::size_t> ties;
    while (selected.size() < half && !active.empty()) {
        std::size_t min_rho = std::numeric_limits<std::size_t>::max();
        for (const auto& niche : active) {
            min_rho = std::min(min_rho, niche.rho);
        }
        ties.clear();
        for (std::size_t a = 0; a < active.size(); ++a) {
            if (active[a].rho == min_rho) {
                ties.push_back(a);
            }
        }
        const std::size_t slot = ties.size() > 1 ? ties[rng.below(ties.size())] : ties.front();
        Niche& niche = active[slot];

        double best = std::numeric_limits<double>::infinity();
        for (auto c : niche.candidates) {
            best = std::min(best, assoc[accepted.size() + c].distance);
        }
        ties.clear();
        for (std::size_t pos = 0; pos < niche.candidates.size(); ++pos) {
            if (assoc[accepted.size() + niche.candidates[pos]].distance <= best + kTieTolerance) {
                ties.push_back(pos);
            }
        }
        const std::size_t pos = ties.size() > 1 ? ties[rng.below(ties.size())] : ties.front();
        const std::size_t chosen = niche.candidates[pos];
        niche.candidates.erase(niche.candidates.begin() + static_cast<std::ptrdiff_t>(pos));
        selected.push_back(chosen);
        taken[chosen] = true;
        ++niche.rho;
        if (accepted.size() + selected.size() == mu) {
            return selected;
        }
        if (niche.candidates.empty()) {
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(slot));
        }
    }

    // Loop ended with mu/2 critical members taken and slots left over. The
    // fill count mu - |accepted| - mu/2 is only reachable when |accepted| <
    // mu/2; otherwise the early return above fires first.
    if (selected.size() != half || accepted.size() + half > mu) {
        throw std::logic_error("survival_select: niching ended in an unreachable state (selected " +
                               std::to_string(selected.size()) + ", accepted " + std::to_string(accepted.size()) +
                               ", mu " + std::to_string(mu) + ")");
    }
    const std::size_t fill = mu - accepted.size() - half;
    std::vector<std::size_t> remaining;
    remaining.reserve(critical.size() - selected.size());
    for (std::size_t i = 0; i < critical.size(); ++i) {
        if (!taken[i]) {
            remaining.push_back(i);
        }
    }
    if (fill > remaining.size()) {
        throw std::logic_error("survival_select: not enough critical members left for the uniform fill");
    }
    // partial Fisher-Yates
    for (std::size_t i = 0; i < fill; ++i) {
        const std::size_t j = i + rng.below(remaining.size() - i);
        std::swap(remaining[i], remaining[j]);
        selected.push_back(remaining[i]);
    }
    return selected;
}

// ---------------------------------------------------------------------------
// Parameters

void AlgorithmParams::validate() const
{
    if (mu == 0 || mu % 2 != 0) {
        throw UsageError("population size mu must be even and positive (got " + std::to_string(mu) + ")");
    }
    if (!(p_c >= 0.0 && p_c < 1.0)) {
        throw UsageError("crossover probability must lie in [0, 1)");
    }
    if (lattice_p < 1) {
        throw UsageError("lattice parameter p must be at least 1");
    }
    if (!(eps_nad > 0.0) || !std::isfinite(eps_nad)) {
        throw UsageError("eps_nad must be a positive finite number");
    }
}

std::size_t theorem_lattice_p(const OjzjInstance& instance)
{
    // p >= 2 m^(3/2) f_max  <=>  p^2 >= 4 m^3 f_max^2, evaluated in integers
    const std::uint64_t m = instance.m();
    const auto f = static_cast<std::uint64_t>(instance.f_max());
    constexpr std::uint64_t limit = std::numeric_limits<std::uint32_t>::max();
    if (m > 1000 || f > 60'000) {
        throw UsageError("theorem_lattice_p: instance too large");
    }
    const std::uint64_t target = 4 * m * m * m * f * f;
    auto p = static_cast<std::uint64_t>(std::floor(std::sqrt(static_cast<double>(target))));
    while (p <= limit && p * p < target) {
        ++p;
    }
    while (p > 0 && (p - 1) * (p - 1) >= target) {
        --p;
    }
    return static_cast<std::size_t>(p);
}

bool in_theorem_regime(const OjzjInstance& instance, const AlgorithmParams& params)
{
    return params.lattice_p >= theorem_lattice_p(instance) &&
           params.eps_nad >= static_cast<double>(instance.f_max());
}

bool population_bound_holds(const OjzjInstance& instance, std::size_t mu)
{
    std::size_t bound = 1;
    for (std::size_t j = 0; j < instance.blocks(); ++j) {
        if (bound > mu) {
            return false;
        }
        bound *= 1 + instance.block_len();
    }
    return bound <= mu / 2;
}

// ---------------------------------------------------------------------------
// Engine

std::vector<Genome> initial_population(RandomStream& rng, std::size_t n, std::size_t mu)
{
    std::vector<Genome> initial;
    initial.reserve(mu);
    for (std::size_t i = 0; i < mu; ++i) {
        initial.push_back(uniform_random_genome(rng, n));
    }
    return initial;
}

Engine::Engine(OjzjInstance instance, AlgorithmParams params, std::shared_ptr<const ReferenceSet> refs,
               RandomStream rng)
    : instance_(instance),
      params_(params),
      refs_(std::move(refs)),
      rng_(std::move(rng)),
      normalization_(instance.m(), params.eps_nad)
{
    params_.validate();
    init(initial_population(rng_, instance_.n(), params_.mu));
}

Engine::Engine(OjzjInstance instance, AlgorithmParams params, std::shared_ptr<const ReferenceSet> refs,
               RandomStream rng, std::vector<Genome> initial)
    : instance_(instance),
      params_(params),
      refs_(std::move(refs)),
      rng_(std::move(rng)),
      normalization_(instance.m(), params.eps_nad)
{
    params_.validate();
    if (initial.size() != params_.mu) {
        throw UsageError("Engine: initial population has " + std::to_string(initial.size()) +
                         " members, expected mu = " + std::to_string(params_.mu));
    }
    init(std::move(initial));
}

void Engine::init(std::vector<Genome> initial)
{
    if (!refs_) {
        refs_ = std::make_shared<const ReferenceSet>(instance_.m(), params_.lattice_p);
    }
    if (refs_->m() != instance_.m()) {
        throw UsageError("Engine: reference set dimension does not match the number of objectives");
    }
    population_.clear();
    population_.reserve(params_.mu);
    for (auto& g : initial) {
        population_.push_back(make_individual(instance_, std::move(g)));
        normalization_.observe(population_.back().fitness);
    }
}

void Engine::count_jumps(const Genome& intermediate, const Genome& child, JumpCounters& counters) const
{
    const std::size_t len = instance_.block_len();
    const std::size_t k = instance_.k();
    bool jump = false;
    bool valley = false;
    for (std::size_t j = 0; j < instance_.blocks(); ++j) {
        const std::size_t after = child.ones_in_range(j * len, len);
        if (after != 0 && after != len) {
            continue;
        }
        const std::size_t before = intermediate.ones_in_range(j * len, len);
        if (before == 0 || before == len) {
            continue;
        }
        jump = true;
        if ((after == len && before == len - k) || (after == 0 && before == k)) {
            valley = true;
        }
    }
    counters.jump_events += jump ? 1 : 0;
    counters.valley_jumps += valley ? 1 : 0;
}

GenerationReport Engine::step()
{
    const std::size_t mu = params_.mu;
    GenerationReport report;

    offspring_.clear();
    intermediates_.clear();
    offspring_.reserve(mu);
    intermediates_.reserve(mu);
    for (std::size_t i = 0; i < mu / 2; ++i) {
        const Genome& a1 = population_[rng_.below(mu)].genome;
        const Genome& a2 = population_[rng_.below(mu)].genome;
        Genome y1;
        Genome y2;
        if (rng_.uniform01() < params_.p_c) {
            y1 = uniform_crossover(a1, a2, rng_);
            y2 = uniform_crossover(a1, a2, rng_);
        } else {
            y1 = a1;
            y2 = a2;
        }
        Genome z1 = standard_bit_mutation(y1, rng_);
        Genome z2 = standard_bit_mutation(y2, rng_);
        count_jumps(y1, z1, report.offspring_jumps);
        count_jumps(y2, z2, report.offspring_jumps);
        offspring_.push_back(make_individual(instance_, std::move(z1)));
        offspring_.push_back(make_individual(instance_, std::move(z2)));
        intermediates_.push_back(std::move(y1));
        intermediates_.push_back(std::move(y2));
    }
    for (const auto& child : offspring_) {
        normalization_.observe(child.fitness);
    }
    jumps_.jump_events += report.offspring_jumps.jump_events;
    jumps_.valley_jumps += report.offspring_jumps.valley_jumps;

    std::vector<Individual> merged;
    merged.reserve(2 * mu);
    merged.insert(merged.end(), population_.begin(), population_.end());
    merged.insert(merged.end(), offspring_.begin(), offspring_.end());
    report.merged_size = merged.size();

    std::vector<ObjectiveVector> fitness;
    fitness.reserve(merged.size());
    for (const auto& ind : merged) {
        fitness.push_back(ind.fitness);
    }
    const RankedPopulation ranked = non_dominated_sort(fitness);
    report.first_layer_size = ranked.layers.front().size();

    std::size_t critical = 0;
    std::size_t below = 0;
    while (below + ranked.layers[critical].size() < mu) {
        below += ranked.layers[critical].size();
        ++critical;
    }
    report.critical_rank = critical + 1;

    std::vector<Individual> next;
    next.reserve(mu);
    std::vector<ObjectiveVector> accepted;
    accepted.reserve(below);
    for (std::size_t layer = 0; layer < critical; ++layer) {
        for (auto idx : ranked.layers[layer]) {
            next.push_back(merged[idx]);
            accepted.push_back(merged[idx].fitness);
        }
    }
    const auto& critical_layer = ranked.layers[critical];
    std::vector<ObjectiveVector> critical_fitness;
    critical_fitness.reserve(critical_layer.size());
    for (auto idx : critical_layer) {
        critical_fitness.push_back(merged[idx].fitness);
    }
    const auto chosen = survival_select(accepted, critical_fitness, *refs_, normalization_, rng_, mu);
    for (auto c : chosen) {
        next.push_back(merged[critical_layer[c]]);
    }
    if (next.size() != mu) {
        throw std::logic_error("Engine::step: next population has " + std::to_string(next.size()) +
                               " members, expected " + std::to_string(mu));
    }
    report.accepted_whole = accepted.size();
    report.from_critical = chosen.size();

    population_ = std::move(next);
    ++generation_;
    report.generation = generation_;
    return report;
}

// ---------------------------------------------------------------------------
// Runs

namespace {

std::size_t covered_count(std::span<const Individual> population, std::span<const ObjectiveVector> target)
{
    const auto covers = cover_numbers(population, target);
    return static_cast<std::size_t>(
        std::count_if(covers.begin(), covers.end(), [](const auto& entry) { return entry.second > 0; }));
}

} // namespace

RunOutcome run_until_covered(const OjzjInstance& instance, const AlgorithmParams& params,
                             std::shared_ptr<const ReferenceSet> refs, RandomStream rng,
                             std::span<const ObjectiveVector> target_front, Trajectory* trajectory)
{
    Engine engine(instance, params, std::move(refs), std::move(rng));
    const std::size_t cap = cover_cap(instance, params.mu);
    // distinct targets, so "covered" means every entry has a positive count
    const std::size_t target_size = cover_numbers({}, target_front).size();
    RunOutcome outcome;
    for (;;) {
        const std::size_t t = engine.generation();
        std::size_t covered = 0;
        if (trajectory != nullptr) {
            auto rec = observe_generation(instance, target_front, engine.population(), t, cap,
                                          engine.jump_counters());
            covered = rec.covered_front_count;
            trajectory->record(std::move(rec));
        } else {
            covered = covered_count(engine.population(), target_front);
        }
        outcome.final_covered = covered;
        outcome.generations_run = t;
        if (covered == target_size) {
            outcome.generations = t;
            return outcome;
        }
        if (t >= params.max_generations) {
            return outcome;
        }
        engine.step();
    }
}

Trajectory run_fixed_generations(const OjzjInstance& instance, const AlgorithmParams& params,
                                 std::shared_ptr<const ReferenceSet> refs, RandomStream rng,
                                 std::span<const ObjectiveVector> target_front, std::size_t generations)
{
    Engine engine(instance, params, std::move(refs), std::move(rng));
    const std::size_t cap = cover_cap(instance, params.mu);
    Trajectory trajectory;
    for (;;) {
        trajectory.record(observe_generation(instance, target_front, engine.population(), engine.generation(), cap,
                                             engine.jump_counters()));
        if (engine.generation() >= generations) {
            return trajectory;
        }
        engine.step();
    }
}

} // namespace nsga3oj
