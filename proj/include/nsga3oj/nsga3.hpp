#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nsga3oj/bitcore.hpp"
#include "nsga3oj/metrics.hpp"
#include "nsga3oj/ojzj.hpp"

namespace nsga3oj {

// ---------------------------------------------------------------------------
// Reference points
// ---------------------------------------------------------------------------

/// Point (a_1/p, ..., a_m/p) of the simplex lattice, kept as the integer
/// composition (a_1, ..., a_m) of p so that exact identities can be checked.
struct ReferencePoint {
    std::vector<int> parts;
    int p = 1;

    double coordinate(std::size_t i) const { return static_cast<double>(parts.at(i)) / p; }
    std::vector<double> coordinates() const;
    /// Sum of a_i equals p, checked in integers.
    bool sums_to_one() const;
};

/// All C(p+m-1, m-1) compositions of p into m non-negative parts, in
/// lexicographic order of the parts.
class ReferenceSet {
public:
    ReferenceSet(std::size_t m, std::size_t p);

    std::size_t m() const noexcept { return m_; }
    std::size_t p() const noexcept { return p_; }
    std::size_t size() const noexcept { return points_.size(); }

    const ReferencePoint& operator[](std::size_t i) const { return points_.at(i); }
    const std::vector<ReferencePoint>& points() const noexcept { return points_; }
    /// Coordinates of point i as doubles.
    std::span<const double> direction(std::size_t i) const { return {coords_.data() + i * m_, m_}; }

private:
    void emit_compositions(std::vector<int>& parts, std::size_t pos, int remaining);

    std::size_t m_;
    std::size_t p_;
    std::vector<ReferencePoint> points_;
    std::vector<double> coords_;
};

/// C(p+m-1, m-1); throws UsageError on overflow.
std::size_t reference_point_count(std::size_t m, std::size_t p);

/// Throws UsageError if m < 2, p < 1, or the lattice would exceed
/// kMaxReferencePoints points.
ReferenceSet generate_reference_points(std::size_t m, std::size_t p);

inline constexpr std::size_t kMaxReferencePoints = 20'000'000;

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

inline constexpr double kDenominatorFloor = 1e-9;
inline constexpr double kTieTolerance = 1e-9;

/// Ideal/extreme points over every search point observed so far. The nadir
/// estimate is y_nad_j = max(y_max_j, eps_nad).
class NormalizationState {
public:
    NormalizationState(std::size_t m, double eps_nad);

    std::size_t m() const noexcept { return m_; }
    double eps_nad() const noexcept { return eps_nad_; }
    bool empty() const noexcept { return empty_; }
    const ObjectiveVector& y_min() const noexcept { return y_min_; }
    const ObjectiveVector& y_max() const noexcept { return y_max_; }
    std::vector<double> y_nad() const;

    void observe(const ObjectiveVector& v);
    void observe(std::span<const ObjectiveVector> vectors);

    /// (v_j - y_min_j) / (y_nad_j - y_min_j), denominator floored at 1e-9.
    /// Throws UsageError before any observation and std::logic_error if a
    /// denominator is not a positive finite number.
    std::vector<double> normalize(const ObjectiveVector& v) const;

private:
    std::size_t m_;
    double eps_nad_;
    bool empty_ = true;
    ObjectiveVector y_min_;
    ObjectiveVector y_max_;
};

NormalizationState update_extremes(NormalizationState state, std::span<const ObjectiveVector> vectors);

// ---------------------------------------------------------------------------
// Association and survival selection
// ---------------------------------------------------------------------------

/// Distance from `point` to the line through the origin and `direction`.
double perpendicular_distance(std::span<const double> point, std::span<const double> direction);

struct Association {
    std::size_t ref = 0;
    double distance = 0.0;
};

/// Nearest reference line for each point. Distances within kTieTolerance of
/// the minimum are ties and are broken uniformly at random, with one draw per
/// distinct point so that equal points share a reference point.
std::vector<Association> associate(std::span<const std::vector<double>> points, const ReferenceSet& refs,
                                   RandomStream& rng);

/// Chooses mu - |accepted| members of the critical layer: niching over the
/// reference points until mu/2 critical members are taken, then a uniform
/// fill. Returns indices into `critical` in selection order.
/// Requires |accepted| < mu <= |accepted| + |critical|.
std::vector<std::size_t> survival_select(std::span<const ObjectiveVector> accepted,
                                         std::span<const ObjectiveVector> critical, const ReferenceSet& refs,
                                         const NormalizationState& normalization, RandomStream& rng,
                                         std::size_t mu);

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

struct AlgorithmParams {
    std::size_t mu = 0;
    double p_c = 0.0;
    std::size_t lattice_p = 1;
    double eps_nad = 1.0;
    std::size_t max_generations = 0;

    /// Throws UsageError unless mu is even and positive, 0 <= p_c < 1,
    /// lattice_p >= 1 and eps_nad > 0.
    void validate() const;
};

/// Smallest integer p with p >= 2 * m^(3/2) * f_max.
std::size_t theorem_lattice_p(const OjzjInstance& instance);

/// lattice_p >= 2 m^(3/2) f_max and eps_nad >= f_max.
bool in_theorem_regime(const OjzjInstance& instance, const AlgorithmParams& params);

/// (1 + 2n/m)^(m/2) <= mu/2.
bool population_bound_holds(const OjzjInstance& instance, std::size_t mu);

/// P_0: mu independent uniformly random genomes drawn in order from `rng`.
std::vector<Genome> initial_population(RandomStream& rng, std::size_t n, std::size_t mu);

struct GenerationReport {
    /// Index of the population just produced.
    std::size_t generation = 0;
    std::size_t merged_size = 0;
    std::size_t first_layer_size = 0;
    /// 1-based rank of the layer survival selection chose from.
    std::size_t critical_rank = 0;
    std::size_t accepted_whole = 0;
    std::size_t from_critical = 0;
    JumpCounters offspring_jumps;
};

class Engine {
public:
    /// Uniformly random initial population. If `refs` is null the lattice is
    /// generated from params.lattice_p.
    Engine(OjzjInstance instance, AlgorithmParams params, std::shared_ptr<const ReferenceSet> refs,
           RandomStream rng);
    /// Explicit initial population of exactly mu genomes.
    Engine(OjzjInstance instance, AlgorithmParams params, std::shared_ptr<const ReferenceSet> refs,
           RandomStream rng, std::vector<Genome> initial);

    GenerationReport step();

    const OjzjInstance& instance() const noexcept { return instance_; }
    const AlgorithmParams& params() const noexcept { return params_; }
    const ReferenceSet& refs() const noexcept { return *refs_; }
    const std::vector<Individual>& population() const noexcept { return population_; }
    const NormalizationState& normalization() const noexcept { return normalization_; }
    std::size_t generation() const noexcept { return generation_; }
    JumpCounters jump_counters() const noexcept { return jumps_; }

    /// Offspring of the most recent step and their pre-mutation genomes,
    /// index-aligned.
    const std::vector<Individual>& last_offspring() const noexcept { return offspring_; }
    const std::vector<Genome>& last_intermediates() const noexcept { return intermediates_; }

private:
    void init(std::vector<Genome> initial);
    void count_jumps(const Genome& intermediate, const Genome& child, JumpCounters& counters) const;

    OjzjInstance instance_;
    AlgorithmParams params_;
    std::shared_ptr<const ReferenceSet> refs_;
    RandomStream rng_;
    NormalizationState normalization_;
    std::vector<Individual> population_;
    std::vector<Individual> offspring_;
    std::vector<Genome> intermediates_;
    std::size_t generation_ = 0;
    JumpCounters jumps_;
};

struct RunOutcome {
    /// First t with every target vector covered in P_t; empty if the budget
    /// ran out.
    std::optional<std::size_t> generations;
    std::size_t generations_run = 0;
    std::size_t final_covered = 0;
};

/// Runs until P_t covers `target_front` or params.max_generations steps have
/// been taken. Coverage of P_0 is checked before the first step. When
/// `trajectory` is given, one record per population P_0, P_1, ... is added.
RunOutcome run_until_covered(const OjzjInstance& instance, const AlgorithmParams& params,
                             std::shared_ptr<const ReferenceSet> refs, RandomStream rng,
                             std::span<const ObjectiveVector> target_front, Trajectory* trajectory = nullptr);

/// Runs exactly `generations` steps regardless of coverage, recording every
/// population into the returned trajectory.
Trajectory run_fixed_generations(const OjzjInstance& instance, const AlgorithmParams& params,
                                 std::shared_ptr<const ReferenceSet> refs, RandomStream rng,
                                 std::span<const ObjectiveVector> target_front, std::size_t generations);

} // namespace nsga3oj
