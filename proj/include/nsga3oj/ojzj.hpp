#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nsga3oj/bitcore.hpp"
#include "nsga3oj/dominance.hpp"

namespace nsga3oj {

/// Per-block class of a Pareto-optimal point: -1 all-zeros block, +1
/// all-ones block, 0 middle plateau.
using RVector = std::vector<int>;

/// The m-objective OneJumpZeroJump instance with gap size k on n bits.
/// Objectives (2j, 2j+1) (0-based) read only block j, which occupies bits
/// [j*block_len, (j+1)*block_len).
class OjzjInstance {
public:
    /// Throws UsageError unless m is even and >= 2, n is divisible by m/2, and
    /// 2 <= k <= 2n/m.
    OjzjInstance(std::size_t n, std::size_t m, std::size_t k);

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return m_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t blocks() const noexcept { return m_ / 2; }
    std::size_t block_len() const noexcept { return block_len_; }
    Objective f_max() const noexcept { return static_cast<Objective>(k_ + block_len_); }

    /// True when the closed-form Pareto front applies (k <= n/m).
    bool front_formula_applies() const noexcept { return 2 * k_ <= block_len_; }
    /// (2n/m - 2k + 3)^(m/2); throws RegimeError outside k <= n/m.
    std::size_t front_size() const;

    friend bool operator==(const OjzjInstance&, const OjzjInstance&) = default;

private:
    std::size_t n_;
    std::size_t m_;
    std::size_t k_;
    std::size_t block_len_;
};

/// (f_odd, f_even) of one block holding `ones_in_block` ones.
std::pair<Objective, Objective> block_objectives(const OjzjInstance& instance,
                                                 std::size_t ones_in_block);

ObjectiveVector evaluate(const OjzjInstance& instance, const Genome& x);

/// Classification of a Pareto-front vector; throws UsageError if some block
/// pair is not on the front.
RVector r_vector(const OjzjInstance& instance, const ObjectiveVector& v);

/// Closed-form front, sorted lexicographically. Throws RegimeError if k > n/m.
std::vector<ObjectiveVector> pareto_front(const OjzjInstance& instance);

/// Largest genome length brute_force_front will enumerate.
inline constexpr std::size_t kBruteForceMaxBits = 24;

/// Enumerates all 2^n genomes and keeps the vectors no other vector weakly
/// dominates. Sorted lexicographically. Throws UsageError for n > 24.
std::vector<ObjectiveVector> brute_force_front(const OjzjInstance& instance);

/// r-vector of x if x is Pareto-optimal, nullopt otherwise.
std::optional<RVector> genome_class(const OjzjInstance& instance, const Genome& x);

/// A search point paired with its fitness.
struct Individual {
    Genome genome;
    ObjectiveVector fitness;
};

Individual make_individual(const OjzjInstance& instance, Genome genome);

} // namespace nsga3oj
