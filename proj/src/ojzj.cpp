#include "nsga3oj/ojzj.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "nsga3oj/errors.hpp"

namespace nsga3oj {

OjzjInstance::OjzjInstance(std::size_t n, std::size_t m, std::size_t k) : n_(n), m_(m), k_(k), block_len_(0)
{
    if (m < 2 || m % 2 != 0) {
        throw UsageError("OjzjInstance: m must be even and >= 2 (got m=" + std::to_string(m) + ")");
    }
    if (n == 0 || n % (m / 2) != 0) {
        throw UsageError("OjzjInstance: n must be a positive multiple of m/2 (got n=" + std::to_string(n) +
                         ", m=" + std::to_string(m) + ")");
    }
    block_len_ = 2 * n / m;
    if (k < 2 || k > block_len_) {
        throw UsageError("OjzjInstance: gap size must satisfy 2 <= k <= 2n/m = " + std::to_string(block_len_) +
                         " (got k=" + std::to_string(k) + ")");
    }
}

std::size_t OjzjInstance::front_size() const
{
    if (!front_formula_applies()) {
        throw RegimeError("front size formula requires k <= n/m (got n=" + std::to_string(n_) +
                          ", m=" + std::to_string(m_) + ", k=" + std::to_string(k_) + ")");
    }
    std::size_t per_block = block_len_ - 2 * k_ + 3;
    std::size_t size = 1;
    for (std::size_t j = 0; j < blocks(); ++j) {
        size *= per_block;
    }
    return size;
}

std::pair<Objective, Objective> block_objectives(const OjzjInstance& instance, std::size_t ones_in_block)
{
    const std::size_t len = instance.block_len();
    const std::size_t k = instance.k();
    if (ones_in_block > len) {
        throw UsageError("block_objectives: " + std::to_string(ones_in_block) + " ones exceed block length " +
                         std::to_string(len));
    }
    const auto piece = [&](std::size_t count) -> Objective {
        if (count <= len - k || count == len) {
            return static_cast<Objective>(k + count);
        }
        return static_cast<Objective>(len - count);
    };
    return {piece(ones_in_block), piece(len - ones_in_block)};
}

ObjectiveVector evaluate(const OjzjInstance& instance, const Genome& x)
{
    if (x.size() != instance.n()) {
        throw UsageError("evaluate: genome length " + std::to_string(x.size()) + " != n = " +
                         std::to_string(instance.n()));
    }
    ObjectiveVector v(instance.m());
    const std::size_t len = instance.block_len();
    for (std::size_t j = 0; j < instance.blocks(); ++j) {
        auto [odd, even] = block_objectives(instance, x.ones_in_range(j * len, len));
        v[2 * j] = odd;
        v[2 * j + 1] = even;
    }
    return v;
}

RVector r_vector(const OjzjInstance& instance, const ObjectiveVector& v)
{
    if (v.size() != instance.m()) {
        throw UsageError("r_vector: vector has " + std::to_string(v.size()) + " entries, expected " +
                         std::to_string(instance.m()));
    }
    const auto k = static_cast<Objective>(instance.k());
    const auto len = static_cast<Objective>(instance.block_len());
    RVector r(instance.blocks());
    for (std::size_t j = 0; j < instance.blocks(); ++j) {
        const Objective first = v[2 * j];
        const Objective second = v[2 * j + 1];
        if (first + second != 2 * k + len) {
            throw UsageError("r_vector: block " + std::to_string(j) + " pair is not on the Pareto front");
        }
        if (first == k) {
            r[j] = -1;
        } else if (first == len + k) {
            r[j] = 1;
        } else if (first >= 2 * k && first <= len) {
            r[j] = 0;
        } else {
            throw UsageError("r_vector: block " + std::to_string(j) + " value " + std::to_string(first) +
                             " is not on the Pareto front");
        }
    }
    return r;
}

std::vector<ObjectiveVector> pareto_front(const OjzjInstance& instance)
{
    const std::size_t expected = instance.front_size();
    const auto k = static_cast<Objective>(instance.k());
    const auto len = static_cast<Objective>(instance.block_len());

    std::vector<Objective> levels;
    levels.push_back(k);
    for (Objective l = 2 * k; l <= len; ++l) {
        levels.push_back(l);
    }
    levels.push_back(len + k);

    // odometer over the m/2 block levels; last block varies fastest, which
    // yields lexicographic order because the first coordinate of each pair
    // increases with the level.
    std::vector<ObjectiveVector> front;
    front.reserve(expected);
    std::vector<std::size_t> digit(instance.blocks(), 0);
    for (;;) {
        ObjectiveVector v(instance.m());
        for (std::size_t j = 0; j < instance.blocks(); ++j) {
            v[2 * j] = levels[digit[j]];
            v[2 * j + 1] = 2 * k + len - levels[digit[j]];
        }
        front.push_back(std::move(v));
        std::size_t pos = instance.blocks();
        while (pos > 0) {
            --pos;
            if (++digit[pos] < levels.size()) {
                break;
            }
            digit[pos] = 0;
            if (pos == 0) {
                return front;
            }
        }
    }
}

std::vector<ObjectiveVector> brute_force_front(const OjzjInstance& instance)
{
    const std::size_t n = instance.n();
    if (n > kBruteForceMaxBits) {
        throw UsageError("brute_force_front: n = " + std::to_string(n) + " exceeds the enumeration limit of " +
                         std::to_string(kBruteForceMaxBits));
    }
    std::set<ObjectiveVector> seen;
    Genome x(n);
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t code = 0; code < total; ++code) {
        for (std::size_t i = 0; i < n; ++i) {
            x.set(i, (code >> i) & 1ULL);
        }
        seen.insert(evaluate(instance, x));
    }
    std::vector<ObjectiveVector> front;
    for (const auto& v : seen) {
        const bool beaten = std::any_of(seen.begin(), seen.end(), [&](const ObjectiveVector& u) {
            return u != v && weakly_dominates(u, v);
        });
        if (!beaten) {
            front.push_back(v);
        }
    }
    return front;
}

std::optional<RVector> genome_class(const OjzjInstance& instance, const Genome& x)
{
    if (x.size() != instance.n()) {
        return std::nullopt;
    }
    const std::size_t len = instance.block_len();
    const std::size_t k = instance.k();
    RVector r(instance.blocks());
    for (std::size_t j = 0; j < instance.blocks(); ++j) {
        const std::size_t o = x.ones_in_range(j * len, len);
        if (o == 0) {
            r[j] = -1;
        } else if (o == len) {
            r[j] = 1;
        } else if (o >= k && o <= len - k) {
            r[j] = 0;
        } else {
            return std::nullopt;
        }
    }
    return r;
}

Individual make_individual(const OjzjInstance& instance, Genome genome)
{
    ObjectiveVector fitness = evaluate(instance, genome);
    return Individual{std::move(genome), std::move(fitness)};
}

} // namespace nsga3oj
