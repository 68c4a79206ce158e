#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nsga3oj {

/// Seeded random source with a pinned generator (std::mt19937_64, whose
/// output sequence is fixed by the standard) and portable derived draws.
/// The std distributions are avoided on purpose: their output is
/// implementation-defined.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    /// Stream for trial `index` of an experiment seeded with `master_seed`.
    static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t index);
    static std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) on the 2^-53 grid.
    double uniform01();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Fixed-length bit string, packed 64 bits per word. Bit i lives in word i/64
/// at position i%64; unused tail bits are always zero.
class Genome {
public:
    Genome() = default;
    /// All-zeros genome of length n.
    explicit Genome(std::size_t n);

    /// Parses '0'/'1' characters; spaces and underscores are ignored so that
    /// blocks can be written as "1111 0000".
    static Genome from_string(std::string_view bits);
    static Genome filled(std::size_t n, bool value);

    std::size_t size() const noexcept { return n_; }
    bool test(std::size_t i) const;
    void set(std::size_t i, bool value);
    void flip(std::size_t i);

    std::size_t ones() const noexcept;
    std::size_t zeros() const noexcept { return n_ - ones(); }
    /// Ones among positions [begin, begin + len).
    std::size_t ones_in_range(std::size_t begin, std::size_t len) const;

    Genome slice(std::size_t begin, std::size_t len) const;
    Genome complement() const;
    std::string to_string() const;

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    friend bool operator==(const Genome&, const Genome&) = default;

private:
    friend Genome uniform_random_genome(RandomStream&, std::size_t);
    friend Genome uniform_crossover(const Genome&, const Genome&, RandomStream&);

    void clear_tail() noexcept;

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

std::size_t ones(const Genome& x);
std::size_t zeros(const Genome& x);

/// Throws UsageError on length mismatch.
std::size_t hamming(const Genome& x, const Genome& y);

/// Block `j` (0-based) of `block_len` contiguous bits: positions
/// [j*block_len, (j+1)*block_len). x.size() must be a multiple of block_len.
Genome block(const Genome& x, std::size_t j, std::size_t block_len);

Genome uniform_random_genome(RandomStream& rng, std::size_t n);

/// Flips each bit independently with probability 1/n. Returns a fresh genome.
Genome standard_bit_mutation(const Genome& y, RandomStream& rng);

/// Each position independently taken from `a` or `b` with probability 1/2.
Genome uniform_crossover(const Genome& a, const Genome& b, RandomStream& rng);

} // namespace nsga3oj
