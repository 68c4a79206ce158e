#include "nsga3oj/bitcore.hpp"

#include <bit>

#include "nsga3oj/errors.hpp"

namespace nsga3oj {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// mask of the low `bits` bits, bits in [0, 64]
std::uint64_t low_mask(std::size_t bits)
{
    return bits >= kWordBits ? ~0ULL : ((1ULL << bits) - 1ULL);
}

} // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RandomStream::trial_seed(std::uint64_t master_seed, std::uint64_t index)
{
    return splitmix64(splitmix64(master_seed) ^ splitmix64(~index));
}

RandomStream RandomStream::for_trial(std::uint64_t master_seed, std::uint64_t index)
{
    return RandomStream(trial_seed(master_seed, index));
}

std::uint64_t RandomStream::below(std::uint64_t bound)
{
    if (bound == 0) {
        throw UsageError("RandomStream::below: bound must be positive");
    }
    // reject the short final bucket so that x % bound is exactly uniform
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= threshold) {
            return x % bound;
        }
    }
}

double RandomStream::uniform01()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Genome::Genome(std::size_t n) : n_(n), words_(word_count(n), 0) {}

Genome Genome::from_string(std::string_view bits)
{
    std::vector<bool> values;
    for (char c : bits) {
        if (c == '0' || c == '1') {
            values.push_back(c == '1');
        } else if (c != ' ' && c != '_') {
            throw UsageError(std::string("Genome::from_string: invalid character '") + c + "'");
        }
    }
    Genome g(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        g.set(i, values[i]);
    }
    return g;
}

Genome Genome::filled(std::size_t n, bool value)
{
    Genome g(n);
    if (value) {
        for (auto& w : g.words_) {
            w = ~0ULL;
        }
        g.clear_tail();
    }
    return g;
}

bool Genome::test(std::size_t i) const
{
    if (i >= n_) {
        throw UsageError("Genome::test: index out of range");
    }
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1ULL;
}

void Genome::set(std::size_t i, bool value)
{
    if (i >= n_) {
        throw UsageError("Genome::set: index out of range");
    }
    const std::uint64_t bit = 1ULL << (i % kWordBits);
    if (value) {
        words_[i / kWordBits] |= bit;
    } else {
        words_[i / kWordBits] &= ~bit;
    }
}

void Genome::flip(std::size_t i)
{
    if (i >= n_) {
        throw UsageError("Genome::flip: index out of range");
    }
    words_[i / kWordBits] ^= 1ULL << (i % kWordBits);
}

std::size_t Genome::ones() const noexcept
{
    std::size_t count = 0;
    for (auto w : words_) {
        count += static_cast<std::size_t>(std::popcount(w));
    }
    return count;
}

std::size_t Genome::ones_in_range(std::size_t begin, std::size_t len) const
{
    if (begin > n_ || len > n_ - begin) {
        throw UsageError("Genome::ones_in_range: range exceeds genome length");
    }
    std::size_t count = 0;
    std::size_t pos = begin;
    const std::size_t end = begin + len;
    while (pos < end) {
        const std::size_t offset = pos % kWordBits;
        const std::size_t take = std::min(kWordBits - offset, end - pos);
        const std::uint64_t w = (words_[pos / kWordBits] >> offset) & low_mask(take);
        count += static_cast<std::size_t>(std::popcount(w));
        pos += take;
    }
    return count;
}

Genome Genome::slice(std::size_t begin, std::size_t len) const
{
    if (begin > n_ || len > n_ - begin) {
        throw UsageError("Genome::slice: range exceeds genome length");
    }
    Genome out(len);
    for (std::size_t i = 0; i < len; ++i) {
        if (test(begin + i)) {
            out.set(i, true);
        }
    }
    return out;
}

Genome Genome::complement() const
{
    Genome out = *this;
    for (auto& w : out.words_) {
        w = ~w;
    }
    out.clear_tail();
    return out;
}

std::string Genome::to_string() const
{
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) {
        if (test(i)) {
            s[i] = '1';
        }
    }
    return s;
}

void Genome::clear_tail() noexcept
{
    if (!words_.empty() && n_ % kWordBits != 0) {
        words_.back() &= low_mask(n_ % kWordBits);
    }
}

std::size_t ones(const Genome& x) { return x.ones(); }

std::size_t zeros(const Genome& x) { return x.zeros(); }

std::size_t hamming(const Genome& x, const Genome& y)
{
    if (x.size() != y.size()) {
        throw UsageError("hamming: genomes differ in length (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    }
    std::size_t d = 0;
    const auto a = x.words();
    const auto b = y.words();
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
    }
    return d;
}

Genome block(const Genome& x, std::size_t j, std::size_t block_len)
{
    if (block_len == 0 || x.size() % block_len != 0) {
        throw UsageError("block: genome length must be a positive multiple of block_len");
    }
    if (j >= x.size() / block_len) {
        throw UsageError("block: index " + std::to_string(j) + " out of range for " +
                         std::to_string(x.size() / block_len) + " blocks");
    }
    return x.slice(j * block_len, block_len);
}

Genome uniform_random_genome(RandomStream& rng, std::size_t n)
{
    if (n == 0) {
        throw UsageError("uniform_random_genome: n must be positive");
    }
    Genome g(n);
    for (auto& w : g.words_) {
        w = rng.next_u64();
    }
    g.clear_tail();
    return g;
}

Genome standard_bit_mutation(const Genome& y, RandomStream& rng)
{
    Genome z = y;
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (rng.below(n) == 0) {
            z.flip(i);
        }
    }
    return z;
}

Genome uniform_crossover(const Genome& a, const Genome& b, RandomStream& rng)
{
    if (a.size() != b.size()) {
        throw UsageError("uniform_crossover: parents differ in length");
    }
    Genome out(a.size());
    for (std::size_t i = 0; i < out.words_.size(); ++i) {
        const std::uint64_t take_a = rng.next_u64();
        out.words_[i] = (a.words_[i] & take_a) | (b.words_[i] & ~take_a);
    }
    out.clear_tail();
    return out;
}

} // namespace nsga3oj
