#include <doctest.h>

#include <cmath>
#include <vector>

#include "nsga3oj/bitcore.hpp"
#include "nsga3oj/errors.hpp"

using namespace nsga3oj;

TEST_CASE("ones and zeros")
{
    CHECK(ones(Genome::from_string("0000")) == 0);
    CHECK(ones(Genome::from_string("1111")) == 4);
    CHECK(ones(Genome::from_string("1010")) == 2);
    CHECK(zeros(Genome::from_string("1010")) == 2);

    RandomStream rng(7);
    for (std::size_t n : {1, 5, 63, 64, 65, 130}) {
        const auto x = uniform_random_genome(rng, n);
        CHECK(ones(x) + zeros(x) == n);
    }
}

TEST_CASE("hamming distance")
{
    CHECK(hamming(Genome::from_string("1010"), Genome::from_string("1010")) == 0);
    CHECK(hamming(Genome::from_string("0000"), Genome::from_string("1111")) == 4);
    CHECK(hamming(Genome::from_string("1100"), Genome::from_string("1010")) == 2);
    CHECK_THROWS_AS(hamming(Genome::from_string("10"), Genome::from_string("101")), UsageError);

    RandomStream rng(11);
    for (int i = 0; i < 50; ++i) {
        const auto a = uniform_random_genome(rng, 97);
        const auto b = uniform_random_genome(rng, 97);
        CHECK(hamming(a, b) == hamming(b, a));
        CHECK(hamming(a, a) == 0);
    }
}

TEST_CASE("contiguous blocks")
{
    CHECK(block(Genome::from_string("11110000"), 0, 4) == Genome::from_string("1111"));
    CHECK(block(Genome::from_string("11110000"), 1, 4) == Genome::from_string("0000"));
    CHECK(block(Genome::from_string("10110100"), 1, 4) == Genome::from_string("0100"));
    CHECK_THROWS_AS(block(Genome::from_string("11110000"), 2, 4), UsageError);
    CHECK_THROWS_AS(block(Genome::from_string("1111000"), 0, 4), UsageError);
}

TEST_CASE("ones_in_range across word boundaries")
{
    RandomStream rng(5);
    const auto x = uniform_random_genome(rng, 200);
    for (std::size_t begin : {0, 1, 60, 63, 64, 100}) {
        for (std::size_t len : {0, 1, 4, 70, 99}) {
            std::size_t expected = 0;
            for (std::size_t i = begin; i < begin + len; ++i) {
                expected += x.test(i) ? 1 : 0;
            }
            CHECK(x.ones_in_range(begin, len) == expected);
        }
    }
}

TEST_CASE("uniform random genomes")
{
    RandomStream a(42);
    RandomStream b(42);
    CHECK(uniform_random_genome(a, 8) == uniform_random_genome(b, 8));

    RandomStream rng(1234);
    for (int draw = 0; draw < 100; ++draw) {
        const auto x = uniform_random_genome(rng, 10'000);
        CHECK(x.ones() >= 4700);
        CHECK(x.ones() <= 5300);
    }

    RandomStream s1(1);
    RandomStream s2(2);
    CHECK_FALSE(uniform_random_genome(s1, 64) == uniform_random_genome(s2, 64));
}

TEST_CASE("trial streams are a pure function of (master, index)")
{
    CHECK(RandomStream::trial_seed(9, 3) == RandomStream::trial_seed(9, 3));
    CHECK(RandomStream::trial_seed(9, 3) != RandomStream::trial_seed(9, 4));
    CHECK(RandomStream::trial_seed(9, 3) != RandomStream::trial_seed(10, 3));
    auto x = RandomStream::for_trial(9, 3);
    auto y = RandomStream::for_trial(9, 3);
    for (int i = 0; i < 10; ++i) {
        CHECK(x.next_u64() == y.next_u64());
    }
}

TEST_CASE("bounded draws are in range and roughly uniform")
{
    RandomStream rng(3);
    std::vector<int> counts(6, 0);
    for (int i = 0; i < 60'000; ++i) {
        const auto v = rng.below(6);
        REQUIRE(v < 6);
        ++counts[v];
    }
    for (int c : counts) {
        CHECK(c > 9'500);
        CHECK(c < 10'500);
    }
    CHECK_THROWS_AS(rng.below(0), UsageError);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("standard bit mutation")
{
    SUBCASE("n = 1 always flips")
    {
        RandomStream rng(1);
        const auto x = Genome::from_string("0");
        int flips = 0;
        for (int i = 0; i < 1000; ++i) {
            flips += standard_bit_mutation(x, rng).test(0) ? 1 : 0;
        }
        CHECK(flips == 1000);
    }

    SUBCASE("input is left untouched")
    {
        RandomStream rng(2);
        const auto x = uniform_random_genome(rng, 30);
        const auto copy = x;
        for (int i = 0; i < 100; ++i) {
            (void)standard_bit_mutation(x, rng);
        }
        CHECK(x == copy);
    }

    SUBCASE("flip count statistics at n = 100")
    {
        RandomStream rng(3);
        const Genome x(100);
        const int samples = 100'000;
        long total = 0;
        int zero = 0;
        for (int i = 0; i < samples; ++i) {
            const auto d = standard_bit_mutation(x, rng).ones();
            total += static_cast<long>(d);
            zero += d == 0 ? 1 : 0;
        }
        const double mean = static_cast<double>(total) / samples;
        const double zero_frac = static_cast<double>(zero) / samples;
        CHECK(mean >= 0.97);
        CHECK(mean <= 1.03);
        CHECK(zero_frac >= 0.356);
        CHECK(zero_frac <= 0.376);
    }

    SUBCASE("no position is favoured (chi-square, n = 50)")
    {
        RandomStream rng(4);
        const std::size_t n = 50;
        const int samples = 100'000;
        const Genome x(n);
        std::vector<long> per_pos(n, 0);
        for (int i = 0; i < samples; ++i) {
            const auto z = standard_bit_mutation(x, rng);
            for (std::size_t p = 0; p < n; ++p) {
                per_pos[p] += z.test(p) ? 1 : 0;
            }
        }
        const double prob = 1.0 / n;
        const double expected = samples * prob;
        double chi2 = 0.0;
        for (auto c : per_pos) {
            chi2 += (c - expected) * (c - expected) / (expected * (1.0 - prob));
        }
        // upper 1e-6 quantile of chi-square with 50 degrees of freedom
        CHECK(chi2 < 112.6);
    }
}

TEST_CASE("uniform crossover")
{
    RandomStream rng(8);
    const auto x = uniform_random_genome(rng, 77);
    CHECK(uniform_crossover(x, x, rng) == x);
    CHECK_THROWS_AS(uniform_crossover(Genome(3), Genome(4), rng), UsageError);

    SUBCASE("agreement positions are inherited")
    {
        for (int trial = 0; trial < 200; ++trial) {
            const auto a = uniform_random_genome(rng, 70);
            const auto b = uniform_random_genome(rng, 70);
            const auto c = uniform_crossover(a, b, rng);
            for (std::size_t i = 0; i < 70; ++i) {
                if (a.test(i) == b.test(i)) {
                    REQUIRE(c.test(i) == a.test(i));
                }
            }
        }
        const auto a = Genome::from_string("1100");
        const auto b = Genome::from_string("1010");
        int pos1_set = 0;
        for (int i = 0; i < 4000; ++i) {
            const auto c = uniform_crossover(a, b, rng);
            CHECK(c.test(0));
            CHECK_FALSE(c.test(3));
            pos1_set += c.test(1) ? 1 : 0;
        }
        CHECK(pos1_set > 1800);
        CHECK(pos1_set < 2200);
    }

    SUBCASE("complementary parents reach all-ones with probability 2^-6")
    {
        const auto a = Genome::from_string("111000");
        const auto b = Genome::from_string("000111");
        const auto target = Genome::filled(6, true);
        int hits = 0;
        const int samples = 100'000;
        for (int i = 0; i < samples; ++i) {
            hits += uniform_crossover(a, b, rng) == target ? 1 : 0;
        }
        const double freq = static_cast<double>(hits) / samples;
        CHECK(freq >= 0.012);
        CHECK(freq <= 0.019);
    }
}

TEST_CASE("replay with the same seed is bit-identical")
{
    auto run = [](std::uint64_t seed) {
        RandomStream rng(seed);
        std::vector<Genome> out;
        auto a = uniform_random_genome(rng, 40);
        auto b = uniform_random_genome(rng, 40);
        for (int i = 0; i < 50; ++i) {
            a = standard_bit_mutation(uniform_crossover(a, b, rng), rng);
            out.push_back(a);
        }
        return out;
    };
    CHECK(run(99) == run(99));
    CHECK_FALSE(run(99) == run(100));
}

TEST_CASE("string parsing")
{
    CHECK(Genome::from_string("1111 0011").to_string() == "11110011");
    CHECK_THROWS_AS(Genome::from_string("10x1"), UsageError);
    CHECK(Genome::from_string("1100").complement() == Genome::from_string("0011"));
    CHECK(Genome::filled(70, true).ones() == 70);
}
