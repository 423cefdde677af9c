#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "ptk/arith_table.hpp"
#include "ptk/int_math.hpp"

using namespace ptk;

namespace {
const ArithTable& small_table() {
    static const ArithTable t = build_table(100'000);
    return t;
}
}  // namespace

TEST(IntMath, IsqrtMatchesDefinition) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        const u64 n = rng() >> (rng() % 64);
        const u64 r = isqrt(n);
        EXPECT_LE(static_cast<u128>(r) * r, n);
        EXPECT_GT(static_cast<u128>(r + 1) * (r + 1), n);
    }
    EXPECT_EQ(isqrt(0), 0u);
    EXPECT_EQ(isqrt(UINT64_MAX), 4294967295u);
}

TEST(IntMath, IrootBracketsExactPowers) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 5000; ++i) {
        const u64 x = rng() >> (rng() % 64);
        const unsigned n = 1 + rng() % 40;
        const u64 r = iroot(x, n);
        EXPECT_TRUE(checked_pow_capped(r, n, x).has_value()) << x << " " << n;
        EXPECT_FALSE(checked_pow_capped(r + 1, n, x).has_value()) << x << " " << n;
    }
    // Off-by-one traps for floating roots.
    EXPECT_EQ(iroot(1000, 3), 10u);
    EXPECT_EQ(iroot(999, 3), 9u);
    EXPECT_EQ(iroot(u64{1} << 63, 63), 2u);
    EXPECT_EQ(iroot(UINT64_MAX, 2), 4294967295u);
    EXPECT_EQ(iroot(4052555153018976267ull, 3), 1594323u);  // 3^39 = 1594323^3
}

TEST(ArithTable, BuildExamples) {
    const auto t10 = build_table(10);
    EXPECT_EQ(t10.spf(10), 2u);
    EXPECT_EQ(t10.spf(7), 7u);
    const auto t100 = build_table(100);
    EXPECT_EQ(t100.spf(91), 7u);
}

TEST(ArithTable, RejectsBadLimits) {
    EXPECT_THROW(build_table(1), std::invalid_argument);
    EXPECT_THROW(build_table(0), std::invalid_argument);
    EXPECT_THROW(build_table(u64{1} << 33), std::invalid_argument);
}

TEST(ArithTable, SpfInvariants) {
    const auto& t = small_table();
    for (u64 n = 2; n <= t.limit(); ++n) {
        const u64 p = t.spf(n);
        ASSERT_EQ(n % p, 0u);
        ASSERT_TRUE(oracle::is_prime(p)) << n;
        ASSERT_EQ(p == n, oracle::is_prime(n)) << n;
        ASSERT_TRUE(p == n || p * p <= n) << n;
    }
}

TEST(ArithTable, ReproducibleAcrossSegmentsAndThreads) {
    const auto a = build_table(300'007, {.segment_size = 1 << 20, .threads = Threads(1)});
    const auto b = build_table(300'007, {.segment_size = 977, .threads = Threads(4)});
    const auto c = build_table(300'007, {.segment_size = 65536, .threads = Threads(8)});
    EXPECT_TRUE(a == b);
    EXPECT_TRUE(a == c);
}

TEST(ArithTable, QueriesOutOfRangeThrow) {
    const auto t = build_table(50);
    EXPECT_THROW(mu(t, 0), std::out_of_range);
    EXPECT_THROW(mu(t, 51), std::out_of_range);
    EXPECT_THROW(von_mangoldt(t, 51), std::out_of_range);
    EXPECT_THROW(prime_power_decompose(t, 1), std::out_of_range);
    EXPECT_THROW(pi_exact(t, 51), std::out_of_range);
    EXPECT_THROW(capital_pi_exact(t, 51), std::out_of_range);
    EXPECT_THROW(j_exact(t, 51), std::out_of_range);
}

TEST(ArithTable, MuExamples) {
    const auto& t = small_table();
    EXPECT_EQ(mu(t, 1), 1);
    EXPECT_EQ(mu(t, 10), 1);
    EXPECT_EQ(mu(t, 12), 0);
}

TEST(ArithTable, LambdaExamples) {
    const auto& t = small_table();
    EXPECT_DOUBLE_EQ(von_mangoldt(t, 8), std::log(2.0));
    EXPECT_EQ(von_mangoldt(t, 6), 0.0);
    EXPECT_DOUBLE_EQ(von_mangoldt(t, 49), std::log(7.0));
    EXPECT_EQ(von_mangoldt(t, 1), 0.0);
}

TEST(ArithTable, PrimePowerExamples) {
    const auto t = build_table(10'000);
    EXPECT_EQ(prime_power_decompose(t, 32), (PrimePower{2, 5}));
    EXPECT_FALSE(prime_power_decompose(t, 36).has_value());
    EXPECT_EQ(prime_power_decompose(t, 9409), (PrimePower{97, 2}));
}

TEST(ArithTable, AgreesWithTrialDivision) {
    const auto& t = small_table();
    for (u64 n = 1; n <= t.limit(); ++n) {
        ASSERT_EQ(mu(t, n), oracle::mobius(n)) << n;
        ASSERT_DOUBLE_EQ(von_mangoldt(t, n), oracle::von_mangoldt(n)) << n;
        if (n < 2) continue;
        const auto f = oracle::factor(n);
        const auto pp = prime_power_decompose(t, n);
        ASSERT_EQ(pp.has_value(), f.size() == 1) << n;
        if (pp) {
            ASSERT_EQ(pp->prime, f[0].first);
            ASSERT_EQ(pp->exponent, f[0].second);
        }
    }
}

TEST(ArithTable, PiExamples) {
    const auto t = build_table(1'000'000);
    EXPECT_EQ(pi_exact(t, 1), 0u);
    EXPECT_EQ(pi_exact(t, 100), 25u);
    EXPECT_EQ(pi_exact(t, 1'000'000), oracle::count_primes(1'000'000));
    EXPECT_EQ(pi_exact(t, 1'000'000), 78498u);
}

TEST(ArithTable, CapitalPiExamples) {
    const auto& t = small_table();
    EXPECT_EQ(capital_pi_exact(t, 100), 35u);
    EXPECT_EQ(capital_pi_exact(t, 2), 1u);
    EXPECT_EQ(capital_pi_exact(t, 1), 0u);
}

TEST(ArithTable, CapitalPiIsSumOfPiAtRoots) {
    const auto& t = small_table();
    // Cumulative prime counts let every x be checked without re-scanning.
    std::vector<u64> pi(t.limit() + 1, 0);
    for (u64 n = 2; n <= t.limit(); ++n) pi[n] = pi[n - 1] + oracle::is_prime(n);
    u64 running = 0;
    for (u64 x = 1; x <= t.limit(); ++x) {
        if (x >= 2 && prime_power_decompose(t, x)) ++running;
        u64 expect = 0;
        for (unsigned a = 1; (u64{1} << a) <= x; ++a) expect += pi[iroot(x, a)];
        ASSERT_EQ(running, expect) << x;
        if (x % 9973 == 0) {
            ASSERT_EQ(capital_pi_exact(t, x), expect);
        }
    }
}

TEST(ArithTable, JExamples) {
    const auto& t = small_table();
    EXPECT_EQ(j_exact(t, 10), Rational(16, 3));
    EXPECT_EQ(j_exact(t, 1), Rational(0));
    EXPECT_EQ(j_exact(t, 3), Rational(2));
}

TEST(ArithTable, JBetweenPiAndCapitalPi) {
    const auto& t = small_table();
    for (u64 x = 1; x <= 5000; x += 7) {
        const Rational j = j_exact(t, x);
        EXPECT_GE(j, Rational(static_cast<std::int64_t>(pi_exact(t, x))));
        EXPECT_LE(j, Rational(static_cast<std::int64_t>(capital_pi_exact(t, x))));
    }
}

TEST(ArithTable, CacheRoundTrip) {
    const auto t = build_table(5000);
    std::stringstream ss;
    t.save(ss);
    const std::string bytes = ss.str();
    ASSERT_EQ(bytes.size(), 4 + 8 + 4 * (5000 - 1));
    EXPECT_EQ(bytes.substr(0, 4), "SPF1");
    // Little-endian limit.
    EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 5000 & 0xff);
    EXPECT_EQ(static_cast<unsigned char>(bytes[5]), 5000 >> 8);
    // First entry is spf(2) = 2.
    EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 2);
    std::stringstream in(bytes);
    EXPECT_TRUE(ArithTable::load(in) == t);
}

TEST(ArithTable, CacheLoaderValidates) {
    const auto t = build_table(100);
    std::stringstream ss;
    t.save(ss);
    std::string bytes = ss.str();

    std::string bad_magic = bytes;
    bad_magic[3] = '2';
    std::stringstream a(bad_magic);
    EXPECT_THROW(ArithTable::load(a), format_error);

    std::stringstream b(bytes.substr(0, bytes.size() - 2));
    EXPECT_THROW(ArithTable::load(b), format_error);

    std::string bad_limit = bytes;
    bad_limit[4] = 1;
    bad_limit[5] = 0;
    std::stringstream c(bad_limit);
    EXPECT_THROW(ArithTable::load(c), format_error);

    std::string bad_entry = bytes;
    bad_entry[12 + 4 * (9 - 2)] = 2;  // spf(9) = 2 is not a factor
    std::stringstream d(bad_entry);
    EXPECT_THROW(ArithTable::load(d), format_error);
}

TEST(Rational, ArithmeticAndOrdering) {
    EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
    EXPECT_EQ(Rational(2, 4).to_string(), "1/2");
    EXPECT_EQ(Rational(-3, -6), Rational(1, 2));
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_THROW(Rational(1, 0), std::invalid_argument);
    EXPECT_THROW(Rational(INT64_MAX) + Rational(1), std::overflow_error);
}
