#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "ptk/tuple_core.hpp"

using namespace ptk;

namespace {
const ArithTable& table() {
    static const ArithTable t = build_table(200'000);
    return t;
}

/// Exhaustive count of (n, m) along H with product <= x, straight from the definition.
u64 brute_capital_pi_k(u64 x, const std::vector<u64>& h) {
    u64 count = 0;
    for (u64 n = 2; n <= x; ++n) {
        bool ok = true;
        u128 minprod = 1;
        for (const u64 off : h) {
            ok = ok && oracle::is_prime(n + off);
            minprod *= n + off;
        }
        if (minprod > x) break;
        if (!ok) continue;
        // Count exponent vectors with prod (n+h_i)^{m_i} <= x.
        std::function<void(std::size_t, u128)> rec = [&](std::size_t i, u128 p) {
            if (i == h.size()) {
                ++count;
                return;
            }
            for (u128 q = p * (n + h[i]); q <= x; q *= (n + h[i])) rec(i + 1, q);
        };
        rec(0, 1);
    }
    return count;
}
}  // namespace

TEST(OffsetSet, Validation) {
    EXPECT_THROW(OffsetSet({}), std::invalid_argument);
    EXPECT_THROW(OffsetSet({1, 2}), std::invalid_argument);
    EXPECT_THROW(OffsetSet({0, 2, 2}), std::invalid_argument);
    EXPECT_THROW(OffsetSet({0, 4, 2}), std::invalid_argument);
    EXPECT_NO_THROW(OffsetSet({0}));
    EXPECT_EQ(OffsetSet({0, 2, 6}).to_string(), "0;2;6");
    EXPECT_THROW(ExponentVector({1, 0}), std::invalid_argument);
    EXPECT_THROW(ExponentVector({}), std::invalid_argument);
}

TEST(RayProduct, DetectsOverflow) {
    const OffsetSet h({0, 2});
    EXPECT_EQ(ray_product(3, h, ExponentVector({2, 1})), 45u);
    EXPECT_FALSE(ray_product(3, h, ExponentVector({40, 40})).has_value());
    EXPECT_FALSE(ray_product(3, h, ExponentVector({2, 1}), 44).has_value());
    EXPECT_EQ(ray_product(3, h, ExponentVector({2, 1}), 45), 45u);
    EXPECT_THROW(ray_product(3, h, ExponentVector({1})), std::invalid_argument);
}

TEST(TupleWeight, Examples) {
    const auto& t = table();
    const OffsetSet twin({0, 2});
    EXPECT_EQ(tuple_weight(t, 3, twin).value, 1.0);
    EXPECT_EQ(tuple_weight(t, 4, twin).value, 0.0);
    EXPECT_EQ(tuple_weight(t, 9, twin).value, 0.0);
    EXPECT_EQ(tuple_weight(t, 2, OffsetSet({0})).value, 1.0);
    EXPECT_EQ(tuple_weight(t, 3, OffsetSet({0, 2, 4})).value, 1.0);  // odd k: sign folds away
    EXPECT_THROW(tuple_weight(t, 1, twin), std::invalid_argument);
    EXPECT_THROW(tuple_weight(t, t.limit(), twin), std::out_of_range);
}

TEST(TupleWeight, IndicatorIdentity) {
    const auto& t = table();
    std::mt19937 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<u64> h{0};
        const int k = 1 + static_cast<int>(rng() % 4);
        for (int i = 1; i < k; ++i) h.push_back(h.back() + 1 + rng() % 12);
        const OffsetSet H(h);
        for (u64 n = 2; n + H.max_offset() <= 10'000; ++n) {
            bool all = true;
            for (const u64 off : h) all = all && oracle::is_prime(n + off);
            const auto w = tuple_weight(t, n, H);
            ASSERT_TRUE(w.is_indicator);
            ASSERT_EQ(w.value == 1.0, all) << n << " " << H.to_string();
            ASSERT_TRUE(w.value == 0.0 || w.value == 1.0);
        }
    }
}

TEST(PiK, Examples) {
    const auto& t = table();
    EXPECT_EQ(pi_k(t, 100, OffsetSet({0, 2})), 8u);
    EXPECT_EQ(pi_k(t, 100, OffsetSet({0})), 25u);
    EXPECT_EQ(pi_k(t, 10, OffsetSet({0, 1})), 1u);
    EXPECT_THROW(pi_k(t, t.limit(), OffsetSet({0, 2})), std::out_of_range);
}

TEST(PiK, EqualsSumOfTupleWeights) {
    const auto& t = table();
    for (const auto& h : {OffsetSet({0, 2}), OffsetSet({0, 4}), OffsetSet({0, 2, 6}), OffsetSet({0, 6, 12, 18})}) {
        double sum = 0;
        for (u64 r = 2; r <= 20'000; ++r) {
            sum += tuple_weight(t, r, h).value;
            if (r % 997 == 0) {
                ASSERT_EQ(static_cast<double>(pi_k(t, r, h)), sum) << h.to_string() << " " << r;
            }
        }
    }
}

TEST(PiKPower, Examples) {
    const auto& t = table();
    EXPECT_EQ(pi_k_power(t, 100, OffsetSet({0}), ExponentVector({2})), 4u);
    EXPECT_EQ(pi_k_power(t, 15, OffsetSet({0, 2}), ExponentVector({1, 1})), 1u);
    EXPECT_EQ(pi_k_power(t, 1, OffsetSet({0, 2}), ExponentVector({1, 1})), 0u);
    EXPECT_THROW(pi_k_power(t, 100, OffsetSet({0, 2}), ExponentVector({1})), std::invalid_argument);
}

TEST(PiKPower, CutoffTightness) {
    const auto& t = table();
    const OffsetSet h({0, 2});
    for (const auto& m : {ExponentVector({1, 1}), ExponentVector({2, 1}), ExponentVector({1, 3})}) {
        u64 prev = 0;
        for (u64 x = 1; x <= 50'000; ++x) {
            const u64 cur = pi_k_power(t, x, h, m);
            ASSERT_TRUE(cur == prev || cur == prev + 1) << x;
            prev = cur;
        }
    }
}

TEST(CapitalPiK, Examples) {
    const auto& t = table();
    EXPECT_EQ(capital_pi_k(t, 100, OffsetSet({0})), 35u);
    EXPECT_EQ(capital_pi_k(t, 100, OffsetSet({0, 2})), 4u);
    EXPECT_EQ(capital_pi_k(t, 1, OffsetSet({0})), 0u);
}

TEST(CapitalPiK, MatchesExhaustiveEnumeration) {
    const auto& t = table();
    for (const auto& h : std::vector<std::vector<u64>>{{0}, {0, 1}, {0, 2}, {0, 4}, {0, 2, 6}, {0, 1, 3}}) {
        for (const u64 x : {2, 10, 97, 100, 1000, 4096, 10'000}) {
            ASSERT_EQ(capital_pi_k(t, x, OffsetSet(h)), brute_capital_pi_k(x, h)) << x;
        }
    }
}

TEST(CapitalPiK, ConsistentWithCapitalPiExact) {
    const auto& t = table();
    for (u64 x = 1; x <= 100'000; x += (x < 2000 ? 1 : 997))
        ASSERT_EQ(capital_pi_k(t, x, OffsetSet({0})), capital_pi_exact(t, x)) << x;
}

TEST(CapitalPiK, ExponentBound) {
    // Every enumerated vector has sum(m) <= floor(log2 x).
    for (const u64 x : {2, 3, 100, 1'000'000}) {
        unsigned lg = 0;
        while ((u64{2} << lg) <= x) ++lg;
        for_each_exponent_vector(OffsetSet({0, 2, 6}), x, [&](const ExponentVector& m) { EXPECT_LE(m.total(), lg); });
    }
}

TEST(Monotone, CountsNondecreasing) {
    const auto& t = table();
    const OffsetSet h({0, 2});
    u64 a = 0, b = 0, c = 0;
    for (u64 x = 2; x <= 3000; ++x) {
        const u64 na = pi_k(t, x, h), nb = capital_pi_k(t, x, h), nc = localization_sum(t, x).sum;
        ASSERT_GE(na, a);
        ASSERT_GE(nb, b);
        ASSERT_GE(nc, c);
        a = na;
        b = nb;
        c = nc;
    }
}

TEST(EnumerateRays, Examples) {
    const auto& t = table();
    const auto r6 = enumerate_rays(t, 6);
    ASSERT_EQ(r6.size(), 5u);
    EXPECT_EQ(r6[2].offsets, OffsetSet({0}));
    EXPECT_EQ(r6[2].exponents, ExponentVector({2}));
    EXPECT_EQ(r6[2].base, 2u);
    EXPECT_EQ(r6[4].offsets, OffsetSet({0, 1}));
    EXPECT_EQ(r6[4].exponents, ExponentVector({1, 1}));
    EXPECT_EQ(r6[4].base, 2u);
    EXPECT_EQ(enumerate_rays(t, 2).size(), 1u);
    EXPECT_EQ(enumerate_rays(t, 30).size(), 29u);
    EXPECT_THROW(enumerate_rays(t, 2'000'000), std::out_of_range);
}

TEST(EnumerateRays, RayPointInvariants) {
    const auto& t = table();
    for (const auto& r : enumerate_rays(t, 5000)) {
        ASSERT_EQ(ray_product(r.base, r.offsets, r.exponents), r.product);
        for (const u64 off : r.offsets.offsets()) ASSERT_TRUE(oracle::is_prime(r.base + off));
    }
}

TEST(EnumerateRays, BijectionWithIntegers) {
    const auto& t = table();
    for (u64 x = 2; x <= 5000; x += (x < 300 ? 1 : 173)) {
        const auto rays = enumerate_rays(t, x);
        std::multiset<u64> products;
        for (const auto& r : rays) products.insert(r.product);
        ASSERT_EQ(products.size(), x - 1);
        u64 expect = 2;
        for (const u64 p : products) ASSERT_EQ(p, expect++);
    }
}

TEST(EnumerateRays, CombinatorialGeneratorAgrees) {
    const auto& t = table();
    for (const u64 x : {2, 6, 30, 1000, 10'000}) {
        const auto a = enumerate_rays(t, x);
        const auto b = enumerate_rays_combinatorial(t, x);
        ASSERT_EQ(a.size(), b.size()) << x;
        for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i], b[i]) << x << " at " << i;
    }
}

TEST(EnumerateRays, IndependentOfThreads) {
    const auto& t = table();
    RayOptions one, many;
    many.threads = Threads(8);
    EXPECT_EQ(enumerate_rays(t, 100'000, one), enumerate_rays(t, 100'000, many));
    EXPECT_EQ(ray_counts(t, 100'000, one), ray_counts(t, 100'000, many));
}

TEST(RayCounts, EachGroupIsCapitalPiK) {
    const auto& t = table();
    for (const u64 x : {100, 1000, 5000}) {
        for (const auto& [h, c] : ray_counts(t, x)) ASSERT_EQ(c, capital_pi_k(t, x, h)) << x << " " << h.to_string();
    }
}

TEST(Localization, Examples) {
    const auto& t = table();
    const auto r10 = localization_sum(t, 10);
    EXPECT_EQ(r10.sum, 9u);
    EXPECT_EQ(r10.floor_x, 10u);
    EXPECT_EQ(r10.floor_minus_one, 9u);
    EXPECT_EQ(r10.match(), "floor-1");
    EXPECT_FALSE(r10.matches_floor());
    EXPECT_EQ(localization_sum(t, 2).sum, 1u);
    EXPECT_EQ(localization_sum(t, 1000).sum, 999u);
}

TEST(RaysCsv, StableColumns) {
    const auto& t = table();
    std::ostringstream os;
    write_rays_csv(os, enumerate_rays(t, 6));
    EXPECT_EQ(os.str(),
              "k,offsets,exponents,base,product\n"
              "1,0,1,2,2\n"
              "1,0,1,3,3\n"
              "1,0,2,2,4\n"
              "1,0,1,5,5\n"
              "2,0;1,1;1,2,6\n");
}
