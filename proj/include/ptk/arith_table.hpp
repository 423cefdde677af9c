/// @file arith_table.hpp
/// @brief Smallest-prime-factor table and the exact arithmetic functions
/// derived from it (Möbius, von Mangoldt, prime-power structure, pi, Pi, J).
///
/// The table stores one 32-bit entry per integer, so the supported range is
/// 2 <= limit < 2^32 and the memory cost is 4 * (limit + 1) bytes
/// (about 400 MB at limit = 10^8). After construction it is immutable and
/// safe for concurrent reads.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <new>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptk/common.hpp"
#include "ptk/int_math.hpp"
#include "ptk/rational.hpp"

namespace ptk {

struct PrimePower {
    u64 prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct TableOptions {
    std::size_t segment_size = std::size_t{1} << 20;
    Threads threads{};
};

/// Plain sieve of Eratosthenes; primes in [2, limit] in increasing order.
inline std::vector<std::uint32_t> primes_up_to(u64 limit) {
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        out.push_back(static_cast<std::uint32_t>(p));
        for (u64 m = p * p; m <= limit; m += p) composite[m] = true;
    }
    return out;
}

class ArithTable {
public:
    static constexpr u64 max_limit = std::numeric_limits<std::uint32_t>::max() - 1;

    /// Segmented sieve. Segments are independent so they may run on several
    /// threads; the table content does not depend on segment size or threads.
    static ArithTable build(u64 limit, TableOptions opts = {}) {
        if (limit < 2) throw std::invalid_argument("build_table: limit must be >= 2, got " + std::to_string(limit));
        if (limit > max_limit) throw std::invalid_argument("build_table: limit must be < 2^32 - 1, got " + std::to_string(limit));
        if (opts.segment_size == 0) throw std::invalid_argument("build_table: segment size must be positive");

        ArithTable t;
        t.allocate(limit);

        const auto base = primes_up_to(isqrt(limit));
        const u64 seg = opts.segment_size;
        const u64 n_segments = (limit - 2 + seg) / seg;
        auto& spf = t.spf_;
        parallel_for(n_segments, opts.threads, [&](std::size_t s) {
            const u64 lo = 2 + s * seg;
            const u64 hi = std::min<u64>(lo + seg, limit + 1);
            for (const u64 p : base) {
                if (p * p >= hi) break;
                u64 start = std::max<u64>(p * p, (lo + p - 1) / p * p);
                for (u64 m = start; m < hi; m += p)
                    if (spf[m] == 0) spf[m] = static_cast<std::uint32_t>(p);
            }
            for (u64 m = lo; m < hi; ++m)
                if (spf[m] == 0) spf[m] = static_cast<std::uint32_t>(m);
        });
        return t;
    }

    u64 limit() const { return spf_.size() - 1; }

    std::uint32_t spf(u64 n) const {
        check(n, 2, "spf");
        return spf_[n];
    }

    bool is_prime(u64 n) const {
        check(n, 1, "is_prime");
        return n >= 2 && spf_[n] == n;
    }

    /// Distinct prime factors in increasing order with multiplicities.
    std::vector<PrimePower> factorize(u64 n) const {
        check(n, 1, "factorize");
        std::vector<PrimePower> out;
        while (n > 1) {
            const u64 p = spf_[n];
            unsigned a = 0;
            while (n % p == 0) {
                n /= p;
                ++a;
            }
            out.push_back({p, a});
        }
        return out;
    }

    /// Raw entries 2..limit.
    std::span<const std::uint32_t> entries() const { return std::span(spf_).subspan(2); }

    /// Binary cache: "SPF1", u64 LE limit, then one u32 LE entry per n in [2, limit].
    void save(std::ostream& os) const {
        os.write("SPF1", 4);
        write_le(os, limit(), 8);
        for (u64 n = 2; n <= limit(); ++n) write_le(os, spf_[n], 4);
        if (!os) throw std::runtime_error("spf cache: write failed");
    }

    static ArithTable load(std::istream& is) {
        std::array<char, 4> magic{};
        if (!is.read(magic.data(), 4) || std::string(magic.data(), 4) != "SPF1")
            throw format_error("spf cache: bad magic (expected SPF1)");
        u64 limit = 0;
        if (!read_le(is, limit, 8)) throw format_error("spf cache: truncated header");
        if (limit < 2 || limit > max_limit) throw format_error("spf cache: invalid limit " + std::to_string(limit));
        ArithTable t;
        t.allocate(limit);
        for (u64 n = 2; n <= limit; ++n) {
            u64 v = 0;
            if (!read_le(is, v, 4)) throw format_error("spf cache: truncated at n = " + std::to_string(n));
            if (v < 2 || v > n || n % v != 0)
                throw format_error("spf cache: entry for n = " + std::to_string(n) + " is not a factor");
            t.spf_[n] = static_cast<std::uint32_t>(v);
        }
        return t;
    }

    friend bool operator==(const ArithTable&, const ArithTable&) = default;

    void check(u64 n, u64 lo, const char* what) const {
        if (n < lo || n > limit())
            throw std::out_of_range(std::string(what) + ": n = " + std::to_string(n) + " outside [" +
                                    std::to_string(lo) + ", " + std::to_string(limit()) + "]");
    }

private:
    void allocate(u64 limit) {
        try {
            spf_.assign(limit + 1, 0);
        } catch (const std::bad_alloc&) {
            throw resource_error("build_table: cannot allocate spf table", (limit + 1) * sizeof(std::uint32_t));
        }
    }

    static void write_le(std::ostream& os, u64 v, int bytes) {
        for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    static bool read_le(std::istream& is, u64& v, int bytes) {
        v = 0;
        for (int i = 0; i < bytes; ++i) {
            const int c = is.get();
            if (c == std::char_traits<char>::eof()) return false;
            v |= static_cast<u64>(static_cast<unsigned char>(c)) << (8 * i);
        }
        return true;
    }

    std::vector<std::uint32_t> spf_;
};

inline ArithTable build_table(u64 limit, TableOptions opts = {}) { return ArithTable::build(limit, opts); }

/// Möbius function; mu(1) = 1.
inline int mu(const ArithTable& t, u64 n) {
    t.check(n, 1, "mu");
    int sign = 1;
    while (n > 1) {
        const u64 p = t.spf(n);
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    return sign;
}

/// n = p^a, or nullopt. 1 is not a prime power.
inline std::optional<PrimePower> prime_power_decompose(const ArithTable& t, u64 n) {
    t.check(n, 2, "prime_power_decompose");
    const u64 p = t.spf(n);
    unsigned a = 0;
    while (n % p == 0) {
        n /= p;
        ++a;
    }
    if (n != 1) return std::nullopt;
    return PrimePower{p, a};
}

/// von Mangoldt function in natural-log units; Lambda(1) = 0.
inline double von_mangoldt(const ArithTable& t, u64 n) {
    t.check(n, 1, "lambda");
    if (n == 1) return 0.0;
    const auto pp = prime_power_decompose(t, n);
    return pp ? std::log(static_cast<double>(pp->prime)) : 0.0;
}

namespace detail {
inline void check_cutoff(const ArithTable& t, u64 x, const char* what) {
    if (x > t.limit())
        throw std::out_of_range(std::string(what) + ": x = " + std::to_string(x) + " exceeds table limit " +
                                std::to_string(t.limit()));
}
}  // namespace detail

/// Number of primes <= x.
inline u64 pi_exact(const ArithTable& t, u64 x) {
    detail::check_cutoff(t, x, "pi_exact");
    u64 count = 0;
    const auto e = t.entries();
    for (u64 n = 2; n <= x; ++n) count += (e[n - 2] == n);
    return count;
}

namespace detail {
/// counts[a] = number of p^a <= x, for a >= 1.
inline std::vector<u64> prime_power_counts(const ArithTable& t, u64 x) {
    std::vector<u64> counts(2, 0);
    for (u64 n = 2; n <= x; ++n) {
        const auto pp = prime_power_decompose(t, n);
        if (!pp) continue;
        if (pp->exponent >= counts.size()) counts.resize(pp->exponent + 1, 0);
        ++counts[pp->exponent];
    }
    return counts;
}
}  // namespace detail

/// Number of prime powers p^a <= x with a >= 1.
inline u64 capital_pi_exact(const ArithTable& t, u64 x) {
    detail::check_cutoff(t, x, "capital_pi_exact");
    u64 total = 0;
    for (const u64 c : detail::prime_power_counts(t, x)) total += c;
    return total;
}

/// Sum over p^a <= x of 1/a, exactly.
inline Rational j_exact(const ArithTable& t, u64 x) {
    detail::check_cutoff(t, x, "j_exact");
    const auto counts = detail::prime_power_counts(t, x);
    Rational j;
    for (std::size_t a = 1; a < counts.size(); ++a)
        if (counts[a] != 0) j += Rational(static_cast<std::int64_t>(counts[a]), static_cast<std::int64_t>(a));
    return j;
}

}  // namespace ptk
