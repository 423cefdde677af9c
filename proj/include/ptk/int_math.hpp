/// @file int_math.hpp
/// @brief Exact integer helpers: checked products and integer roots.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>

namespace ptk {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// a * b, or nullopt if the product does not fit in 64 bits.
constexpr std::optional<u64> checked_mul(u64 a, u64 b) {
    const u128 p = static_cast<u128>(a) * b;
    if (p > std::numeric_limits<u64>::max()) return std::nullopt;
    return static_cast<u64>(p);
}

/// base^exp if it is <= cap, nullopt otherwise (overflow included).
constexpr std::optional<u64> checked_pow_capped(u64 base, unsigned exp, u64 cap) {
    u128 acc = 1;
    for (unsigned i = 0; i < exp; ++i) {
        acc *= base;
        if (acc > cap) return std::nullopt;
    }
    return static_cast<u64>(acc);
}

/// floor(sqrt(n)), exact for every 64-bit n.
constexpr u64 isqrt(u64 n) {
    if (n < 4) return n < 1 ? 0 : 1;
    // Newton from above; the iterate decreases monotonically to the floor root.
    u64 x = n;
    u64 y = x / 2 + 1;  // (x + 1) / 2 would wrap at 2^64 - 1
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    return x;
}

/// floor(x^(1/n)) for n >= 1, by integer Newton iteration plus a correction step.
constexpr u64 iroot(u64 x, unsigned n) {
    if (n == 0) throw std::invalid_argument("iroot: root index must be >= 1");
    if (n == 1 || x < 2) return x;
    if (n == 2) return isqrt(x);
    if (n >= 64) return 1;

    // Start above the root: 2^ceil(bits/n) >= x^(1/n).
    unsigned bits = 0;
    for (u64 t = x; t != 0; t >>= 1) ++bits;
    u64 r = u64{1} << ((bits + n - 1) / n);

    auto pow_le = [](u64 base, unsigned e, u64 bound) {
        return checked_pow_capped(base, e, bound).has_value();
    };
    for (;;) {
        // r_next = ((n-1) r + x / r^(n-1)) / n
        u128 rp = 1;
        bool big = false;
        for (unsigned i = 0; i + 1 < n; ++i) {
            rp *= r;
            if (rp > x) {
                big = true;
                break;
            }
        }
        const u64 q = big ? 0 : static_cast<u64>(x / rp);
        const u64 next = static_cast<u64>(((static_cast<u128>(n - 1) * r) + q) / n);
        if (next >= r) break;
        r = next;
    }
    while (r > 0 && !pow_le(r, n, x)) --r;
    while (pow_le(r + 1, n, x)) ++r;
    return r;
}

}  // namespace ptk
