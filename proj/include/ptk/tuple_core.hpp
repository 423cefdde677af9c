/// @file tuple_core.hpp
/// @brief Offset patterns, exponent vectors and prime / prime-power k-tuple
/// counting along a ray, plus the ray enumeration behind the localization
/// identity (every integer in [2, x] is exactly one prime-power tuple).
///
/// Cutoff convention: a ray point (n, H, m) lies below x when the product
/// prod_i (n + h_i)^{m_i} is <= x. Products are formed in 128-bit arithmetic
/// and anything that overflows counts as exceeding the cutoff.
#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptk/arith_table.hpp"
#include "ptk/common.hpp"
#include "ptk/int_math.hpp"

namespace ptk {

/// H_k = {0, h_2, ..., h_k}: strictly increasing, starts at 0, k >= 1.
class OffsetSet {
public:
    explicit OffsetSet(std::vector<u64> offsets) : offsets_(std::move(offsets)) {
        if (offsets_.empty()) throw std::invalid_argument("OffsetSet: needs at least one offset");
        if (offsets_.front() != 0) throw std::invalid_argument("OffsetSet: first offset must be 0");
        for (std::size_t i = 1; i < offsets_.size(); ++i)
            if (offsets_[i] <= offsets_[i - 1])
                throw std::invalid_argument("OffsetSet: offsets must be strictly increasing");
    }

    std::size_t k() const { return offsets_.size(); }
    std::span<const u64> offsets() const { return offsets_; }
    u64 operator[](std::size_t i) const { return offsets_[i]; }
    u64 max_offset() const { return offsets_.back(); }

    std::string to_string(char sep = ';') const {
        std::string s;
        for (std::size_t i = 0; i < offsets_.size(); ++i) {
            if (i) s += sep;
            s += std::to_string(offsets_[i]);
        }
        return s;
    }

    friend auto operator<=>(const OffsetSet&, const OffsetSet&) = default;
    friend bool operator==(const OffsetSet&, const OffsetSet&) = default;

private:
    std::vector<u64> offsets_;
};

/// m = (m_1, ..., m_k), every entry >= 1.
class ExponentVector {
public:
    explicit ExponentVector(std::vector<unsigned> exponents) : exponents_(std::move(exponents)) {
        if (exponents_.empty()) throw std::invalid_argument("ExponentVector: needs at least one exponent");
        for (const unsigned m : exponents_)
            if (m == 0) throw std::invalid_argument("ExponentVector: exponents must be >= 1");
    }

    static ExponentVector ones(std::size_t k) { return ExponentVector(std::vector<unsigned>(k, 1)); }

    std::size_t size() const { return exponents_.size(); }
    std::span<const unsigned> exponents() const { return exponents_; }
    unsigned operator[](std::size_t i) const { return exponents_[i]; }
    unsigned total() const {
        unsigned s = 0;
        for (const unsigned m : exponents_) s += m;
        return s;
    }

    std::string to_string(char sep = ';') const {
        std::string s;
        for (std::size_t i = 0; i < exponents_.size(); ++i) {
            if (i) s += sep;
            s += std::to_string(exponents_[i]);
        }
        return s;
    }

    friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;
    friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

private:
    std::vector<unsigned> exponents_;
};

/// prod_i (n + h_i)^{m_i} if it is <= cap, nullopt otherwise (overflow included).
inline std::optional<u64> ray_product(u64 n, const OffsetSet& h, const ExponentVector& m,
                                      u64 cap = std::numeric_limits<u64>::max()) {
    if (m.size() != h.k()) throw std::invalid_argument("ray_product: exponent vector length differs from k");
    u128 acc = 1;
    for (std::size_t i = 0; i < h.k(); ++i) {
        const u128 base = static_cast<u128>(n) + h[i];
        for (unsigned e = 0; e < m[i]; ++e) {
            acc *= base;
            if (acc > cap) return std::nullopt;
        }
    }
    return static_cast<u64>(acc);
}

/// One prime-power k-tuple: entries (n + h_i)^{m_i}, all bases prime.
struct RayPoint {
    u64 base;
    OffsetSet offsets;
    ExponentVector exponents;
    u64 product;

    std::size_t k() const { return offsets.k(); }
    friend bool operator==(const RayPoint&, const RayPoint&) = default;
};

struct TupleWeight {
    double value;
    bool is_indicator;
};

namespace detail {
inline void check_tuple_range(const ArithTable& t, u64 n, const OffsetSet& h, const char* what) {
    const u128 top = static_cast<u128>(n) + h.max_offset();
    if (top > t.limit())
        throw std::out_of_range(std::string(what) + ": n + max(H) = " + std::to_string(static_cast<u64>(top)) +
                                " exceeds table limit " + std::to_string(t.limit()));
}

inline bool all_prime(const ArithTable& t, u64 n, const OffsetSet& h) {
    for (const u64 off : h.offsets())
        if (!t.is_prime(n + off)) return false;
    return true;
}
}  // namespace detail

/// (-1)^k prod_i mu(n+h_i) Lambda(n+h_i) / log(n+h_i), built from the exact
/// prime-power structure (Lambda(p^a)/log(p^a) = 1/a). With the (-1)^k sign
/// folded in, the weight is 1 exactly when every entry is prime and 0 otherwise.
inline TupleWeight tuple_weight(const ArithTable& t, u64 n, const OffsetSet& h) {
    if (n < 2) throw std::invalid_argument("tuple_weight: n must be >= 2");
    detail::check_tuple_range(t, n, h, "tuple_weight");
    double value = (h.k() % 2 == 0) ? 1.0 : -1.0;
    for (const u64 off : h.offsets()) {
        const u64 e = n + off;
        const auto pp = prime_power_decompose(t, e);
        if (!pp) return {0.0, true};
        value *= mu(t, e) * (1.0 / pp->exponent);
        if (value == 0.0) return {0.0, true};
    }
    return {value, value == 0.0 || value == 1.0};
}

/// Number of n in [2, r] with every n + h_i prime.
inline u64 pi_k(const ArithTable& t, u64 r, const OffsetSet& h) {
    if (r < 2) return 0;
    detail::check_tuple_range(t, r, h, "pi_k");
    u64 count = 0;
    for (u64 n = 2; n <= r; ++n) count += detail::all_prime(t, n, h);
    return count;
}

/// Number of n >= 2 with every n + h_i prime and prod_i (n+h_i)^{m_i} <= x.
inline u64 pi_k_power(const ArithTable& t, u64 x, const OffsetSet& h, const ExponentVector& m) {
    if (m.size() != h.k()) throw std::invalid_argument("pi_k_power: exponent vector length differs from k");
    u64 count = 0;
    for (u64 n = 2;; ++n) {
        if (!ray_product(n, h, m, x)) break;  // product is increasing in n
        detail::check_tuple_range(t, n, h, "pi_k_power");
        count += detail::all_prime(t, n, h);
    }
    return count;
}

/// Calls visit(m) for every exponent vector whose smallest product (base n = 2)
/// is <= x. Every such vector has sum(m) <= floor(log2 x).
template <typename Visit>
void for_each_exponent_vector(const OffsetSet& h, u64 x, Visit&& visit) {
    std::vector<unsigned> m(h.k(), 1);
    auto rec = [&](auto&& self, std::size_t i, u128 partial) -> void {
        if (i == h.k()) {
            visit(ExponentVector(m));
            return;
        }
        const u128 base = 2 + static_cast<u128>(h[i]);
        u128 p = partial * base;
        for (unsigned e = 1; p <= x; ++e) {
            m[i] = e;
            self(self, i + 1, p);
            p *= base;
        }
        m[i] = 1;
    };
    rec(rec, 0, 1);
}

/// Prime-power k-tuples along the ray H up to x: sum over m of pi_k_power.
inline u64 capital_pi_k(const ArithTable& t, u64 x, const OffsetSet& h) {
    if (x < 2) return 0;
    u64 total = 0;
    for_each_exponent_vector(h, x, [&](const ExponentVector& m) { total += pi_k_power(t, x, h, m); });
    return total;
}

/// The ray point carried by the integer v >= 2: its distinct primes p_0 < ... give
/// base p_0, offsets p_i - p_0 and exponents from the factorization.
inline RayPoint ray_of(const ArithTable& t, u64 v) {
    if (v < 2) throw std::invalid_argument("ray_of: integer must be >= 2");
    const auto f = t.factorize(v);
    std::vector<u64> offs;
    std::vector<unsigned> exps;
    offs.reserve(f.size());
    exps.reserve(f.size());
    for (const auto& pp : f) {
        offs.push_back(pp.prime - f.front().prime);
        exps.push_back(pp.exponent);
    }
    return RayPoint{f.front().prime, OffsetSet(std::move(offs)), ExponentVector(std::move(exps)), v};
}

struct RayOptions {
    u64 bound = 1'000'000;
    Threads threads{};
};

namespace detail {
inline void check_ray_cutoff(const ArithTable& t, u64 x, const RayOptions& opts, const char* what) {
    if (x > opts.bound)
        throw std::out_of_range(std::string(what) + ": x = " + std::to_string(x) + " above enumeration bound " +
                                std::to_string(opts.bound));
    detail::check_cutoff(t, x, what);
}

constexpr u64 ray_block = 1 << 14;
}  // namespace detail

/// Every (H, m, n) with all n + h_i prime and product <= x, ordered by product.
/// Generated by factorizing each integer in [2, x], so each appears exactly once.
inline std::vector<RayPoint> enumerate_rays(const ArithTable& t, u64 x, RayOptions opts = {}) {
    if (x < 2) return {};
    detail::check_ray_cutoff(t, x, opts, "enumerate_rays");
    const u64 count = x - 1;
    const u64 blocks = (count + detail::ray_block - 1) / detail::ray_block;
    std::vector<std::vector<RayPoint>> parts(blocks);
    parallel_for(blocks, opts.threads, [&](std::size_t b) {
        const u64 lo = 2 + b * detail::ray_block;
        const u64 hi = std::min<u64>(lo + detail::ray_block, x + 1);
        parts[b].reserve(hi - lo);
        for (u64 v = lo; v < hi; ++v) parts[b].push_back(ray_of(t, v));
    });
    std::vector<RayPoint> out;
    out.reserve(count);
    for (auto& p : parts)
        for (auto& r : p) out.push_back(std::move(r));
    return out;
}

/// Independent generator: choose increasing primes p_0 < p_1 < ... by depth-first
/// search, then every exponent vector with product <= x. Sorted by product.
inline std::vector<RayPoint> enumerate_rays_combinatorial(const ArithTable& t, u64 x) {
    std::vector<RayPoint> out;
    if (x < 2) return out;
    detail::check_cutoff(t, x, "enumerate_rays_combinatorial");
    std::vector<u64> primes;
    for (u64 p = 2; p <= x; ++p)
        if (t.is_prime(p)) primes.push_back(p);

    std::vector<u64> chosen;
    auto emit_exponents = [&] {
        std::vector<u64> offs;
        for (const u64 p : chosen) offs.push_back(p - chosen.front());
        const OffsetSet h(offs);
        std::vector<unsigned> m(chosen.size(), 1);
        auto rec = [&](auto&& self, std::size_t i, u128 partial) -> void {
            if (i == chosen.size()) {
                out.push_back(RayPoint{chosen.front(), h, ExponentVector(m), static_cast<u64>(partial)});
                return;
            }
            // Remaining primes need at least exponent 1 each.
            u128 rest = 1;
            for (std::size_t j = i + 1; j < chosen.size(); ++j) rest *= chosen[j];
            u128 p = partial * chosen[i];
            for (unsigned e = 1; p * rest <= x; ++e) {
                m[i] = e;
                self(self, i + 1, p);
                p *= chosen[i];
            }
            m[i] = 1;
        };
        rec(rec, 0, 1);
    };
    auto dfs = [&](auto&& self, std::size_t from, u128 radical) -> void {
        for (std::size_t i = from; i < primes.size(); ++i) {
            const u128 next = radical * primes[i];
            if (next > x) break;
            chosen.push_back(primes[i]);
            emit_exponents();
            self(self, i + 1, next);
            chosen.pop_back();
        }
    };
    dfs(dfs, 0, 1);
    std::sort(out.begin(), out.end(), [](const RayPoint& a, const RayPoint& b) { return a.product < b.product; });
    return out;
}

/// Prime-power tuple counts grouped by offset pattern, for every ray below x.
inline std::map<OffsetSet, u64> ray_counts(const ArithTable& t, u64 x, RayOptions opts = {}) {
    std::map<OffsetSet, u64> counts;
    if (x < 2) return counts;
    detail::check_ray_cutoff(t, x, opts, "ray_counts");
    const u64 blocks = (x - 1 + detail::ray_block - 1) / detail::ray_block;
    std::vector<std::map<OffsetSet, u64>> parts(blocks);
    parallel_for(blocks, opts.threads, [&](std::size_t b) {
        const u64 lo = 2 + b * detail::ray_block;
        const u64 hi = std::min<u64>(lo + detail::ray_block, x + 1);
        for (u64 v = lo; v < hi; ++v) ++parts[b][ray_of(t, v).offsets];
    });
    for (const auto& p : parts)
        for (const auto& [h, c] : p) counts[h] += c;
    return counts;
}

/// Sum over all rays of the prime-power tuple count, set against floor(x).
struct LocalizationReport {
    u64 sum;
    u64 floor_x;
    u64 floor_minus_one;
    std::size_t distinct_rays;

    bool matches_floor() const { return sum == floor_x; }
    bool matches_floor_minus_one() const { return sum == floor_minus_one; }
    /// "floor", "floor-1" or "neither".
    std::string match() const {
        if (matches_floor()) return "floor";
        if (matches_floor_minus_one()) return "floor-1";
        return "neither";
    }
};

/// The integer 1 has no prime-power factorization, so the sum is floor(x) - 1
/// for every x >= 1; both comparisons are reported.
inline LocalizationReport localization_sum(const ArithTable& t, u64 x, RayOptions opts = {}) {
    const auto counts = ray_counts(t, x, opts);
    u64 sum = 0;
    for (const auto& [h, c] : counts) sum += c;
    return {sum, x, x == 0 ? 0 : x - 1, counts.size()};
}

/// CSV with columns k,offsets,exponents,base,product.
inline void write_rays_csv(std::ostream& os, std::span<const RayPoint> rays) {
    os << "k,offsets,exponents,base,product\n";
    for (const auto& r : rays)
        os << r.k() << ',' << r.offsets.to_string() << ',' << r.exponents.to_string() << ',' << r.base << ','
           << r.product << '\n';
}

}  // namespace ptk
