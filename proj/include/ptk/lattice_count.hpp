/// @file lattice_count.hpp
/// @brief Lattice points under graphs, in disks, balls and below the divisor
/// hyperbola, counted by direct floor sums, through the localization identity
/// (floor(v) = 1 + number of prime-power tuples up to v), and by brute force;
/// plus error series and log-log exponent fits.
///
/// Every boundary floor is exact integer arithmetic (isqrt, integer division).
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptk/arith_table.hpp"
#include "ptk/common.hpp"
#include "ptk/int_math.hpp"
#include "ptk/quadrature.hpp"
#include "ptk/special.hpp"
#include "ptk/tuple_core.hpp"

namespace ptk {

enum class CountMethod { direct, localization, brute_force, hyperbola };

inline std::string_view to_string(CountMethod m) {
    switch (m) {
        case CountMethod::direct: return "direct";
        case CountMethod::localization: return "localization";
        case CountMethod::brute_force: return "brute_force";
        case CountMethod::hyperbola: return "hyperbola";
    }
    return "?";
}

enum class RegionKind { graph, circle_quadrant, full_circle, divisor_hyperbola, ball3, rectangle };

inline std::string_view to_string(RegionKind k) {
    switch (k) {
        case RegionKind::graph: return "graph";
        case RegionKind::circle_quadrant: return "circle_quadrant";
        case RegionKind::full_circle: return "full_circle";
        case RegionKind::divisor_hyperbola: return "divisor_hyperbola";
        case RegionKind::ball3: return "ball3";
        case RegionKind::rectangle: return "rectangle";
    }
    return "?";
}

struct CountResult {
    u64 count;
    double main_term;
    /// main_term - count
    double error;
    CountMethod method;
    /// Floors above the localization cap that were taken directly instead.
    u64 fallback_terms = 0;
};

struct LatticeOptions {
    Threads threads{};
    /// Largest floor value routed through ray enumeration.
    u64 localization_cap = 1'000'000;
};

namespace detail {

inline CountResult make_result(u64 count, double main_term, CountMethod m, u64 fallback = 0) {
    return {count, main_term, main_term - static_cast<double>(count), m, fallback};
}

/// Sum of body(n) over n in [lo, hi], split into fixed blocks; exact integer merge.
template <typename Body>
u64 block_sum(u64 lo, u64 hi, Threads threads, Body&& body) {
    if (hi < lo) return 0;
    constexpr u64 block = 1 << 16;
    const u64 n = hi - lo + 1;
    const u64 blocks = (n + block - 1) / block;
    std::vector<u64> partial(blocks, 0);
    parallel_for(blocks, threads, [&](std::size_t b) {
        const u64 a = lo + b * block;
        const u64 z = std::min(hi, a + block - 1);
        u64 s = 0;
        for (u64 i = a; i <= z; ++i) s += body(i);
        partial[b] = s;
    });
    u64 total = 0;
    for (const u64 p : partial) total += p;
    return total;
}

/// Maps each floor value v to 1 + localization_sum(v) (v >= 2), or to v itself
/// when v < 2 or v exceeds the cap.
struct LocalizedFloors {
    std::vector<u64> mapped;
    u64 fallback_terms = 0;
};

inline LocalizedFloors localize_floors(const std::vector<u64>& values, const LatticeOptions& opts) {
    std::vector<u64> uniq;
    for (const u64 v : values)
        if (v >= 2 && v <= opts.localization_cap) uniq.push_back(v);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    std::vector<u64> sums(uniq.size(), 0);
    if (!uniq.empty()) {
        const ArithTable table = build_table(std::max<u64>(uniq.back(), 2));
        RayOptions ro;
        ro.bound = opts.localization_cap;
        parallel_for(uniq.size(), opts.threads, [&](std::size_t i) { sums[i] = localization_sum(table, uniq[i], ro).sum; });
    }
    LocalizedFloors out;
    out.mapped.reserve(values.size());
    for (const u64 v : values) {
        if (v < 2) {
            out.mapped.push_back(v);
        } else if (v > opts.localization_cap) {
            out.mapped.push_back(v);
            ++out.fallback_terms;
        } else {
            const auto it = std::lower_bound(uniq.begin(), uniq.end(), v);
            out.mapped.push_back(sums[static_cast<std::size_t>(it - uniq.begin())] + 1);
        }
    }
    return out;
}

inline u64 sum_of(const std::vector<u64>& v) {
    u64 s = 0;
    for (const u64 x : v) s += x;
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graphs

/// Points (n, j) with 0 <= n <= x_max and 1 <= j <= f(n): sum_n floor(f(n)).
/// f must be nonnegative, finite and below 2^53 at every integer n <= x_max.
/// main_term is the integral of f over [0, x_max].
inline CountResult count_under_graph(const std::function<double(double)>& f, u64 x_max, CountMethod method,
                                     LatticeOptions opts = {}) {
    std::vector<u64> floors(x_max + 1);
    for (u64 n = 0; n <= x_max; ++n) {
        const double v = f(static_cast<double>(n));
        if (!std::isfinite(v) || v < 0 || v >= 9007199254740992.0)
            throw std::domain_error("count_under_graph: f(n) not finite, negative or >= 2^53 at n = " + std::to_string(n));
        floors[n] = static_cast<u64>(std::floor(v));
    }
    double main_term = 0.0;
    if (x_max > 0) {
        std::vector<double> pts;
        const u64 panels = std::min<u64>(x_max, 4096);
        for (u64 i = 0; i <= panels; ++i) pts.push_back(static_cast<double>(x_max) * i / panels);
        QuadratureOptions q;
        q.abs_tol = 1e-9;
        q.rel_tol = 1e-13;
        main_term = integrate(f, pts, q).value;
    }
    switch (method) {
        case CountMethod::direct: return detail::make_result(detail::sum_of(floors), main_term, method);
        case CountMethod::localization: {
            const auto loc = detail::localize_floors(floors, opts);
            return detail::make_result(detail::sum_of(loc.mapped), main_term, method, loc.fallback_terms);
        }
        case CountMethod::brute_force: {
            u64 count = 0;
            for (u64 n = 0; n <= x_max; ++n) {
                const double v = f(static_cast<double>(n));
                for (u64 j = 1; static_cast<double>(j) <= v; ++j) ++count;
            }
            return detail::make_result(count, main_term, method);
        }
        case CountMethod::hyperbola: break;
    }
    throw std::invalid_argument("count_under_graph: method not available for graphs");
}

// ---------------------------------------------------------------------------
// Disks

inline constexpr u64 max_circle_radius = 10'000'000;
inline constexpr u64 max_brute_circle_radius = 2000;

/// #{(a, b) in Z^2 : a^2 + b^2 <= n2}.
inline u64 disk_count_sq(u64 n2, Threads threads = {}) {
    const u64 s = isqrt(n2);
    return 1 + 4 * s + 4 * detail::block_sum(1, s, threads, [n2](u64 n) { return isqrt(n2 - n * n); });
}

/// #{(a, b) in Z^2 : a^2 + b^2 <= R^2} = 1 + 4R + 4 sum_{n=1}^{R} isqrt(R^2 - n^2).
inline CountResult gauss_circle_count(u64 R, CountMethod method = CountMethod::direct, LatticeOptions opts = {}) {
    if (R == 0) throw std::invalid_argument("gauss_circle_count: R must be positive");
    if (R > max_circle_radius)
        throw std::out_of_range("gauss_circle_count: R = " + std::to_string(R) + " above " + std::to_string(max_circle_radius));
    const double Rd = static_cast<double>(R);
    const double main_term = std::numbers::pi * Rd * Rd;
    const u64 r2 = R * R;
    switch (method) {
        case CountMethod::direct: return detail::make_result(disk_count_sq(r2, opts.threads), main_term, method);
        case CountMethod::localization: {
            std::vector<u64> floors(R);
            for (u64 n = 1; n <= R; ++n) floors[n - 1] = isqrt(r2 - n * n);
            const auto loc = detail::localize_floors(floors, opts);
            const u64 axis = detail::localize_floors({R}, opts).mapped[0];
            return detail::make_result(1 + 4 * axis + 4 * detail::sum_of(loc.mapped), main_term, method,
                                       loc.fallback_terms);
        }
        case CountMethod::brute_force: {
            if (R > max_brute_circle_radius)
                throw std::out_of_range("gauss_circle_count: brute force limited to R <= " +
                                        std::to_string(max_brute_circle_radius));
            const std::int64_t r = static_cast<std::int64_t>(R);
            u64 count = 0;
            for (std::int64_t a = -r; a <= r; ++a)
                for (std::int64_t b = -r; b <= r; ++b) count += (a * a + b * b <= r * r);
            return detail::make_result(count, main_term, method);
        }
        case CountMethod::hyperbola: break;
    }
    throw std::invalid_argument("gauss_circle_count: method not available for circles");
}

/// Pieces of the quarter-disk count under f(n) = sqrt(R^2 - n^2).
/// With s = floor(R / sqrt 2), the points with a, b >= 1 split into the s x s
/// square and two mirror-image strips a > s.
struct CircleSplit {
    u64 R;
    u64 s;
    /// sum_{n=1}^{R} floor f(n): points with a >= 1, b >= 1.
    u64 positive_quadrant;
    /// sum_{n=0}^{R} floor f(n): includes the column a = 0.
    u64 column_sum;
    /// s^2 + 2 sum_{n=s+1}^{R} floor f(n)
    u64 square_split;
    /// floor(R^2/2) + 2 sum_{n=s}^{R} floor f(n)
    u64 half_area_split;
};

inline CircleSplit circle_square_split(u64 R) {
    if (R == 0 || R > max_circle_radius) throw std::out_of_range("circle_square_split: R out of range");
    const u64 r2 = R * R;
    const u64 s = isqrt(r2 / 2);  // floor(R / sqrt 2)
    auto fl = [r2](u64 n) { return isqrt(r2 - n * n); };
    CircleSplit c{R, s, 0, 0, 0, 0};
    for (u64 n = 1; n <= R; ++n) c.positive_quadrant += fl(n);
    c.column_sum = c.positive_quadrant + R;
    u64 strip = 0;
    for (u64 n = s + 1; n <= R; ++n) strip += fl(n);
    c.square_split = s * s + 2 * strip;
    c.half_area_split = r2 / 2 + 2 * (strip + fl(s));
    return c;
}

// ---------------------------------------------------------------------------
// Divisor hyperbola

inline constexpr u64 max_direct_divisor = 1'000'000'000;
inline constexpr u64 max_brute_divisor = 1'000'000;

/// sum_{n=1}^{x} floor(x / n) = #{(a, b) : a, b >= 1, a b <= x};
/// main_term = x log x + (2 gamma - 1) x.
inline CountResult divisor_hyperbola_count(u64 x, CountMethod method = CountMethod::direct, LatticeOptions opts = {}) {
    if (x == 0) throw std::invalid_argument("divisor_hyperbola_count: x must be positive");
    if (x > (u64{1} << 62)) throw std::out_of_range("divisor_hyperbola_count: x too large");
    const double xd = static_cast<double>(x);
    const double main_term = xd * std::log(xd) + (2 * euler_gamma - 1) * xd;
    switch (method) {
        case CountMethod::direct:
            if (x > max_direct_divisor)
                throw std::out_of_range("divisor_hyperbola_count: direct sum limited to x <= 10^9");
            return detail::make_result(detail::block_sum(1, x, opts.threads, [x](u64 n) { return x / n; }), main_term,
                                       method);
        case CountMethod::hyperbola: {
            const u64 s = isqrt(x);
            const u64 half = detail::block_sum(1, s, opts.threads, [x](u64 n) { return x / n; });
            return detail::make_result(2 * half - s * s, main_term, method);
        }
        case CountMethod::localization: {
            if (x > max_direct_divisor)
                throw std::out_of_range("divisor_hyperbola_count: localization limited to x <= 10^9");
            std::vector<u64> floors(x);
            for (u64 n = 1; n <= x; ++n) floors[n - 1] = x / n;
            const auto loc = detail::localize_floors(floors, opts);
            return detail::make_result(detail::sum_of(loc.mapped), main_term, method, loc.fallback_terms);
        }
        case CountMethod::brute_force: {
            if (x > max_brute_divisor)
                throw std::out_of_range("divisor_hyperbola_count: brute force limited to x <= 10^6");
            u64 count = 0;
            for (u64 a = 1; a <= x; ++a)
                for (u64 b = 1; a * b <= x; ++b) ++count;
            return detail::make_result(count, main_term, method);
        }
    }
    throw std::invalid_argument("divisor_hyperbola_count: unknown method");
}

// ---------------------------------------------------------------------------
// Balls

inline constexpr u64 max_ball_radius = 3000;
inline constexpr u64 max_brute_ball_radius = 200;

/// #{(a, b, c) in Z^3 : a^2 + b^2 + c^2 <= R^2}, summed over slices c = const.
inline CountResult ball3_count(u64 R, CountMethod method = CountMethod::direct, LatticeOptions opts = {}) {
    if (R == 0) throw std::invalid_argument("ball3_count: R must be positive");
    if (R > max_ball_radius) throw std::out_of_range("ball3_count: R above 3000");
    const double Rd = static_cast<double>(R);
    const double main_term = 4.0 / 3.0 * std::numbers::pi * Rd * Rd * Rd;
    const u64 r2 = R * R;
    switch (method) {
        case CountMethod::direct: {
            const u64 slices = detail::block_sum(1, R, opts.threads, [r2](u64 c) { return disk_count_sq(r2 - c * c); });
            return detail::make_result(disk_count_sq(r2) + 2 * slices, main_term, method);
        }
        case CountMethod::brute_force: {
            if (R > max_brute_ball_radius) throw std::out_of_range("ball3_count: brute force limited to R <= 200");
            const std::int64_t r = static_cast<std::int64_t>(R);
            u64 count = 0;
            for (std::int64_t a = -r; a <= r; ++a)
                for (std::int64_t b = -r; b <= r; ++b)
                    for (std::int64_t c = -r; c <= r; ++c) count += (a * a + b * b + c * c <= r * r);
            return detail::make_result(count, main_term, method);
        }
        default: break;
    }
    throw std::invalid_argument("ball3_count: method not available for balls");
}

// ---------------------------------------------------------------------------
// Error series

struct ErrorSample {
    u64 R;
    u64 count;
    double main_term;
    double error;
};

struct ErrorSeries {
    RegionKind kind;
    std::vector<ErrorSample> samples;
    /// Least-squares slope of log|error| against log R.
    double fitted_exponent = 0;
    double intercept = 0;
    /// RMS of the fit residuals.
    double residual = 0;
    /// Standard error of the slope.
    double slope_stderr = 0;
    u64 window_min = 0;
    u64 window_max = 0;
    std::size_t samples_used = 0;
};

/// Up to `count` integers spaced geometrically over [lo, hi], deduplicated.
inline std::vector<u64> geometric_samples(u64 lo, u64 hi, std::size_t count) {
    if (lo == 0 || hi < lo || count < 2) throw std::invalid_argument("geometric_samples: need 0 < lo <= hi, count >= 2");
    std::vector<u64> out;
    const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
    for (std::size_t i = 0; i < count; ++i) {
        const double v = static_cast<double>(lo) * std::pow(ratio, static_cast<double>(i) / static_cast<double>(count - 1));
        out.push_back(std::clamp<u64>(static_cast<u64>(std::llround(v)), lo, hi));
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Count and main term for one sample of a fit-able region, fastest exact method.
/// circle_quadrant is the quarter of the punctured disk (a >= 1, b >= 0);
/// rectangle is the R x R block of columns 1..R under the constant graph f = R.
inline ErrorSample region_sample(RegionKind kind, u64 R) {
    switch (kind) {
        case RegionKind::full_circle: {
            const auto c = gauss_circle_count(R);
            return {R, c.count, c.main_term, c.error};
        }
        case RegionKind::circle_quadrant: {
            const auto c = gauss_circle_count(R);
            const u64 q = (c.count - 1) / 4;
            const double m = (c.main_term - 1) / 4;
            return {R, q, m, m - static_cast<double>(q)};
        }
        case RegionKind::divisor_hyperbola: {
            const auto c = divisor_hyperbola_count(R, CountMethod::hyperbola);
            return {R, c.count, c.main_term, c.error};
        }
        case RegionKind::ball3: {
            const auto c = ball3_count(R);
            return {R, c.count, c.main_term, c.error};
        }
        case RegionKind::rectangle: {
            const double m = static_cast<double>(R) * static_cast<double>(R);
            return {R, R * R, m, m - static_cast<double>(R * R)};
        }
        case RegionKind::graph: break;
    }
    throw std::invalid_argument("region_sample: graph regions need a function; not available for fits");
}

/// Samples the region at each R (in parallel; results by index) and fits the
/// growth exponent of |error|. Requires >= 8 samples spanning >= 2 decades and
/// at least 3 samples with nonzero error.
inline ErrorSeries error_exponent_fit(RegionKind kind, std::vector<u64> R_samples, Threads threads = {}) {
    if (R_samples.size() < 8) throw std::invalid_argument("error_exponent_fit: need at least 8 samples");
    std::sort(R_samples.begin(), R_samples.end());
    if (R_samples.front() == 0) throw std::invalid_argument("error_exponent_fit: samples must be positive");
    if (static_cast<double>(R_samples.back()) < 100.0 * static_cast<double>(R_samples.front()))
        throw std::invalid_argument("error_exponent_fit: samples must span at least two decades");

    ErrorSeries es;
    es.kind = kind;
    es.samples.resize(R_samples.size());
    parallel_for(R_samples.size(), threads, [&](std::size_t i) { es.samples[i] = region_sample(kind, R_samples[i]); });

    std::vector<double> xs, ys;
    for (const auto& s : es.samples) {
        if (s.error == 0.0) continue;
        xs.push_back(std::log(static_cast<double>(s.R)));
        ys.push_back(std::log(std::abs(s.error)));
    }
    if (xs.size() < 3)
        throw std::invalid_argument("error_exponent_fit: errors vanish on the samples; no exponent to fit");
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    es.fitted_exponent = sxy / sxx;
    es.intercept = my - es.fitted_exponent * mx;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (es.intercept + es.fitted_exponent * xs[i]);
        ss += r * r;
    }
    es.residual = std::sqrt(ss / n);
    es.slope_stderr = xs.size() > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
    es.window_min = R_samples.front();
    es.window_max = R_samples.back();
    es.samples_used = xs.size();
    return es;
}

}  // namespace ptk
