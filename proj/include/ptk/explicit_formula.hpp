/// @file explicit_formula.hpp
/// @brief Analytic counterparts of the exact counts: prime zeta two ways,
/// Riemann's explicit formula for pi(x) and Pi(x) from a zero table, the
/// truncated Perron integral, and the tuple integral Ei_(k).
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptk/arith_table.hpp"
#include "ptk/common.hpp"
#include "ptk/quadrature.hpp"
#include "ptk/special.hpp"
#include "ptk/tuple_core.hpp"
#include "ptk/zeros.hpp"

namespace ptk {

// ---------------------------------------------------------------------------
// Prime zeta P(s) = sum_p p^{-s}

struct PrimeZeta {
    double s;
    /// -sum_{n<=N} mu(n) Lambda(n) / (log n n^s), i.e. the primes up to N.
    double direct;
    double direct_tail_bound;
    u64 direct_terms;
    /// sum_{m<=M} mu(m)/m log zeta(m s).
    double mobius;
    double mobius_tail_bound;
    unsigned mobius_terms;

    bool consistent() const { return std::abs(direct - mobius) <= direct_tail_bound + mobius_tail_bound; }
};

namespace detail {
inline int mobius_small(u64 n) {
    int r = 1;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        r = -r;
    }
    return n > 1 ? -r : r;
}
}  // namespace detail

inline PrimeZeta prime_zeta(double s, const ArithTable& t, u64 N) {
    if (!(s > 1.0)) throw std::domain_error("prime_zeta: diverges for s <= 1, got s = " + std::to_string(s));
    detail::check_cutoff(t, N, "prime_zeta");
    if (N < 2) throw std::invalid_argument("prime_zeta: N must be >= 2");

    PrimeZeta r{};
    r.s = s;
    r.direct_terms = N;
    // Smallest terms first.
    double a = 0.0;
    for (u64 n = N; n >= 2; --n) {
        if (mu(t, n) == 0) continue;
        const auto pp = prime_power_decompose(t, n);
        if (!pp) continue;
        // mu(p) Lambda(p) / log p = -1
        a += std::pow(static_cast<double>(n), -s);
    }
    r.direct = a;
    const double Nd = static_cast<double>(N);
    // pi(t) < 1.25506 t / log t for t > 1 bounds the prime tail by partial summation.
    r.direct_tail_bound = N >= 17 ? 1.25506 * s * std::pow(Nd, 1 - s) / ((s - 1) * std::log(Nd))
                                  : std::pow(Nd, 1 - s) / (s - 1);

    // log zeta(sigma) <= zeta(sigma) - 1 <= 2^{-sigma} (1 + 2/(sigma - 1)).
    auto term_bound = [](double sigma) { return std::exp2(-sigma) * (1 + 2 / (sigma - 1)); };
    unsigned M = 1;
    while (term_bound((M + 1) * s) / (M + 1) > 1e-20) ++M;
    double b = 0.0;
    for (unsigned m = M; m >= 1; --m) {
        const int mu_m = m <= t.limit() ? mu(t, m) : detail::mobius_small(m);
        if (mu_m == 0) continue;
        b += mu_m / static_cast<double>(m) * std::log1p(zeta_minus_one(m * s));
    }
    r.mobius = b;
    r.mobius_terms = M;
    const double q = std::exp2(-s);
    // Geometric tail of the omitted m > M plus rounding in the Euler–Maclaurin sums.
    r.mobius_tail_bound = term_bound((M + 1) * s) / (M + 1) / (1 - q) + 1e-15;
    return r;
}

// ---------------------------------------------------------------------------
// Riemann's explicit formula

/// Breakdown of the explicit formula; value = main_term - zero_sum - log2_term - trivial_zero_sum.
struct ExplicitEval {
    double value = 0;
    double main_term = 0;
    double zero_sum = 0;
    double log2_term = 0;
    double trivial_zero_sum = 0;
    std::size_t zeros_used = 0;
    unsigned truncation_m = 0;
};

struct ExplicitOptions {
    /// Leading ordinates of the table to use; 0 means all.
    std::size_t zeros_used = 0;
    /// Mobius truncation; 0 means floor(log2 x).
    unsigned truncation_m = 0;
    Threads threads{};
};

namespace detail {
inline unsigned floor_log2(double x) {
    unsigned m = 0;
    while (std::exp2(m + 1) <= x) ++m;
    return m;
}

/// sum_k Ei(-2k y), stopped once a term falls below 1e-14 in magnitude.
inline double trivial_zero_series(double y) {
    double sum = 0.0;
    for (int k = 1; k < 100000; ++k) {
        const double term = ei(-2.0 * k * y);
        sum += term;
        if (std::abs(term) < 1e-14) break;
    }
    return sum;
}
}  // namespace detail

/// pi(x) ~ sum_{m<=M} mu(m)/m { Ei(log x / m) - sum_rho Ei(rho log x / m) - log 2
///                              - sum_k Ei(-2k log x / m) } with rho = 1/2 + i gamma.
/// Each ordinate contributes 2 Re Ei(rho y) for the pair (rho, conj rho); the per-zero
/// terms are reduced with a fixed pairwise tree so the sum is bit-stable.
inline ExplicitEval riemann_pi_explicit(double x, const ZeroTable& zeros, ExplicitOptions opts = {}) {
    if (zeros.size() == 0) throw std::invalid_argument("riemann_pi_explicit: empty zero table");
    if (!(x >= 2.0)) throw std::domain_error("riemann_pi_explicit: x must be >= 2, got " + std::to_string(x));
    const std::size_t nz = opts.zeros_used == 0 ? zeros.size() : opts.zeros_used;
    if (nz > zeros.size())
        throw std::invalid_argument("riemann_pi_explicit: requested " + std::to_string(nz) + " zeros, table has " +
                                    std::to_string(zeros.size()));
    const unsigned M = opts.truncation_m == 0 ? detail::floor_log2(x) : opts.truncation_m;

    ExplicitEval r;
    r.zeros_used = nz;
    r.truncation_m = M;
    const double L = std::log(x);
    std::vector<double> terms(nz);
    for (unsigned m = 1; m <= M; ++m) {
        const int mu_m = detail::mobius_small(m);
        if (mu_m == 0) continue;
        const double w = mu_m / static_cast<double>(m);
        const double y = L / m;
        parallel_for(nz, opts.threads, [&](std::size_t j) {
            terms[j] = 2.0 * ei(std::complex<double>(0.5 * y, zeros.ordinates[j] * y)).real();
        });
        r.main_term += w * ei(y);
        r.zero_sum += w * tree_sum<double>(terms);
        r.log2_term += w * std::numbers::ln2;
        r.trivial_zero_sum += w * detail::trivial_zero_series(y);
    }
    r.value = r.main_term - r.zero_sum - r.log2_term - r.trivial_zero_sum;
    return r;
}

/// Pi(x) ~ sum_{n<=log2 x} (explicit pi)(x^{1/n}); parts are summed across n.
inline ExplicitEval capital_pi_explicit(double x, const ZeroTable& zeros, ExplicitOptions opts = {}) {
    if (!(x >= 2.0)) throw std::domain_error("capital_pi_explicit: x must be >= 2, got " + std::to_string(x));
    ExplicitEval total;
    const unsigned N = detail::floor_log2(x);
    for (unsigned n = 1; n <= N; ++n) {
        const double root = std::pow(x, 1.0 / n);
        if (root < 2.0) break;
        const auto e = riemann_pi_explicit(root, zeros, opts);
        total.value += e.value;
        total.main_term += e.main_term;
        total.zero_sum += e.zero_sum;
        total.log2_term += e.log2_term;
        total.trivial_zero_sum += e.trivial_zero_sum;
        total.zeros_used = e.zeros_used;
        total.truncation_m = std::max(total.truncation_m, e.truncation_m);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Truncated Perron integral

struct PerronResult {
    double approx;
    /// Imaginary part left over by quadrature; zero in exact arithmetic.
    double imag_residual;
    /// x^c / (pi T |log x|)
    double bound;
    int indicator;
    double x, c, T;

    double deviation() const { return std::abs(approx - indicator); }
    bool within_bound() const { return deviation() <= bound; }
};

/// (1 / 2 pi i) integral_{c-iT}^{c+iT} x^s / s ds along the vertical segment.
/// The segment is cut into at least min_panels equal panels, and at least one
/// per half-period of x^{it}; each panel is integrated adaptively.
inline PerronResult perron_truncated(double x, double c, double T, std::size_t min_panels = 0) {
    if (!(x > 0)) throw std::domain_error("perron_truncated: x must be positive");
    if (x == 1.0) throw std::domain_error("perron_truncated: x = 1 is the discontinuity of the indicator");
    if (!(c > 0) || !(T > 0)) throw std::invalid_argument("perron_truncated: c and T must be positive");
    const double L = std::log(x);
    const double xc = std::pow(x, c);
    auto integrand = [&](double t) {
        const std::complex<double> s(c, t);
        return std::exp(s * L) / s / (2 * std::numbers::pi);
    };
    const std::size_t per_oscillation = static_cast<std::size_t>(std::ceil(2 * T * std::abs(L) / std::numbers::pi));
    std::size_t panels = std::max<std::size_t>({min_panels, per_oscillation, 2});
    if (panels % 2) ++panels;  // symmetric about t = 0
    std::vector<double> pts(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i)
        pts[i] = -T + 2 * T * static_cast<double>(i) / static_cast<double>(panels);
    pts[panels / 2] = 0.0;
    QuadratureOptions q;
    q.abs_tol = 1e-13 * std::max(1.0, xc);
    const auto res = integrate<std::complex<double>>(integrand, pts, q);
    PerronResult r{};
    r.approx = res.value.real();
    r.imag_residual = res.value.imag();
    r.bound = xc / (std::numbers::pi * T * std::abs(L));
    r.indicator = x > 1 ? 1 : 0;
    r.x = x;
    r.c = c;
    r.T = T;
    return r;
}

// ---------------------------------------------------------------------------
// Tuple integral

/// Ei_(k)(log r) = integral_2^r log^{k-1}(x_(k)) / log_(k)(x) dx, where x_(k) is the
/// geometric mean of x + h_i and log_(k)(x) = prod_i log(x + h_i).
inline double ei_k(double r, const OffsetSet& h, QuadratureOptions opts = {}) {
    if (!(r >= 2.0)) throw std::domain_error("ei_k: r must be >= 2, got " + std::to_string(r));
    if (r == 2.0) return 0.0;
    const std::size_t k = h.k();
    auto f = [&](double x) {
        double log_sum = 0.0;
        double log_prod = 1.0;
        for (const u64 off : h.offsets()) {
            const double l = std::log(x + static_cast<double>(off));
            log_sum += l;
            log_prod *= l;
        }
        return std::pow(log_sum / static_cast<double>(k), static_cast<double>(k - 1)) / log_prod;
    };
    return integrate(f, geometric_breakpoints(2.0, r), opts).value;
}

}  // namespace ptk
