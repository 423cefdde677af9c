/// @file special.hpp
/// @brief Exponential integral (real principal value and complex), the
/// logarithmic integral, and the Riemann zeta function for real s > 1.
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ptk {

inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

namespace detail {

/// Largest |z| for which the power series is used on well-conditioned inputs.
inline constexpr double ei_series_radius = 40.0;

// gamma + log(z) + sum z^n / (n n!); log is the principal branch, which for
// real negative z is replaced by log|z| (principal value on the cut).
template <typename T>
T ei_series(T z, T log_z) {
    T term = z;
    T sum = z;
    for (int n = 2; n < 500; ++n) {
        term *= z / static_cast<double>(n);
        const T add = term / static_cast<double>(n);
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return euler_gamma + log_z + sum;
}

// e^z / z * sum_k k! / z^k, truncated at the smallest term.
template <typename T>
T ei_asymptotic(T z) {
    T term = 1.0;
    T sum = 1.0;
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
        const T next = term * (static_cast<double>(k) / z);
        const double mag = std::abs(next);
        if (mag >= last) break;
        term = next;
        sum += term;
        last = mag;
        if (mag < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(z) / z * sum;
}

// E1(w) by the continued fraction e^{-w} / (w + 1 - 1/(w + 3 - 4/(w + 5 - ...)))
// evaluated with the modified Lentz method. Converges for |arg w| < pi.
template <typename T>
T e1_continued_fraction(T w) {
    constexpr double tiny = 1e-300;
    T b = w + 1.0;
    T c = 1.0 / tiny;
    T d = 1.0 / b;
    T h = d;
    for (int i = 1; i < 20000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const T del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-w);
    }
    throw std::runtime_error("E1 continued fraction did not converge");
}

}  // namespace detail

/// Principal-value exponential integral Ei(x) for real x != 0.
inline double ei(double x) {
    if (x == 0.0) throw std::domain_error("ei: singular at 0");
    if (!std::isfinite(x)) throw std::domain_error("ei: non-finite argument");
    if (x > 0) {
        if (x <= detail::ei_series_radius) return detail::ei_series(x, std::log(x));
        return detail::ei_asymptotic(x);
    }
    const double y = -x;
    if (y <= 2.0) return detail::ei_series(x, std::log(y));
    if (y > 700.0) return 0.0 * x;  // e^{-y} underflows
    return -detail::e1_continued_fraction(y);
}

/// Ei(z) continued off the real axis: gamma + Log z + sum z^n/(n n!), equal to
/// -E1(-z) + i pi sgn(Im z). On the real axis it is the principal value.
inline std::complex<double> ei(std::complex<double> z) {
    using C = std::complex<double>;
    if (z == C(0.0, 0.0)) throw std::domain_error("ei_complex: singular at 0");
    if (z.imag() == 0.0) return {ei(z.real()), 0.0};
    const double r = std::abs(z);
    const double sign = z.imag() > 0 ? 1.0 : -1.0;
    if (r > detail::ei_series_radius) return detail::ei_asymptotic(z) + C(0.0, sign * std::numbers::pi);
    if (r <= 2.0 || (z.real() > 0 && std::abs(z.imag()) <= z.real())) return detail::ei_series(z, std::log(z));
    return -detail::e1_continued_fraction(-z) + C(0.0, sign * std::numbers::pi);
}

inline std::complex<double> ei_complex(std::complex<double> z) { return ei(z); }

/// li(x) = PV integral_0^x dt / log t = Ei(log x).
inline double li(double x) {
    if (!(x > 0)) throw std::domain_error("li: argument must be positive, got " + std::to_string(x));
    if (x == 1.0) throw std::domain_error("li: pole at x = 1");
    return ei(std::log(x));
}

/// zeta(s) - 1 for real s > 1 by Euler–Maclaurin summation from N = 10 with
/// eight Bernoulli correction terms.
inline double zeta_minus_one(double s) {
    if (!(s > 1.0)) throw std::domain_error("zeta: series diverges for s <= 1");
    constexpr int N = 10;
    // B_{2j} / (2j)!
    constexpr double bern[] = {1.0 / 12, -1.0 / 720, 1.0 / 30240, -1.0 / 1209600, 1.0 / 47900160,
                               -691.0 / 1307674368000, 1.0 / 74724249600, -3617.0 / 10670622842880000};
    double head = 0.0;
    for (int n = N - 1; n >= 2; --n) head += std::pow(n, -s);
    const double nn = N;
    double tail = std::pow(nn, 1 - s) / (s - 1) + 0.5 * std::pow(nn, -s);
    // s (s+1) ... (s+2j-2) N^{-s-2j+1}
    double rising = s;
    double power = std::pow(nn, -s - 1);
    for (int j = 0; j < 8; ++j) {
        tail += bern[j] * rising * power;
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
        power /= nn * nn;
    }
    return head + tail;
}

inline double riemann_zeta(double s) { return 1.0 + zeta_minus_one(s); }

}  // namespace ptk
