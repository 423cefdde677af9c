/// @file quadrature.hpp
/// @brief Globally adaptive Gauss–Kronrod (7/15) integration.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <string>
#include <vector>

#include "ptk/common.hpp"

namespace ptk {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    /// Floor on the tolerance relative to |integral|, for values so large that
    /// abs_tol is below double resolution.
    double rel_tol = 1e-14;
    std::size_t max_subdivisions = 200'000;
};

template <typename T>
struct QuadratureResult {
    T value;
    double error_estimate;
    std::size_t subdivisions;
};

namespace detail {

// 15-point Kronrod abscissae on [-1, 1] (non-negative half) and weights; the
// odd-indexed abscissae carry the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename T, typename F>
Segment<T> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T kron = fc * kronrod_w[7];
    T gauss = fc * gauss_w[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kronrod_x[i];
        const T sum = f(c - dx) + f(c + dx);
        kron += sum * kronrod_w[i];
        if (i % 2 == 1) gauss += sum * gauss_w[i / 2];
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace detail

/// Integral of f over [a, b] split at the given interior breakpoints. Throws
/// quadrature_error when the subdivision cap is reached before the total error
/// estimate drops below max(abs_tol, rel_tol * |value|).
template <typename T = double, typename F>
QuadratureResult<T> integrate(F&& f, std::vector<double> points, QuadratureOptions opts = {}) {
    if (points.size() < 2) throw std::invalid_argument("integrate: need at least two breakpoints");
    std::priority_queue<detail::Segment<T>> heap;
    T total{};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i] == points[i + 1]) continue;
        auto s = detail::gk15<T>(f, points[i], points[i + 1]);
        total += s.value;
        err += s.error;
        heap.push(s);
    }
    std::size_t subdivisions = 0;
    while (!heap.empty() && err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (subdivisions >= opts.max_subdivisions)
            throw quadrature_error("integrate: subdivision cap " + std::to_string(opts.max_subdivisions) +
                                   " reached with error estimate " + std::to_string(err));
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval can no longer be split in double precision.
            throw quadrature_error("integrate: interval collapsed near " + std::to_string(worst.a));
        }
        auto left = detail::gk15<T>(f, worst.a, mid);
        auto right = detail::gk15<T>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }
    // Re-sum the surviving segments to shed the drift of incremental updates.
    T exact{};
    double exact_err = 0.0;
    while (!heap.empty()) {
        exact += heap.top().value;
        exact_err += heap.top().error;
        heap.pop();
    }
    return {exact, exact_err, subdivisions};
}

template <typename T = double, typename F>
QuadratureResult<T> integrate(F&& f, double a, double b, QuadratureOptions opts = {}) {
    return integrate<T>(std::forward<F>(f), std::vector<double>{a, b}, opts);
}

/// Breakpoints a, 2a, 4a, ... up to b; keeps each panel within one octave so
/// slowly varying integrands over long ranges converge quickly.
inline std::vector<double> geometric_breakpoints(double a, double b) {
    std::vector<double> pts{a};
    if (a > 0)
        for (double p = 2 * a; p < b; p *= 2) pts.push_back(p);
    pts.push_back(b);
    return pts;
}

}  // namespace ptk
