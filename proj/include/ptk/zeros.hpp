/// @file zeros.hpp
/// @brief Tables of nontrivial Riemann zeta zero ordinates: embedded default,
/// text loader, and a sign-change check through Hardy's Z function.
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <istream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ptk/common.hpp"

namespace ptk {

/// Ordinates gamma_j of zeros 1/2 + i gamma_j, strictly increasing.
struct ZeroTable {
    std::vector<double> ordinates;
    /// Decimal digits after the point that every entry is good to.
    int precision = 0;

    std::size_t size() const { return ordinates.size(); }
};

namespace detail {
// First 100 ordinates, 15 significant digits.
inline constexpr std::array<double, 100> embedded_zeros = {
    14.1347251417347, 21.0220396387716, 25.0108575801457, 30.4248761258595,
    32.9350615877392, 37.5861781588257, 40.9187190121475, 43.3270732809150,
    48.0051508811672, 49.7738324776723, 52.9703214777145, 56.4462476970634,
    59.3470440026024, 60.8317785246098, 65.1125440480816, 67.0798105294942,
    69.5464017111740, 72.0671576744819, 75.7046906990839, 77.1448400688748,
    79.3373750202494, 82.9103808540860, 84.7354929805171, 87.4252746131252,
    88.8091112076345, 92.4918992705585, 94.6513440405199, 95.8706342282453,
    98.8311942181937, 101.317851005731, 103.725538040478, 105.446623052326,
    107.168611184276, 111.029535543170, 111.874659176993, 114.320220915453,
    116.226680320858, 118.790782865976, 121.370125002421, 122.946829293553,
    124.256818554346, 127.516683879596, 129.578704199956, 131.087688530933,
    133.497737202998, 134.756509753374, 138.116042054533, 139.736208952121,
    141.123707404021, 143.111845807621, 146.000982486766, 147.422765342560,
    150.053520420785, 150.925257612241, 153.024693811199, 156.112909294238,
    157.597591817594, 158.849988171420, 161.188964137596, 163.030709687182,
    165.537069187900, 167.184439978175, 169.094515415569, 169.911976479412,
    173.411536519592, 174.754191523366, 176.441434297710, 178.377407776100,
    179.916484020257, 182.207078484366, 184.874467848388, 185.598783677707,
    187.228922583502, 189.416158656017, 192.026656360714, 193.079726603846,
    195.265396679529, 196.876481840958, 198.015309676252, 201.264751943704,
    202.493594514141, 204.189671803105, 205.394697202163, 207.906258887806,
    209.576509716856, 211.690862595365, 213.347919359713, 214.547044783491,
    216.169538508264, 219.067596349021, 220.714918839314, 221.430705554693,
    224.007000254604, 224.983324669582, 227.421444279679, 229.337413305525,
    231.250188700499, 231.987235253180, 233.693404178908, 236.524229665816,
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}
}  // namespace detail

inline ZeroTable default_zero_table() {
    return {std::vector<double>(detail::embedded_zeros.begin(), detail::embedded_zeros.end()), 12};
}

/// One decimal ordinate per line, strictly increasing. Blank lines are skipped.
/// Any other malformed line is a format_error naming its line number.
inline ZeroTable load_zero_table(std::istream& in, std::size_t min_count = 100) {
    ZeroTable table;
    table.precision = 99;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = detail::trim(line);
        if (s.empty()) continue;
        double v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v) || v <= 0)
            throw format_error("zero table line " + std::to_string(lineno) + ": cannot parse '" + s + "'");
        if (!table.ordinates.empty() && v <= table.ordinates.back())
            throw format_error("zero table line " + std::to_string(lineno) + ": ordinates must be strictly increasing");
        const auto dot = s.find('.');
        const int decimals = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
        table.precision = std::min(table.precision, decimals);
        table.ordinates.push_back(v);
    }
    if (table.ordinates.empty()) throw format_error("zero table: no ordinates");
    if (table.ordinates.size() < min_count)
        throw format_error("zero table: " + std::to_string(table.ordinates.size()) + " ordinates, need at least " +
                           std::to_string(min_count));
    return table;
}

/// Riemann–Siegel theta function, Stirling expansion (accurate for t >= 10).
inline double riemann_siegel_theta(double t) {
    const double pi = std::numbers::pi;
    const double t2 = t * t;
    return t / 2 * std::log(t / (2 * pi)) - t / 2 - pi / 8 + 1 / (48 * t) + 7 / (5760 * t * t2) +
           31 / (80640 * t * t2 * t2) + 127 / (430080 * t * t2 * t2 * t2);
}

/// zeta(1/2 + i t) by Euler–Maclaurin with N > |t| so the Bernoulli terms decay.
inline std::complex<double> zeta_critical_line(double t) {
    using C = std::complex<double>;
    const C s(0.5, t);
    const int N = static_cast<int>(std::abs(t)) + 10;
    C sum = 0.0;
    for (int n = N - 1; n >= 1; --n) sum += std::exp(-s * std::log(static_cast<double>(n)));
    const double logn = std::log(static_cast<double>(N));
    const C n_s = std::exp(-s * logn);
    sum += n_s * static_cast<double>(N) / (s - 1.0) + 0.5 * n_s;
    constexpr double bern[] = {1.0 / 12, -1.0 / 720, 1.0 / 30240, -1.0 / 1209600, 1.0 / 47900160,
                               -691.0 / 1307674368000, 1.0 / 74724249600, -3617.0 / 10670622842880000};
    C rising = s;
    C power = n_s / static_cast<double>(N);
    for (int j = 0; j < 8; ++j) {
        sum += bern[j] * rising * power;
        rising *= (s + (2.0 * j + 1)) * (s + (2.0 * j + 2));
        power /= static_cast<double>(N) * N;
    }
    return sum;
}

/// Hardy's Z(t) = e^{i theta(t)} zeta(1/2 + i t), real for real t.
inline double hardy_z(double t) {
    return (std::exp(std::complex<double>(0, riemann_siegel_theta(t))) * zeta_critical_line(t)).real();
}

struct ZeroVerification {
    std::size_t checked = 0;
    std::size_t confirmed = 0;
    std::optional<std::size_t> first_failure;  // index into the table

    bool ok() const { return checked == confirmed; }
};

/// Confirms a sign change of Z on [gamma - delta, gamma + delta] for each ordinate.
inline ZeroVerification verify_zero_table(const ZeroTable& table, double delta = 1e-6, Threads threads = {}) {
    std::vector<char> good(table.size(), 0);
    parallel_for(table.size(), threads, [&](std::size_t i) {
        const double g = table.ordinates[i];
        good[i] = hardy_z(g - delta) * hardy_z(g + delta) < 0;
    });
    ZeroVerification v;
    v.checked = table.size();
    for (std::size_t i = 0; i < good.size(); ++i) {
        if (good[i])
            ++v.confirmed;
        else if (!v.first_failure)
            v.first_failure = i;
    }
    return v;
}

}  // namespace ptk
