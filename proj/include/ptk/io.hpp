/// @file io.hpp
/// @brief Text, CSV and JSON renderings with stable number formatting:
/// shortest round-trip decimals for reals, exact decimals for integers.
#pragma once

#include <charconv>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ptk/explicit_formula.hpp"
#include "ptk/lattice_count.hpp"

namespace ptk {

inline std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

inline nlohmann::ordered_json to_json(const ExplicitEval& e) {
    return {{"value", e.value},
            {"main_term", e.main_term},
            {"zero_sum", e.zero_sum},
            {"log2_term", e.log2_term},
            {"trivial_zero_sum", e.trivial_zero_sum},
            {"zeros_used", e.zeros_used}};
}

inline nlohmann::ordered_json to_json(const CountResult& c) {
    return {{"count", c.count},
            {"main_term", c.main_term},
            {"error", c.error},
            {"method", std::string(to_string(c.method))}};
}

inline nlohmann::ordered_json to_json(const PerronResult& p) {
    return {{"x", p.x},         {"c", p.c},           {"T", p.T},
            {"approx", p.approx}, {"indicator", p.indicator}, {"bound", p.bound},
            {"deviation", p.deviation()}, {"within_bound", p.within_bound()}, {"imag_residual", p.imag_residual}};
}

/// Summary of a fit: exponent, residual and sample window.
inline nlohmann::ordered_json to_json(const ErrorSeries& s) {
    return {{"region", std::string(to_string(s.kind))},
            {"fitted_exponent", s.fitted_exponent},
            {"slope_stderr", s.slope_stderr},
            {"residual", s.residual},
            {"window", {s.window_min, s.window_max}},
            {"samples", s.samples.size()},
            {"samples_used", s.samples_used}};
}

/// CSV with columns R,count,main_term,error.
inline void write_error_series_csv(std::ostream& os, const ErrorSeries& s) {
    os << "R,count,main_term,error\n";
    for (const auto& e : s.samples)
        os << e.R << ',' << e.count << ',' << format_real(e.main_term) << ',' << format_real(e.error) << '\n';
}

}  // namespace ptk
