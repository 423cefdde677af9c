/// @file hl_density.hpp
/// @brief Hardy–Littlewood singular series, the conjectured density integral
/// for tuples along one offset pattern, and Gallagher's average over h.
#pragma once

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptk/arith_table.hpp"
#include "ptk/quadrature.hpp"
#include "ptk/tuple_core.hpp"

namespace ptk {

struct SingularSeriesValue {
    double value;
    u64 prime_limit;
    /// Bound on the change from primes above prime_limit: value * k(k-1) / prime_limit.
    double tail_estimate;
    bool admissible;
};

/// C(H) = prod_p (1 - nu_p(H)/p) / (1 - 1/p)^k over p <= prime_limit, where
/// nu_p(H) counts the residues of H mod p.
///
/// For p > max(H, k) every factor depends on k only, so those log-factors are
/// summed once per k and shared across offset sets.
class SingularSeries {
public:
    explicit SingularSeries(u64 prime_limit = 1'000'000) : prime_limit_(prime_limit), primes_(primes_up_to(prime_limit)) {
        if (prime_limit < 100) throw std::invalid_argument("singular_series: prime_limit must be >= 100");
    }

    u64 prime_limit() const { return prime_limit_; }

    SingularSeriesValue operator()(const OffsetSet& h) const {
        const std::size_t k = h.k();
        const u64 hmax = h.max_offset();
        double log_sum = 0.0;
        std::size_t i = 0;
        std::vector<char> seen;
        const u64 explicit_bound = std::max<u64>(hmax, k);
        for (; i < primes_.size() && primes_[i] <= explicit_bound; ++i) {
            const u64 p = primes_[i];
            seen.assign(p, 0);
            u64 nu = 0;
            for (const u64 off : h.offsets())
                if (!seen[off % p]) {
                    seen[off % p] = 1;
                    ++nu;
                }
            if (nu == p) return {0.0, prime_limit_, 0.0, false};
            log_sum += log_factor(nu, k, p);
        }
        log_sum += generic_tail(k, i);
        const double value = std::exp(log_sum);
        const double kk = static_cast<double>(k);
        return {value, prime_limit_, value * kk * (kk - 1) / static_cast<double>(prime_limit_), true};
    }

private:
    static double log_factor(u64 nu, std::size_t k, u64 p) {
        const double pd = static_cast<double>(p);
        return std::log1p(-static_cast<double>(nu) / pd) - static_cast<double>(k) * std::log1p(-1.0 / pd);
    }

    /// Sum of log factors with nu_p = k over primes_[from..], cached per k.
    double generic_tail(std::size_t k, std::size_t from) const {
        auto it = suffix_.find(k);
        if (it == suffix_.end()) {
            std::vector<double> suf(primes_.size() + 1, 0.0);
            for (std::size_t j = primes_.size(); j-- > 0;) {
                const u64 p = primes_[j];
                // Only read from indices with p > max(H, k).
                suf[j] = suf[j + 1] + (p > k ? log_factor(k, k, p) : 0.0);
            }
            it = suffix_.emplace(k, std::move(suf)).first;
        }
        return it->second[from];
    }

    u64 prime_limit_;
    std::vector<std::uint32_t> primes_;
    mutable std::map<std::size_t, std::vector<double>> suffix_;
};

inline SingularSeriesValue singular_series(const OffsetSet& h, u64 prime_limit = 1'000'000) {
    return SingularSeries(prime_limit)(h);
}

/// C * integral_2^x prod_i 1/log(r + h_i) dr.
inline double average_capital_pi_k(double x, const OffsetSet& h, double C) {
    if (!(x >= 2.0)) throw std::domain_error("average_capital_pi_k: x must be >= 2, got " + std::to_string(x));
    if (x == 2.0) return 0.0;
    auto f = [&](double r) {
        double prod = 1.0;
        for (const u64 off : h.offsets()) prod *= std::log(r + static_cast<double>(off));
        return 1.0 / prod;
    };
    QuadratureOptions q;
    q.abs_tol = 1e-8;
    return C * integrate(f, geometric_breakpoints(2.0, x), q).value;
}

struct GallagherResult {
    u64 hmax;
    /// (1/hmax) sum_{h=1}^{hmax} C({0, h}); odd h contribute 0.
    double average;
    std::vector<std::pair<u64, double>> table;
};

/// Pair (k = 2) average of the singular series over offsets h in [1, hmax].
inline GallagherResult gallagher_aggregate(u64 hmax, u64 prime_limit = 100'000) {
    if (hmax < 10) throw std::invalid_argument("gallagher_aggregate: hmax must be >= 10");
    const SingularSeries series(prime_limit);
    GallagherResult r{hmax, 0.0, {}};
    r.table.reserve(hmax);
    double sum = 0.0;
    for (u64 h = 1; h <= hmax; ++h) {
        const double c = series(OffsetSet({0, h})).value;
        r.table.emplace_back(h, c);
        sum += c;
    }
    r.average = sum / static_cast<double>(hmax);
    return r;
}

inline void write_gallagher_csv(std::ostream& os, const GallagherResult& g) {
    os << "h,C\n";
    os.precision(17);
    for (const auto& [h, c] : g.table) os << h << ',' << c << '\n';
}

}  // namespace ptk
