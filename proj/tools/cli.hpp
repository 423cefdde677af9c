// Command-line front end. `run` is kept separate from main so the tests can
// drive it with in-memory streams.
#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptk/io.hpp"
#include "ptk/ptk.hpp"

namespace ptk::cli {

/// Environment variable naming the default zero-table file.
inline constexpr const char* zeros_env = "PTK_ZEROS_FILE";

enum class Format { text, csv, json };

struct CliConfig {
    u64 limit = 10'000'000;
    std::string zeros_path;
    Format format = Format::text;
    unsigned threads = 1;
};

namespace detail {

using json = nlohmann::ordered_json;

inline ArithTable table_for(const CliConfig& cfg, u64 needed) {
    if (needed > cfg.limit)
        throw std::out_of_range("needs a sieve up to " + std::to_string(needed) + ", above --sieve-limit " +
                                std::to_string(cfg.limit));
    TableOptions o;
    o.threads = Threads(cfg.threads);
    return build_table(std::max<u64>(needed, 2), o);
}

inline ZeroTable zeros_for(const CliConfig& cfg) {
    std::string path = cfg.zeros_path;
    if (path.empty())
        if (const char* env = std::getenv(zeros_env)) path = env;
    if (path.empty()) return default_zero_table();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open zero table " + path);
    return load_zero_table(in);
}

/// One "key=value" line (text), a header+row (csv), or an object (json).
inline void emit(std::ostream& out, Format f, const json& obj) {
    switch (f) {
        case Format::json: out << obj.dump() << '\n'; return;
        case Format::csv: {
            std::string header, row;
            for (auto it = obj.begin(); it != obj.end(); ++it) {
                if (!header.empty()) {
                    header += ',';
                    row += ',';
                }
                header += it.key();
                row += it->is_number_float() ? format_real(it->get<double>())
                       : it->is_string()     ? it->get<std::string>()
                                             : it->dump();
            }
            out << header << '\n' << row << '\n';
            return;
        }
        case Format::text: {
            bool first = true;
            for (auto it = obj.begin(); it != obj.end(); ++it) {
                if (!first) out << ' ';
                first = false;
                out << it.key() << '='
                    << (it->is_number_float() ? format_real(it->get<double>())
                        : it->is_string()     ? it->get<std::string>()
                                              : it->dump());
            }
            out << '\n';
            return;
        }
    }
}

/// A single scalar answer: bare value in text mode, object otherwise.
inline void emit_scalar(std::ostream& out, Format f, const json& obj, const std::string& text) {
    if (f == Format::text)
        out << text << '\n';
    else
        emit(out, f, obj);
}

inline CountMethod parse_method(const std::string& s) {
    static const std::map<std::string, CountMethod> m = {{"direct", CountMethod::direct},
                                                         {"localization", CountMethod::localization},
                                                         {"brute_force", CountMethod::brute_force},
                                                         {"hyperbola", CountMethod::hyperbola}};
    return m.at(s);
}

inline RegionKind parse_shape(const std::string& s) {
    static const std::map<std::string, RegionKind> m = {{"circle", RegionKind::full_circle},
                                                        {"quadrant", RegionKind::circle_quadrant},
                                                        {"divisor", RegionKind::divisor_hyperbola},
                                                        {"ball", RegionKind::ball3},
                                                        {"rectangle", RegionKind::rectangle}};
    return m.at(s);
}

}  // namespace detail

/// Parses argv-style arguments (without the program name) and runs one command.
/// Exit codes: 0 success, 2 usage error, 1 computation error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using detail::json;
    CLI::App app{"ptk: prime-power tuple counting, explicit formulas and lattice-point counts"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand; inherited by children
    app.set_help_all_flag("--help-all");

    CliConfig cfg;
    std::string format = "text";
    app.add_option("--sieve-limit", cfg.limit, "Largest sieve the command may build")->capture_default_str();
    app.add_option("--zeros-file", cfg.zeros_path, std::string("Zero-table file (default: $") + zeros_env + " or embedded)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}))->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    std::function<void()> action;

    // pi / prime-powers / j
    u64 x_pi = 0;
    auto* pi_cmd = app.add_subcommand("pi", "Number of primes <= x");
    pi_cmd->add_option("x", x_pi)->required();
    pi_cmd->callback([&] {
        action = [&] {
            const auto t = detail::table_for(cfg, x_pi);
            const u64 v = pi_exact(t, x_pi);
            detail::emit_scalar(out, cfg.format, {{"x", x_pi}, {"pi", v}}, std::to_string(v));
        };
    });

    u64 x_pp = 0;
    auto* pp_cmd = app.add_subcommand("prime-powers", "Number of prime powers <= x");
    pp_cmd->add_option("x", x_pp)->required();
    pp_cmd->callback([&] {
        action = [&] {
            const auto t = detail::table_for(cfg, x_pp);
            const u64 v = capital_pi_exact(t, x_pp);
            detail::emit_scalar(out, cfg.format, {{"x", x_pp}, {"prime_powers", v}}, std::to_string(v));
        };
    });

    u64 x_j = 0;
    auto* j_cmd = app.add_subcommand("j", "Weighted prime-power count sum 1/a over p^a <= x, as a fraction");
    j_cmd->add_option("x", x_j)->required();
    j_cmd->callback([&] {
        action = [&] {
            const auto t = detail::table_for(cfg, x_j);
            const Rational v = j_exact(t, x_j);
            detail::emit_scalar(out, cfg.format,
                                {{"x", x_j}, {"numerator", v.numerator()}, {"denominator", v.denominator()},
                                 {"value", v.to_double()}},
                                v.to_string());
        };
    });

    // tuples
    auto* tuples = app.add_subcommand("tuples", "Prime and prime-power k-tuples along an offset pattern");
    tuples->require_subcommand(1);
    std::vector<u64> offsets;
    std::vector<unsigned> exponents;
    u64 tuple_r = 0, tuple_cutoff = 0, rays_x = 0;

    auto* t_count = tuples->add_subcommand("count", "Prime k-tuples with base n <= limit");
    t_count->add_option("--offsets", offsets)->delimiter(',')->required();
    t_count->add_option("--limit", tuple_r)->required();
    t_count->callback([&] {
        action = [&] {
            const OffsetSet h(offsets);
            const auto t = detail::table_for(cfg, tuple_r + h.max_offset());
            const u64 v = pi_k(t, tuple_r, h);
            detail::emit_scalar(out, cfg.format, {{"offsets", h.to_string()}, {"limit", tuple_r}, {"count", v}},
                                std::to_string(v));
        };
    });

    auto* t_power = tuples->add_subcommand("power", "Prime tuples whose powered product is <= cutoff");
    t_power->add_option("--offsets", offsets)->delimiter(',')->required();
    t_power->add_option("--exponents", exponents)->delimiter(',')->required();
    t_power->add_option("--cutoff", tuple_cutoff)->required();
    t_power->callback([&] {
        action = [&] {
            const OffsetSet h(offsets);
            const ExponentVector m(exponents);
            // Bases satisfy n^{sum m} <= cutoff.
            const u64 needed = iroot(tuple_cutoff, m.total()) + h.max_offset() + 1;
            const auto t = detail::table_for(cfg, needed);
            const u64 v = pi_k_power(t, tuple_cutoff, h, m);
            detail::emit_scalar(out, cfg.format,
                                {{"offsets", h.to_string()}, {"exponents", m.to_string()}, {"cutoff", tuple_cutoff},
                                 {"count", v}},
                                std::to_string(v));
        };
    });

    auto* t_total = tuples->add_subcommand("total", "Prime-power k-tuples along the pattern up to cutoff");
    t_total->add_option("--offsets", offsets)->delimiter(',')->required();
    t_total->add_option("--cutoff", tuple_cutoff)->required();
    t_total->callback([&] {
        action = [&] {
            const OffsetSet h(offsets);
            const u64 needed = iroot(tuple_cutoff, static_cast<unsigned>(h.k())) + h.max_offset() + 1;
            const auto t = detail::table_for(cfg, needed);
            const u64 v = capital_pi_k(t, tuple_cutoff, h);
            detail::emit_scalar(out, cfg.format, {{"offsets", h.to_string()}, {"cutoff", tuple_cutoff}, {"count", v}},
                                std::to_string(v));
        };
    });

    auto* t_rays = tuples->add_subcommand("rays", "CSV dump of every ray point with product <= x");
    t_rays->add_option("x", rays_x)->required();
    t_rays->callback([&] {
        action = [&] {
            const auto t = detail::table_for(cfg, rays_x);
            RayOptions o;
            o.threads = Threads(cfg.threads);
            const auto rays = enumerate_rays(t, rays_x, o);
            write_rays_csv(out, rays);
        };
    });

    // localize
    double x_loc = 0;
    auto* loc = app.add_subcommand("localize", "Sum of prime-power tuple counts over all rays, against floor(x)");
    loc->add_option("x", x_loc)->required()->check(CLI::Range(1.0, 1e6));
    loc->callback([&] {
        action = [&] {
            const u64 fx = static_cast<u64>(std::floor(x_loc));
            const auto t = detail::table_for(cfg, fx);
            RayOptions o;
            o.threads = Threads(cfg.threads);
            const auto r = localization_sum(t, fx, o);
            detail::emit(out, cfg.format,
                         {{"sum", r.sum},
                          {"floor", r.floor_x},
                          {"floor-1", r.floor_minus_one},
                          {"match", r.match()},
                          {"rays", r.distinct_rays}});
        };
    });

    // explicit
    auto* expl = app.add_subcommand("explicit", "Explicit-formula evaluation from the zero table");
    expl->require_subcommand(1);
    double x_expl = 0;
    std::size_t n_zeros = 0;
    unsigned trunc_m = 0;
    auto explicit_cmd = [&](const char* name, const char* desc, bool capital) {
        auto* c = expl->add_subcommand(name, desc);
        c->add_option("x", x_expl)->required();
        c->add_option("--zeros", n_zeros, "Number of leading zeros (0 = all)");
        c->add_option("--m", trunc_m, "Mobius truncation (0 = floor(log2 x))");
        c->callback([&, capital] {
            action = [&, capital] {
                const auto zeros = detail::zeros_for(cfg);
                ExplicitOptions o;
                o.zeros_used = n_zeros;
                o.truncation_m = trunc_m;
                o.threads = Threads(cfg.threads);
                const auto e = capital ? capital_pi_explicit(x_expl, zeros, o) : riemann_pi_explicit(x_expl, zeros, o);
                detail::emit_scalar(out, cfg.format, to_json(e), format_real(e.value));
            };
        });
    };
    explicit_cmd("pi", "Prime count from the explicit formula", false);
    explicit_cmd("prime-powers", "Prime-power count from the explicit formula", true);

    // perron
    double p_x = 0, p_c = 0, p_T = 0;
    std::size_t p_panels = 0;
    auto* per = app.add_subcommand("perron", "Truncated Perron integral of x^s/s");
    per->add_option("x", p_x)->required();
    per->add_option("c", p_c)->required();
    per->add_option("T", p_T)->required();
    per->add_option("--panels", p_panels, "Minimum number of quadrature panels");
    per->callback([&] {
        action = [&] { detail::emit(out, cfg.format, to_json(perron_truncated(p_x, p_c, p_T, p_panels))); };
    });

    // prime zeta
    double pz_s = 0;
    u64 pz_terms = 1'000'000;
    auto* pz = app.add_subcommand("prime-zeta", "Prime zeta P(s), direct sum and Mobius-log-zeta route");
    pz->add_option("s", pz_s)->required();
    pz->add_option("--terms", pz_terms, "Direct-sum cutoff N")->capture_default_str();
    pz->callback([&] {
        action = [&] {
            const auto t = detail::table_for(cfg, pz_terms);
            const auto r = prime_zeta(pz_s, t, pz_terms);
            detail::emit(out, cfg.format,
                         {{"s", r.s},
                          {"direct", r.direct},
                          {"direct_tail_bound", r.direct_tail_bound},
                          {"mobius", r.mobius},
                          {"mobius_tail_bound", r.mobius_tail_bound},
                          {"consistent", r.consistent()}});
        };
    });

    // singular series / gallagher
    u64 prime_limit = 1'000'000;
    auto* ss = app.add_subcommand("singular-series", "Hardy-Littlewood singular series of an offset pattern");
    ss->add_option("--offsets", offsets)->delimiter(',')->required();
    ss->add_option("--prime-limit", prime_limit)->capture_default_str();
    ss->callback([&] {
        action = [&] {
            const OffsetSet h(offsets);
            const auto v = singular_series(h, prime_limit);
            detail::emit(out, cfg.format,
                         {{"offsets", h.to_string()},
                          {"value", v.value},
                          {"tail_estimate", v.tail_estimate},
                          {"prime_limit", v.prime_limit},
                          {"admissible", v.admissible}});
        };
    });

    u64 hmax = 100;
    u64 g_prime_limit = 100'000;
    auto* gal = app.add_subcommand("gallagher", "Average of C({0,h}) over h <= hmax; csv lists every h");
    gal->add_option("--hmax", hmax)->capture_default_str();
    gal->add_option("--prime-limit", g_prime_limit)->capture_default_str();
    gal->callback([&] {
        action = [&] {
            const auto g = gallagher_aggregate(hmax, g_prime_limit);
            if (cfg.format == Format::csv)
                write_gallagher_csv(out, g);
            else
                detail::emit(out, cfg.format, {{"hmax", g.hmax}, {"average", g.average}});
        };
    });

    // lattice
    auto* lat = app.add_subcommand("lattice", "Lattice-point counts and error fits");
    lat->require_subcommand(1);
    u64 lat_n = 0;
    std::string method = "direct";
    auto lattice_cmd = [&](const char* name, const char* desc, auto fn) {
        auto* c = lat->add_subcommand(name, desc);
        c->add_option("n", lat_n)->required();
        c->add_option("--method", method)
            ->check(CLI::IsMember({"direct", "localization", "brute_force", "hyperbola"}))
            ->capture_default_str();
        c->callback([&, fn] {
            action = [&, fn] {
                LatticeOptions o;
                o.threads = Threads(cfg.threads);
                const CountResult r = fn(lat_n, detail::parse_method(method), o);
                json j = to_json(r);
                if (cfg.format == Format::json) j.erase("method");
                detail::emit(out, cfg.format, j);
            };
        });
    };
    lattice_cmd("circle", "Points in the disk of radius R", [](u64 n, CountMethod m, LatticeOptions o) {
        return gauss_circle_count(n, m, o);
    });
    lattice_cmd("divisor", "Points under the hyperbola ab <= x", [](u64 n, CountMethod m, LatticeOptions o) {
        return divisor_hyperbola_count(n, m, o);
    });
    lattice_cmd("ball", "Points in the 3-ball of radius R", [](u64 n, CountMethod m, LatticeOptions o) {
        return ball3_count(n, m, o);
    });

    std::string shape = "circle";
    u64 fit_from = 100, fit_to = 100'000;
    std::size_t fit_samples = 64;
    auto* fit = lat->add_subcommand("fit", "Log-log fit of |error| growth; csv lists samples, json/text the summary");
    fit->add_option("--shape", shape)
        ->check(CLI::IsMember({"circle", "quadrant", "divisor", "ball", "rectangle"}))
        ->capture_default_str();
    fit->add_option("--from", fit_from)->capture_default_str();
    fit->add_option("--to", fit_to)->capture_default_str();
    fit->add_option("--samples", fit_samples)->capture_default_str();
    fit->callback([&] {
        action = [&] {
            const auto series = error_exponent_fit(detail::parse_shape(shape),
                                                   geometric_samples(fit_from, fit_to, fit_samples), Threads(cfg.threads));
            if (cfg.format == Format::csv)
                write_error_series_csv(out, series);
            else if (cfg.format == Format::json)
                out << to_json(series).dump() << '\n';
            else
                detail::emit(out, cfg.format,
                             {{"fitted_exponent", series.fitted_exponent},
                              {"slope_stderr", series.slope_stderr},
                              {"residual", series.residual},
                              {"from", series.window_min},
                              {"to", series.window_max},
                              {"samples_used", series.samples_used}});
        };
    });

    // zeros
    auto* zs = app.add_subcommand("zeros", "Zero-table utilities");
    zs->require_subcommand(1);
    double delta = 1e-6;
    auto* zv = zs->add_subcommand("verify", "Check a sign change of Hardy's Z around every ordinate");
    zv->add_option("--delta", delta)->capture_default_str();
    int verify_status = 0;
    zv->callback([&] {
        action = [&] {
            const auto zeros = detail::zeros_for(cfg);
            const auto v = verify_zero_table(zeros, delta, Threads(cfg.threads));
            json j = {{"checked", v.checked}, {"confirmed", v.confirmed}, {"ok", v.ok()}};
            if (v.first_failure) j["first_failure"] = zeros.ordinates[*v.first_failure];
            detail::emit(out, cfg.format, j);
            verify_status = v.ok() ? 0 : 1;
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
    cfg.format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::text;

    try {
        if (!action) {
            err << "usage error: no command\n";
            return 2;
        }
        action();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return verify_status;
}

}  // namespace ptk::cli
