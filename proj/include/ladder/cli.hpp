#pragma once

// Batch commands behind the `ladder` executable: price, sweep and mc-check.
//
// Exit codes: 0 success or PASS, 2 configuration error, 3 numeric failure,
// 4 Monte Carlo mismatch.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "ladder/config.hpp"
#include "ladder/mc_oracle.hpp"
#include "ladder/numerics.hpp"
#include "ladder/pricer.hpp"
#include "ladder/rates.hpp"
#include "ladder/strategy.hpp"

namespace ladder {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitMismatch = 4;

/// Column order of the sweep CSV.
inline constexpr const char* kSweepCsvHeader =
    "param,value,strategy_price,vanilla_price,discount_pct,deep_band_mass,vanilla_band_mass,"
    "saturated_band_mass";

/// Locale-independent shortest form with 12 significant digits.
inline std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
    if (res.ec != std::errc{})
        return "nan";
    return std::string(buf, res.ptr);
}

/// Everything a single pricing run produces.
struct PricedRun {
    TerminalLaw law;
    PriceBreakdown breakdown;
    double vanilla = 0.0;
    /// The same band decomposition evaluated at beta = 0, so the discount
    /// of a beta = 0 strategy is exactly zero rather than rounding noise.
    double vanilla_bands = 0.0;

    /// 100 * (1 - strategy / vanilla); 0 when the vanilla price is 0.
    double discount_pct() const {
        return vanilla_bands > 0.0 ? 100.0 * (1.0 - breakdown.price / vanilla_bands) : 0.0;
    }

    double mass_of(Band::Kind kind) const {
        CompensatedSum acc;
        for (const auto& t : breakdown.band_terms)
            if (t.band.kind == kind)
                acc += t.prob_mass;
        return acc.value();
    }
};

inline PricedRun price_run(const RunConfig& c, double log_mean_shift = 0.0) {
    PricedRun run;
    run.law = terminal_law(c.market, c.rate_model.build(), c.quadrature);
    run.law.log_mean += log_mean_shift;
    StrategyConfig plain = c.strategy;
    plain.beta = 0.0;
    if (c.option == OptionKind::call) {
        run.breakdown = call_price(c.strategy.call(), run.law);
        run.vanilla_bands = call_price(plain.call(), run.law).price;
    } else {
        run.breakdown = put_price(c.strategy.put(), run.law);
        run.vanilla_bands = put_price(plain.put(), run.law).price;
    }
    run.vanilla = vanilla_price(c.option, c.strategy.strike, run.law);
    if (!std::isfinite(run.breakdown.price) || !std::isfinite(run.vanilla))
        throw std::runtime_error("pricing produced a non-finite value");
    return run;
}

inline std::string describe_rate_model(const RateModelConfig& rm) {
    std::ostringstream os;
    switch (rm.type) {
    case RateModelConfig::Type::fixed:
        os << "fixed r=" << format_number(rm.r);
        break;
    case RateModelConfig::Type::vasicek:
        os << "vasicek a=" << format_number(rm.a) << " theta=" << format_number(rm.theta)
           << " rate_vol=" << format_number(rm.rate_vol) << " r0=" << format_number(rm.r0);
        break;
    case RateModelConfig::Type::hull_white: {
        os << "hull_white a=" << format_number(rm.a) << " rate_vol=" << format_number(rm.rate_vol)
           << " r0=" << format_number(rm.r0) << " theta=";
        const auto& t = rm.theta_curve;
        if (t.kind == ThetaSpec::Kind::constant)
            os << "constant(" << format_number(t.value) << ")";
        else if (t.kind == ThetaSpec::Kind::affine)
            os << "affine(" << format_number(t.intercept) << " + " << format_number(t.slope) << "t)";
        else
            os << "piecewise(" << t.values.size() << " pieces)";
        break;
    }
    }
    return os.str();
}

namespace detail {

inline void write_header(const RunConfig& c, std::ostream& out) {
    const auto& s = c.strategy;
    out << "option            " << to_string(c.option) << '\n'
        << "market            spot=" << format_number(c.market.spot)
        << " equity_vol=" << format_number(c.market.equity_vol)
        << " maturity=" << format_number(c.market.maturity) << '\n'
        << "strategy          alpha=" << format_number(s.alpha) << " beta=" << format_number(s.beta)
        << " n_trades=" << s.n_trades << " strike=" << format_number(s.strike) << '\n'
        << "rate model        " << describe_rate_model(c.rate_model) << '\n';
}

inline std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

inline void write_band_csv(const PriceBreakdown& b, std::ostream& out) {
    out << "band,lower,upper,prob_mass,stock_leg,cash_leg\n";
    for (const auto& t : b.band_terms)
        out << to_string(t.band) << ',' << format_number(t.lower) << ',' << format_number(t.upper)
            << ',' << format_number(t.prob_mass) << ',' << format_number(t.stock_leg) << ','
            << format_number(t.cash_leg) << '\n';
}

template <class F>
decltype(auto) with_payoff(const RunConfig& c, F&& f) {
    if (c.option == OptionKind::call)
        return f(CallPayoff(c.strategy.call()));
    return f(PutPayoff(c.strategy.put()));
}

} // namespace detail

/// Price, vanilla reference, strategy discount and the band table.
inline int cmd_price(const RunConfig& c, std::ostream& out, std::ostream* csv = nullptr) {
    const PricedRun run = price_run(c);
    detail::write_header(c, out);
    out << "log mean          " << format_number(run.law.log_mean) << '\n'
        << "log variance      " << format_number(run.law.log_var) << '\n'
        << "discount factor   " << format_number(run.law.discount) << '\n'
        << "price             " << format_number(run.breakdown.price) << '\n'
        << "vanilla price     " << format_number(run.vanilla) << '\n'
        << "strategy discount " << format_number(run.discount_pct()) << " %\n\n";

    using detail::pad;
    out << pad("band", 16) << pad("lower", 20) << pad("upper", 20) << pad("mass", 20)
        << pad("stock_leg", 20) << "cash_leg\n";
    for (const auto& t : run.breakdown.band_terms)
        out << pad(to_string(t.band), 16) << pad(format_number(t.lower), 20)
            << pad(format_number(t.upper), 20) << pad(format_number(t.prob_mass), 20)
            << pad(format_number(t.stock_leg), 20) << format_number(t.cash_leg) << '\n';
    if (csv)
        detail::write_band_csv(run.breakdown, *csv);
    return kExitOk;
}

/// One CSV row per sweep value; see kSweepCsvHeader.
inline int cmd_sweep(const RunConfig& c, std::ostream& csv) {
    if (!c.sweep)
        throw ConfigError("sweep", "missing required section");
    if (c.sweep->values.empty())
        throw ConfigError("sweep.values", "must not be empty");
    validate(c);
    const std::string& param = c.sweep->parameter;

    csv << kSweepCsvHeader << '\n';
    for (double v : c.sweep->values) {
        RunConfig point = c;
        point.sweep.reset();
        if (param == "alpha")
            point.strategy.alpha = v;
        else if (param == "beta")
            point.strategy.beta = v;
        else if (param == "n_trades")
            point.strategy.n_trades = static_cast<int>(v);
        else if (param == "strike")
            point.strategy.strike = v;
        else
            point.market.maturity = v;
        const PricedRun run = price_run(point);
        csv << param << ',' << format_number(v) << ',' << format_number(run.breakdown.price) << ','
            << format_number(run.vanilla) << ',' << format_number(run.discount_pct()) << ','
            << format_number(run.mass_of(Band::Kind::intermediate)) << ','
            << format_number(run.mass_of(Band::Kind::vanilla)) << ','
            << format_number(run.mass_of(Band::Kind::saturated)) << '\n';
    }
    return kExitOk;
}

/// Closed form against both Monte Carlo oracles at 3 standard errors.
/// log_mean_shift perturbs the law fed to the closed form and to terminal
/// sampling; it exists to show the check can fail.
inline int cmd_mc_check(const RunConfig& c, std::ostream& out, double log_mean_shift = 0.0) {
    if (!c.mc)
        throw ConfigError("mc", "missing required section");
    const McConfig& mc = *c.mc;
    const PricedRun run = price_run(c, log_mean_shift);
    const RateModel model = c.rate_model.build();

    const auto [terminal, path] = detail::with_payoff(c, [&](const auto& payoff) {
        return std::pair{sample_terminal(run.law, payoff, mc),
                         simulate_paths(c.market, model, payoff, mc, c.quadrature)};
    });

    const double closed = run.breakdown.price;
    const bool terminal_ok = terminal.brackets(closed, 3.0);
    const bool path_ok = path.brackets(closed, 3.0);
    auto z_score = [closed](const McEstimate& e) {
        return e.std_error > 0.0 ? (e.mean - closed) / e.std_error : 0.0;
    };

    detail::write_header(c, out);
    out << "paths             " << mc.n_paths << (mc.antithetic ? " (antithetic pairs)" : "") << '\n'
        << "steps             " << mc.n_steps << '\n'
        << "seed              " << mc.seed << '\n'
        << "closed form       " << format_number(closed) << '\n'
        << "terminal draws    " << format_number(terminal.mean) << " +- "
        << format_number(terminal.std_error) << "  z=" << format_number(z_score(terminal)) << "  "
        << (terminal_ok ? "PASS" : "FAIL") << '\n'
        << "path simulation   " << format_number(path.mean) << " +- " << format_number(path.std_error)
        << "  z=" << format_number(z_score(path)) << "  " << (path_ok ? "PASS" : "FAIL") << '\n'
        << "verdict           " << (terminal_ok && path_ok ? "PASS" : "FAIL") << " (3 SE)\n";
    return terminal_ok && path_ok ? kExitOk : kExitMismatch;
}

enum class Command { price, sweep, mc_check };

struct CliOptions {
    std::string config_path;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> paths;
    std::optional<int> steps;
    std::optional<unsigned> threads;
    double log_mean_shift = 0.0;
};

/// Command-line overrides of the mc section; any of them creates the
/// section with defaults when the config has none.
inline void apply_overrides(RunConfig& c, const CliOptions& o) {
    if (!o.seed && !o.paths && !o.steps && !o.threads)
        return;
    McConfig mc = c.mc.value_or(McConfig{});
    if (o.seed)
        mc.seed = *o.seed;
    if (o.paths)
        mc.n_paths = *o.paths;
    if (o.steps)
        mc.n_steps = *o.steps;
    if (o.threads)
        mc.threads = *o.threads;
    c.mc = mc;
}

/// Loads the config, runs the command and maps failures to exit codes:
/// anything rejected while loading or validating is a configuration error,
/// anything thrown once a valid config is being evaluated is numeric.
inline int run_command(Command cmd, const CliOptions& opts, std::ostream& out, std::ostream& err) {
    RunConfig c;
    std::ofstream file;
    try {
        c = load_config(opts.config_path);
        apply_overrides(c, opts);
        validate(c);
        if (cmd == Command::sweep && !c.sweep)
            throw ConfigError("sweep", "missing required section");
        if (cmd == Command::mc_check && !c.mc)
            throw ConfigError("mc", "missing required section");
        if (opts.out_path) {
            file.open(*opts.out_path);
            if (!file)
                throw ConfigError("--out", "cannot open " + *opts.out_path + " for writing");
        }
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        switch (cmd) {
        case Command::price:
            return cmd_price(c, out, opts.out_path ? &file : nullptr);
        case Command::sweep:
            return cmd_sweep(c, opts.out_path ? static_cast<std::ostream&>(file) : out);
        case Command::mc_check:
            return cmd_mc_check(c, out, opts.log_mean_shift);
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

} // namespace ladder
