#pragma once

// Run configuration for the command-line front end, stored as JSON.
//
//   {
//     "option": "call" | "put",
//     "market":   { "spot": 100, "equity_vol": 0.2, "maturity": 1 },
//     "strategy": { "alpha": 0.1, "beta": 1, "n_trades": 4, "strike": 100,
//                   "trigger_offset": 0 },
//     "rate_model": { "type": "fixed", "r": 0.05 }
//                 | { "type": "vasicek", "a": .., "theta": .., "rate_vol": .., "r0": .. }
//                 | { "type": "hull_white", "a": .., "rate_vol": .., "r0": ..,
//                     "theta": { "type": "constant", "value": .. }
//                            | { "type": "affine", "intercept": .., "slope": .. }
//                            | { "type": "piecewise", "breakpoints": [..], "values": [..] } },
//     "mc":    { "n_paths": .., "n_steps": .., "seed": .., "antithetic": false },   (optional)
//     "sweep": { "parameter": "alpha|beta|n_trades|strike|maturity", "values": [..] }, (optional)
//     "quadrature": { "abs_tolerance": 1e-10, "max_subdivisions": 2000 }           (optional)
//   }

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ladder/mc_oracle.hpp"
#include "ladder/numerics.hpp"
#include "ladder/pricer.hpp"
#include "ladder/rates.hpp"
#include "ladder/strategy.hpp"

namespace ladder {

/// Invalid configuration; what() starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct ThetaSpec {
    enum class Kind { constant, affine, piecewise };

    Kind kind = Kind::constant;
    double value = 0.0;        // constant
    double intercept = 0.0;    // affine
    double slope = 0.0;        // affine
    std::vector<double> breakpoints;   // piecewise
    std::vector<double> values;        // piecewise, one more than breakpoints

    friend bool operator==(const ThetaSpec&, const ThetaSpec&) = default;

    std::function<double(double)> build() const {
        switch (kind) {
        case Kind::constant:
            return constant_theta(value);
        case Kind::affine:
            return affine_theta(intercept, slope);
        case Kind::piecewise:
            return piecewise_theta(breakpoints, values);
        }
        return constant_theta(0.0);
    }
};

struct RateModelConfig {
    enum class Type { fixed, vasicek, hull_white };

    Type type = Type::fixed;
    double r = 0.0;          // fixed
    double a = 0.0;          // vasicek, hull_white
    double theta = 0.0;      // vasicek
    double rate_vol = 0.0;   // vasicek, hull_white
    double r0 = 0.0;         // vasicek, hull_white
    ThetaSpec theta_curve;   // hull_white

    friend bool operator==(const RateModelConfig&, const RateModelConfig&) = default;

    RateModel build() const {
        switch (type) {
        case Type::fixed:
            return FixedRate{r};
        case Type::vasicek:
            return VasicekParams{a, theta, rate_vol, r0};
        case Type::hull_white: {
            HullWhiteParams h{a, theta_curve.build(), rate_vol, r0, {}};
            if (theta_curve.kind == ThetaSpec::Kind::piecewise)
                h.theta_breaks = theta_curve.breakpoints;
            return h;
        }
        }
        return FixedRate{r};
    }
};

struct StrategyConfig {
    double alpha = 0.0;
    double beta = 0.0;
    int n_trades = 1;
    double strike = 0.0;
    double trigger_offset = 0.0;

    friend bool operator==(const StrategyConfig&, const StrategyConfig&) = default;

    CallStrategy call() const { return {alpha, beta, n_trades, strike}; }
    PutStrategy put() const { return {alpha, beta, n_trades, strike, trigger_offset}; }
};

struct SweepSpec {
    std::string parameter;
    std::vector<double> values;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct RunConfig {
    OptionKind option = OptionKind::call;
    MarketParams market;
    StrategyConfig strategy;
    RateModelConfig rate_model;
    std::optional<McConfig> mc;
    std::optional<SweepSpec> sweep;
    QuadratureSpec quadrature;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names{"alpha", "beta", "n_trades", "strike", "maturity"};
    return names;
}

namespace detail {

using nlohmann::json;

inline void check_keys(const json& j, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            known = known || item.key() == k;
        if (!known)
            throw ConfigError(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
    }
}

inline std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
}

inline const json& require(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key))
        throw ConfigError(join(path, key), "missing required field");
    return j.at(key);
}

inline double get_number(const json& j, const std::string& path, const char* key) {
    const json& v = require(j, path, key);
    if (!v.is_number())
        throw ConfigError(join(path, key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ConfigError(join(path, key), "must be finite");
    return x;
}

inline double get_number_or(const json& j, const std::string& path, const char* key,
                            double fallback) {
    return j.contains(key) ? get_number(j, path, key) : fallback;
}

inline std::int64_t get_integer(const json& j, const std::string& path, const char* key) {
    const json& v = require(j, path, key);
    if (!v.is_number_integer())
        throw ConfigError(join(path, key), "expected an integer");
    return v.get<std::int64_t>();
}

inline std::string get_string(const json& j, const std::string& path, const char* key) {
    const json& v = require(j, path, key);
    if (!v.is_string())
        throw ConfigError(join(path, key), "expected a string");
    return v.get<std::string>();
}

inline std::vector<double> get_numbers(const json& j, const std::string& path, const char* key) {
    const json& v = require(j, path, key);
    if (!v.is_array())
        throw ConfigError(join(path, key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
            throw ConfigError(join(path, key) + "[" + std::to_string(i) + "]",
                              "expected a finite number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

// Re-raises an invariant failure ("field: message") under a config path.
template <class F>
void validate_under(const std::string& path, F&& check) {
    try {
        check();
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        const auto colon = what.find(": ");
        if (colon == std::string::npos)
            throw ConfigError(path, what);
        throw ConfigError(path + "." + what.substr(0, colon), what.substr(colon + 2));
    }
}

inline ThetaSpec parse_theta(const json& j, const std::string& path) {
    ThetaSpec t;
    const std::string type = get_string(j, path, "type");
    if (type == "constant") {
        check_keys(j, path, {"type", "value"});
        t.kind = ThetaSpec::Kind::constant;
        t.value = get_number(j, path, "value");
    } else if (type == "affine") {
        check_keys(j, path, {"type", "intercept", "slope"});
        t.kind = ThetaSpec::Kind::affine;
        t.intercept = get_number(j, path, "intercept");
        t.slope = get_number(j, path, "slope");
    } else if (type == "piecewise") {
        check_keys(j, path, {"type", "breakpoints", "values"});
        t.kind = ThetaSpec::Kind::piecewise;
        t.breakpoints = get_numbers(j, path, "breakpoints");
        t.values = get_numbers(j, path, "values");
        if (t.values.size() != t.breakpoints.size() + 1)
            throw ConfigError(path + ".values", "need exactly one more value than breakpoints");
        for (std::size_t i = 1; i < t.breakpoints.size(); ++i)
            if (!(t.breakpoints[i - 1] < t.breakpoints[i]))
                throw ConfigError(path + ".breakpoints", "must be strictly increasing");
    } else {
        throw ConfigError(path + ".type", "expected constant, affine or piecewise");
    }
    return t;
}

inline RateModelConfig parse_rate_model(const json& j, const std::string& path) {
    RateModelConfig rm;
    const std::string type = get_string(j, path, "type");
    if (type == "fixed") {
        check_keys(j, path, {"type", "r"});
        rm.type = RateModelConfig::Type::fixed;
        rm.r = get_number(j, path, "r");
    } else if (type == "vasicek") {
        check_keys(j, path, {"type", "a", "theta", "rate_vol", "r0"});
        rm.type = RateModelConfig::Type::vasicek;
        rm.a = get_number(j, path, "a");
        rm.theta = get_number(j, path, "theta");
        rm.rate_vol = get_number(j, path, "rate_vol");
        rm.r0 = get_number(j, path, "r0");
    } else if (type == "hull_white") {
        check_keys(j, path, {"type", "a", "theta", "rate_vol", "r0"});
        rm.type = RateModelConfig::Type::hull_white;
        rm.a = get_number(j, path, "a");
        rm.rate_vol = get_number(j, path, "rate_vol");
        rm.r0 = get_number(j, path, "r0");
        rm.theta_curve = parse_theta(require(j, path, "theta"), join(path, "theta"));
    } else {
        throw ConfigError(path + ".type", "expected fixed, vasicek or hull_white");
    }
    return rm;
}

inline json theta_to_json(const ThetaSpec& t) {
    switch (t.kind) {
    case ThetaSpec::Kind::constant:
        return {{"type", "constant"}, {"value", t.value}};
    case ThetaSpec::Kind::affine:
        return {{"type", "affine"}, {"intercept", t.intercept}, {"slope", t.slope}};
    case ThetaSpec::Kind::piecewise:
        return {{"type", "piecewise"}, {"breakpoints", t.breakpoints}, {"values", t.values}};
    }
    return {};
}

inline json rate_model_to_json(const RateModelConfig& rm) {
    switch (rm.type) {
    case RateModelConfig::Type::fixed:
        return {{"type", "fixed"}, {"r", rm.r}};
    case RateModelConfig::Type::vasicek:
        return {{"type", "vasicek"}, {"a", rm.a}, {"theta", rm.theta},
                {"rate_vol", rm.rate_vol}, {"r0", rm.r0}};
    case RateModelConfig::Type::hull_white:
        return {{"type", "hull_white"}, {"a", rm.a}, {"theta", theta_to_json(rm.theta_curve)},
                {"rate_vol", rm.rate_vol}, {"r0", rm.r0}};
    }
    return {};
}

} // namespace detail

/// Checks every embedded invariant, including those pricing needs (a put's
/// trigger_offset must be 0, alpha < 1) and the sweep values' domains.
inline void validate(const RunConfig& c) {
    using detail::validate_under;
    validate_under("market", [&] { c.market.validate(); });
    validate_under("strategy", [&] {
        if (c.option == OptionKind::call)
            c.strategy.call().validate();
        else
            c.strategy.put().validate_for_pricing();
    });
    validate_under("rate_model", [&] {
        const RateModel model = c.rate_model.build();
        std::visit([](const auto& p) { p.validate(); }, model);
    });
    validate_under("quadrature", [&] { c.quadrature.validate(); });
    if (c.mc)
        validate_under("mc", [&] { c.mc->validate(); });
    if (c.sweep) {
        const auto& s = *c.sweep;
        const auto& names = sweep_parameters();
        if (std::find(names.begin(), names.end(), s.parameter) == names.end())
            throw ConfigError("sweep.parameter", "expected one of alpha, beta, n_trades, strike, maturity");
        if (s.values.empty())
            throw ConfigError("sweep.values", "must not be empty");
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const double v = s.values[i];
            const std::string path = "sweep.values[" + std::to_string(i) + "]";
            if (s.parameter == "n_trades" && (v < 1.0 || v != std::floor(v) || v > 1e7))
                throw ConfigError(path, "n_trades must be a positive integer");
            RunConfig probe = c;
            probe.sweep.reset();
            if (s.parameter == "alpha")
                probe.strategy.alpha = v;
            else if (s.parameter == "beta")
                probe.strategy.beta = v;
            else if (s.parameter == "n_trades")
                probe.strategy.n_trades = static_cast<int>(v);
            else if (s.parameter == "strike")
                probe.strategy.strike = v;
            else
                probe.market.maturity = v;
            try {
                validate(probe);
            } catch (const ConfigError& e) {
                throw ConfigError(path, std::string("out of domain (") + e.what() + ")");
            }
        }
    }
}

inline RunConfig parse_config(const nlohmann::json& j) {
    using namespace detail;
    check_keys(j, "", {"option", "market", "strategy", "rate_model", "mc", "sweep", "quadrature"});
    RunConfig c;

    const std::string option = get_string(j, "", "option");
    if (option == "call")
        c.option = OptionKind::call;
    else if (option == "put")
        c.option = OptionKind::put;
    else
        throw ConfigError("option", "expected call or put");

    const json& m = require(j, "", "market");
    check_keys(m, "market", {"spot", "equity_vol", "maturity"});
    c.market = {get_number(m, "market", "spot"), get_number(m, "market", "equity_vol"),
                get_number(m, "market", "maturity")};

    const json& s = require(j, "", "strategy");
    check_keys(s, "strategy", {"alpha", "beta", "n_trades", "strike", "trigger_offset"});
    c.strategy.alpha = get_number(s, "strategy", "alpha");
    c.strategy.beta = get_number(s, "strategy", "beta");
    const auto n = get_integer(s, "strategy", "n_trades");
    if (n < 1 || n > 10'000'000)
        throw ConfigError("strategy.n_trades", "must be between 1 and 10000000");
    c.strategy.n_trades = static_cast<int>(n);
    c.strategy.strike = get_number(s, "strategy", "strike");
    c.strategy.trigger_offset = get_number_or(s, "strategy", "trigger_offset", 0.0);

    c.rate_model = parse_rate_model(require(j, "", "rate_model"), "rate_model");

    if (j.contains("mc")) {
        const json& mc = j.at("mc");
        check_keys(mc, "mc", {"n_paths", "n_steps", "seed", "antithetic", "threads"});
        McConfig cfg;
        const auto paths = get_integer(mc, "mc", "n_paths");
        if (paths < 2)
            throw ConfigError("mc.n_paths", "must be >= 2");
        cfg.n_paths = static_cast<std::uint64_t>(paths);
        if (mc.contains("n_steps")) {
            const auto steps = get_integer(mc, "mc", "n_steps");
            if (steps < 1 || steps > 1'000'000)
                throw ConfigError("mc.n_steps", "must be between 1 and 1000000");
            cfg.n_steps = static_cast<int>(steps);
        }
        if (mc.contains("seed")) {
            const json& seed = mc.at("seed");
            if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
                throw ConfigError("mc.seed", "expected a non-negative integer");
            cfg.seed = seed.get<std::uint64_t>();
        }
        if (mc.contains("antithetic")) {
            if (!mc.at("antithetic").is_boolean())
                throw ConfigError("mc.antithetic", "expected true or false");
            cfg.antithetic = mc.at("antithetic").get<bool>();
        }
        if (mc.contains("threads")) {
            const auto threads = get_integer(mc, "mc", "threads");
            if (threads < 0 || threads > 4096)
                throw ConfigError("mc.threads", "must be between 0 and 4096");
            cfg.threads = static_cast<unsigned>(threads);
        }
        c.mc = cfg;
    }

    if (j.contains("sweep")) {
        const json& sw = j.at("sweep");
        check_keys(sw, "sweep", {"parameter", "values"});
        c.sweep = SweepSpec{get_string(sw, "sweep", "parameter"), get_numbers(sw, "sweep", "values")};
    }

    if (j.contains("quadrature")) {
        const json& q = j.at("quadrature");
        check_keys(q, "quadrature", {"abs_tolerance", "max_subdivisions"});
        c.quadrature.abs_tolerance =
            get_number_or(q, "quadrature", "abs_tolerance", c.quadrature.abs_tolerance);
        if (q.contains("max_subdivisions")) {
            const auto ms = get_integer(q, "quadrature", "max_subdivisions");
            if (ms < 1 || ms > 10'000'000)
                throw ConfigError("quadrature.max_subdivisions", "must be between 1 and 10000000");
            c.quadrature.max_subdivisions = static_cast<int>(ms);
        }
    }

    validate(c);
    return c;
}

inline RunConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("--config", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

inline nlohmann::json to_json(const RunConfig& c) {
    using nlohmann::json;
    json j;
    j["option"] = to_string(c.option);
    j["market"] = {{"spot", c.market.spot},
                   {"equity_vol", c.market.equity_vol},
                   {"maturity", c.market.maturity}};
    j["strategy"] = {{"alpha", c.strategy.alpha},
                     {"beta", c.strategy.beta},
                     {"n_trades", c.strategy.n_trades},
                     {"strike", c.strategy.strike},
                     {"trigger_offset", c.strategy.trigger_offset}};
    j["rate_model"] = detail::rate_model_to_json(c.rate_model);
    if (c.mc)
        j["mc"] = {{"n_paths", c.mc->n_paths},
                   {"n_steps", c.mc->n_steps},
                   {"seed", c.mc->seed},
                   {"antithetic", c.mc->antithetic},
                   {"threads", c.mc->threads}};
    if (c.sweep)
        j["sweep"] = {{"parameter", c.sweep->parameter}, {"values", c.sweep->values}};
    j["quadrature"] = {{"abs_tolerance", c.quadrature.abs_tolerance},
                       {"max_subdivisions", c.quadrature.max_subdivisions}};
    return j;
}

inline std::string serialize_config(const RunConfig& c) { return to_json(c).dump(2); }

} // namespace ladder
