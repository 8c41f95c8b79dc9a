#pragma once

// Closed-form prices of ladder-strategy calls and puts.
//
// On every band between consecutive ladder levels the intrinsic value is
// affine, V = c_stock * S_T + c_cash, so its expectation under a lognormal
// terminal law is
//
//     c_stock * E[S_T; lower < S_T < upper] + c_cash * P(lower < S_T < upper)
//
// and the price is the discount factor times the sum over bands.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ladder/numerics.hpp"
#include "ladder/rates.hpp"
#include "ladder/strategy.hpp"

namespace ladder {

enum class OptionKind { call, put };

inline std::string to_string(OptionKind k) { return k == OptionKind::call ? "call" : "put"; }

/// Log-variance below which the law is treated as a point mass at the forward.
inline constexpr double kDegenerateLogVar = 1e-14;

struct BandMoments {
    double prob_mass = 0.0;
    double partial_expectation = 0.0;   // E[S_T 1{lower < S_T < upper}]
};

/// Probability and partial first moment of S_T on (lower, upper). A lower
/// limit of 0 and an infinite upper limit are allowed.
inline BandMoments lognormal_band_moments(const TerminalLaw& law, double lower, double upper) {
    if (!(lower >= 0.0))
        throw std::invalid_argument("lognormal_band_moments: lower must be >= 0");
    if (!(lower < upper))
        throw std::invalid_argument("lognormal_band_moments: lower must be below upper");
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double sd = law.log_sd();
    const double z_lo = lower == 0.0 ? -inf : (std::log(lower) - law.log_mean) / sd;
    const double z_hi = std::isinf(upper) ? inf : (std::log(upper) - law.log_mean) / sd;
    return {normal_interval(z_lo, z_hi),
            law.forward() * normal_interval(z_lo - sd, z_hi - sd)};
}

/// One affine piece of an intrinsic value function.
struct BandSpec {
    Band band;
    double lower = 0.0;
    double upper = 0.0;
    double stock_coef = 0.0;
    double cash_coef = 0.0;
};

namespace detail {

// Prefix sums H_m = sum_{n<=m} 1/S_n, m = 0..N.
inline std::vector<double> reciprocal_prefix(const std::vector<double>& levels) {
    std::vector<double> h{0.0};
    CompensatedSum acc;
    for (double s : levels) {
        acc += 1.0 / s;
        h.push_back(acc.value());
    }
    return h;
}

} // namespace detail

/// Affine decomposition of the call value, bands ordered by price.
inline std::vector<BandSpec> call_bands(const CallStrategy& s) {
    const TradeLadder ladder = call_ladder(s);
    const auto& lv = ladder.levels;
    const int n = s.n_trades;
    const double k = s.strike;
    const auto h = detail::reciprocal_prefix(lv);
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<BandSpec> bands;
    bands.push_back({{}, 0.0, k, 0.0, 0.0});
    for (int m = 0; m <= n; ++m) {
        const double lower = m == 0 ? k : lv[m - 1];
        const double upper = m == n ? inf : lv[m];
        const double stock = 1.0 - s.beta * k / n * h[m];
        const double cash = (s.beta * (static_cast<double>(m) / n) - 1.0) * k;
        bands.push_back({band_from_trades(m, n), lower, upper, stock, cash});
    }
    return bands;
}

/// Affine decomposition of the put value, bands ordered by price: the
/// deepest band (0, S_N] first, the out-of-the-money band (K, inf) last.
inline std::vector<BandSpec> put_bands(const PutStrategy& s) {
    const TradeLadder ladder = put_ladder(s);
    const auto& lv = ladder.levels;
    const int n = s.n_trades;
    const double k = s.strike;
    const auto h = detail::reciprocal_prefix(lv);

    std::vector<BandSpec> bands;
    for (int m = n; m >= 0; --m) {
        const double lower = m == n ? 0.0 : lv[m];
        const double upper = m == 0 ? k : lv[m - 1];
        const double stock = -(1.0 - s.beta * k / n * h[m]);
        const double cash = (1.0 - s.beta * (static_cast<double>(m) / n)) * k;
        bands.push_back({band_from_trades(m, n), lower, upper, stock, cash});
    }
    bands.push_back({{}, k, std::numeric_limits<double>::infinity(), 0.0, 0.0});
    return bands;
}

struct BandTerm {
    Band band;
    double lower = 0.0;
    double upper = 0.0;
    double stock_leg = 0.0;   // stock coefficient times partial expectation
    double cash_leg = 0.0;    // cash coefficient times probability mass
    double prob_mass = 0.0;
};

struct PriceBreakdown {
    double price = 0.0;
    double discount = 1.0;
    std::vector<BandTerm> band_terms;
    /// Normal CDF arguments in evaluation order. Each priced band
    /// contributes its upper and lower argument per leg; an unbounded upper
    /// band contributes the single argument whose CDF is its tail mass.
    std::vector<double> d_arguments;

    double total_mass() const {
        CompensatedSum acc;
        for (const auto& t : band_terms)
            acc += t.prob_mass;
        return acc.value();
    }
};

namespace detail {

inline void append_d_arguments(std::vector<double>& out, const BandSpec& b,
                               const TerminalLaw& law, bool cash_first) {
    const double sd = law.log_sd();
    const double mu = law.log_mean;
    auto leg = [&](double shift) {
        if (std::isinf(b.upper)) {
            out.push_back((mu + shift - std::log(b.lower)) / sd);
            return;
        }
        out.push_back((std::log(b.upper) - mu - shift) / sd);
        if (b.lower > 0.0)
            out.push_back((std::log(b.lower) - mu - shift) / sd);
    };
    const double var = law.log_var;
    if (cash_first) {
        leg(0.0);
        leg(var);
    } else {
        leg(var);
        leg(0.0);
    }
}

inline bool in_band(const BandSpec& b, double x, OptionKind kind) {
    // Calls use left-closed bands, puts right-closed bands.
    if (kind == OptionKind::call)
        return x >= b.lower && x < b.upper;
    return x > b.lower && x <= b.upper;
}

inline PriceBreakdown price_bands(const std::vector<BandSpec>& bands, const TerminalLaw& law,
                                  OptionKind kind) {
    law.validate();
    PriceBreakdown out;
    out.discount = law.discount;
    CompensatedSum total;

    if (law.log_var < kDegenerateLogVar) {
        const double fwd = law.forward();
        for (const auto& b : bands) {
            BandTerm term{b.band, b.lower, b.upper, 0.0, 0.0, 0.0};
            if (in_band(b, fwd, kind)) {
                term.prob_mass = 1.0;
                term.stock_leg = b.stock_coef * fwd;
                term.cash_leg = b.cash_coef;
                total += term.stock_leg;
                total += term.cash_leg;
            }
            out.band_terms.push_back(term);
        }
        out.price = law.discount * total.value();
        return out;
    }

    for (const auto& b : bands) {
        const BandMoments mom = lognormal_band_moments(law, b.lower, b.upper);
        BandTerm term{b.band, b.lower, b.upper, b.stock_coef * mom.partial_expectation,
                      b.cash_coef * mom.prob_mass, mom.prob_mass};
        if (b.band.kind != Band::Kind::out_of_money)
            append_d_arguments(out.d_arguments, b, law, kind == OptionKind::put);
        total += term.stock_leg;
        total += term.cash_leg;
        out.band_terms.push_back(term);
    }
    out.price = law.discount * total.value();
    return out;
}

} // namespace detail

inline PriceBreakdown call_price(const CallStrategy& s, const TerminalLaw& law) {
    return detail::price_bands(call_bands(s), law, OptionKind::call);
}

/// Rejects trigger_offset != 0 and alpha >= 1.
inline PriceBreakdown put_price(const PutStrategy& s, const TerminalLaw& law) {
    return detail::price_bands(put_bands(s), law, OptionKind::put);
}

/// Plain European price under the same law (the beta = 0 reference).
inline double vanilla_price(OptionKind kind, double strike, const TerminalLaw& law) {
    law.validate();
    if (!(strike > 0.0))
        throw std::invalid_argument("strike: must be > 0");
    if (law.log_var < kDegenerateLogVar) {
        const double fwd = law.forward();
        return law.discount *
               (kind == OptionKind::call ? std::max(fwd - strike, 0.0) : std::max(strike - fwd, 0.0));
    }
    if (kind == OptionKind::call) {
        const auto m = lognormal_band_moments(law, strike, std::numeric_limits<double>::infinity());
        return law.discount * (m.partial_expectation - strike * m.prob_mass);
    }
    const auto m = lognormal_band_moments(law, 0.0, strike);
    return law.discount * (strike * m.prob_mass - m.partial_expectation);
}

} // namespace ladder
