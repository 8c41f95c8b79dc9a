#pragma once

// Terminal law of ln S_T under the pricing measure, and zero-coupon bond
// prices, for a fixed short rate and for the Vasicek and Hull-White models.
//
// The equity follows dS = r S dt + sigma_1 S dW_1 with W_1 independent of
// the rate driver W_2. Under the T-forward measure the forward S_t / P(t,T)
// is a lognormal martingale, so every law satisfies
//
//     log_mean + log_var / 2 = ln(S_0 / P(0,T)).
//
// The variance adds the integrated bond volatility to sigma_1^2 T.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "ladder/numerics.hpp"

namespace ladder {

struct MarketParams {
    double spot = 0.0;
    double equity_vol = 0.0;
    double maturity = 0.0;

    friend bool operator==(const MarketParams&, const MarketParams&) = default;

    void validate() const {
        if (!(spot > 0.0) || !std::isfinite(spot))
            throw std::invalid_argument("spot: must be > 0");
        if (!(equity_vol > 0.0) || !std::isfinite(equity_vol))
            throw std::invalid_argument("equity_vol: must be > 0");
        if (!(maturity > 0.0) || !std::isfinite(maturity))
            throw std::invalid_argument("maturity: must be > 0");
    }
};

struct FixedRate {
    double r = 0.0;

    void validate() const {
        if (!std::isfinite(r))
            throw std::invalid_argument("r: must be finite");
    }
};

/// dr = (theta - a r) dt + rate_vol dW_2
struct VasicekParams {
    double a = 0.0;
    double theta = 0.0;
    double rate_vol = 0.0;
    double r0 = 0.0;

    void validate() const {
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("a: must be > 0");
        if (!std::isfinite(theta))
            throw std::invalid_argument("theta: must be finite");
        if (!(rate_vol >= 0.0) || !std::isfinite(rate_vol))
            throw std::invalid_argument("rate_vol: must be >= 0");
        if (!std::isfinite(r0))
            throw std::invalid_argument("r0: must be finite");
    }
};

/// dr = (theta(t) - a r) dt + rate_vol dW_2
struct HullWhiteParams {
    double a = 0.0;
    std::function<double(double)> theta_fn;
    double rate_vol = 0.0;
    double r0 = 0.0;
    /// Times where theta_fn may jump; quadrature splits there.
    std::vector<double> theta_breaks;

    void validate() const {
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("a: must be > 0");
        if (!theta_fn)
            throw std::invalid_argument("theta_fn: must be set");
        if (!(rate_vol >= 0.0) || !std::isfinite(rate_vol))
            throw std::invalid_argument("rate_vol: must be >= 0");
        if (!std::isfinite(r0))
            throw std::invalid_argument("r0: must be finite");
    }
};

using RateModel = std::variant<FixedRate, VasicekParams, HullWhiteParams>;

inline std::function<double(double)> constant_theta(double value) {
    return [value](double) { return value; };
}

inline std::function<double(double)> affine_theta(double intercept, double slope) {
    return [intercept, slope](double t) { return intercept + slope * t; };
}

/// values[i] applies on [breaks[i-1], breaks[i]), with breaks[-1] = -inf
/// and breaks[n] = +inf; requires values.size() == breaks.size() + 1.
inline std::function<double(double)> piecewise_theta(std::vector<double> breaks,
                                                     std::vector<double> values) {
    if (values.size() != breaks.size() + 1)
        throw std::invalid_argument("piecewise theta: need one more value than breakpoints");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i - 1] < breaks[i]))
            throw std::invalid_argument("piecewise theta: breakpoints must be increasing");
    return [breaks = std::move(breaks), values = std::move(values)](double t) {
        std::size_t i = 0;
        while (i < breaks.size() && t >= breaks[i])
            ++i;
        return values[i];
    };
}

struct TerminalLaw {
    double log_mean = 0.0;
    double log_var = 0.0;
    double discount = 1.0;

    double log_sd() const { return std::sqrt(log_var); }
    /// E^T[S_T], the forward price.
    double forward() const { return std::exp(log_mean + 0.5 * log_var); }

    void validate() const {
        if (!std::isfinite(log_mean))
            throw std::invalid_argument("log_mean: must be finite");
        if (!(log_var >= 0.0) || !std::isfinite(log_var))
            throw std::invalid_argument("log_var: must be >= 0");
        if (!(discount > 0.0) || !std::isfinite(discount))
            throw std::invalid_argument("discount: must be > 0");
    }
};

namespace detail {

// B(t) = (1 - e^{-a t}) / a
inline double affine_b(double a, double t) { return -std::expm1(-a * t) / a; }

// Var[int_0^T r_s ds] for a Gaussian short rate with reversion a and vol sigma.
inline double integrated_rate_variance(double a, double sigma, double t) {
    const double b = affine_b(a, t);
    const double b2 = -std::expm1(-2.0 * a * t) / (2.0 * a);
    return sigma * sigma / (a * a) * (t - 2.0 * b + b2);
}

inline TerminalLaw forward_law(const MarketParams& m, double log_bond, double rate_var) {
    TerminalLaw law;
    law.log_var = m.equity_vol * m.equity_vol * m.maturity + rate_var;
    law.discount = std::exp(log_bond);
    law.log_mean = std::log(m.spot) - log_bond - 0.5 * law.log_var;
    return law;
}

} // namespace detail

inline TerminalLaw fixed_law(const MarketParams& m, double r) {
    m.validate();
    TerminalLaw law;
    law.log_mean = std::log(m.spot) + (r - 0.5 * m.equity_vol * m.equity_vol) * m.maturity;
    law.log_var = m.equity_vol * m.equity_vol * m.maturity;
    law.discount = std::exp(-r * m.maturity);
    return law;
}

inline double vasicek_log_bond(const VasicekParams& v, double T) {
    const double b = detail::affine_b(v.a, T);
    const double s2 = v.rate_vol * v.rate_vol;
    return (b - T) * (v.theta / v.a - s2 / (2.0 * v.a * v.a)) - s2 / (4.0 * v.a) * b * b -
           v.r0 * b;
}

/// Zero-coupon bond P(0,T) under Vasicek.
inline double vasicek_bond(const VasicekParams& v, double T) {
    v.validate();
    if (!(T > 0.0))
        throw std::invalid_argument("maturity: must be > 0");
    return std::exp(vasicek_log_bond(v, T));
}

inline TerminalLaw vasicek_law(const MarketParams& m, const VasicekParams& v) {
    m.validate();
    v.validate();
    return detail::forward_law(m, vasicek_log_bond(v, m.maturity),
                               detail::integrated_rate_variance(v.a, v.rate_vol, m.maturity));
}

/// int_0^T e^{-at} int_0^t theta(s) e^{as} ds dt, evaluated after swapping
/// the order of integration as int_0^T theta(s) B(T - s) ds.
inline double hw_theta_integral(const HullWhiteParams& h, double T,
                                const QuadratureSpec& spec = {}) {
    h.validate();
    if (!(T > 0.0))
        throw std::invalid_argument("maturity: must be > 0");
    auto integrand = [&](double s) { return h.theta_fn(s) * detail::affine_b(h.a, T - s); };
    return integrate_piecewise(integrand, 0.0, T, h.theta_breaks, spec);
}

inline double hw_log_bond(const HullWhiteParams& h, double T, const QuadratureSpec& spec = {}) {
    const double b = detail::affine_b(h.a, T);
    return -h.r0 * b - hw_theta_integral(h, T, spec) +
           0.5 * detail::integrated_rate_variance(h.a, h.rate_vol, T);
}

/// Zero-coupon bond P(0,T) under Hull-White.
inline double hw_bond(const HullWhiteParams& h, double T, const QuadratureSpec& spec = {}) {
    return std::exp(hw_log_bond(h, T, spec));
}

inline TerminalLaw hw_law(const MarketParams& m, const HullWhiteParams& h,
                          const QuadratureSpec& spec = {}) {
    m.validate();
    return detail::forward_law(m, hw_log_bond(h, m.maturity, spec),
                               detail::integrated_rate_variance(h.a, h.rate_vol, m.maturity));
}

inline TerminalLaw terminal_law(const MarketParams& m, const RateModel& model,
                                const QuadratureSpec& spec = {}) {
    return std::visit(
        [&](const auto& p) -> TerminalLaw {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, FixedRate>) {
                p.validate();
                return fixed_law(m, p.r);
            } else if constexpr (std::is_same_v<P, VasicekParams>) {
                return vasicek_law(m, p);
            } else {
                return hw_law(m, p, spec);
            }
        },
        model);
}

inline double bond_price(const RateModel& model, double T, const QuadratureSpec& spec = {}) {
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, FixedRate>)
                return std::exp(-p.r * T);
            else if constexpr (std::is_same_v<P, VasicekParams>)
                return vasicek_bond(p, T);
            else
                return hw_bond(p, T, spec);
        },
        model);
}

} // namespace ladder
