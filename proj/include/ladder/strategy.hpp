#pragma once

// Trade ladders and intrinsic value functions for options whose holder
// trades the underlying at N equally spaced price levels.
//
// Calls: the holder buys as the price rises through S_n = K + n*delta,
// n = 1..N, up to (1 + alpha)K. Puts: the holder sells as the price falls
// through S_n = K - n*delta down to (1 - alpha)K. In both cases
// delta = alpha*K/N and each trade commits beta/N of the notional capital.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ladder {

struct CallStrategy {
    double alpha = 0.0;   // width of the trading range as a fraction of strike
    double beta = 0.0;    // capital proportion deployed once every trade executed
    int n_trades = 1;
    double strike = 0.0;

    double spacing() const { return alpha * strike / n_trades; }

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("alpha: must be > 0");
        if (!(beta >= 0.0 && beta <= 1.0))
            throw std::invalid_argument("beta: must lie in [0, 1]");
        if (n_trades < 1)
            throw std::invalid_argument("n_trades: must be >= 1");
        if (!(strike > 0.0) || !std::isfinite(strike))
            throw std::invalid_argument("strike: must be > 0");
    }
};

struct PutStrategy {
    double alpha = 0.0;
    double beta = 0.0;
    int n_trades = 1;
    double strike = 0.0;
    /// Distance below K at which selling would start. Only 0 is priceable.
    double trigger_offset = 0.0;

    double spacing() const { return alpha * strike / n_trades; }

    /// Checks the type invariants only; see validate_for_pricing().
    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("alpha: must be > 0");
        if (!(beta >= 0.0 && beta <= 1.0))
            throw std::invalid_argument("beta: must lie in [0, 1]");
        if (n_trades < 1)
            throw std::invalid_argument("n_trades: must be >= 1");
        if (!(strike > 0.0) || !std::isfinite(strike))
            throw std::invalid_argument("strike: must be > 0");
        if (!(trigger_offset >= 0.0 && trigger_offset < strike))
            throw std::invalid_argument("trigger_offset: must lie in [0, strike)");
    }

    /// The closed-form value function is written for ladders that start at
    /// K, and the deepest level (1 - alpha)K must stay positive.
    void validate_for_pricing() const {
        validate();
        if (trigger_offset != 0.0)
            throw std::invalid_argument("trigger_offset: must be 0 for pricing");
        if (!(alpha < 1.0))
            throw std::invalid_argument(
                "alpha: must be < 1 for puts (degenerate ladder, level (1 - alpha)K <= 0)");
    }
};

enum class LadderDirection { ascending, descending };

struct TradeLadder {
    std::vector<double> levels;   // S_1 .. S_N
    double spacing = 0.0;
    LadderDirection direction = LadderDirection::ascending;
};

inline TradeLadder call_ladder(const CallStrategy& s) {
    s.validate();
    TradeLadder ladder{{}, s.spacing(), LadderDirection::ascending};
    ladder.levels.reserve(static_cast<std::size_t>(s.n_trades));
    // K plus a fraction of the range, so S_N is K + alpha*K with one rounding.
    for (int n = 1; n <= s.n_trades; ++n)
        ladder.levels.push_back(s.strike + s.strike * (s.alpha * (static_cast<double>(n) / s.n_trades)));
    return ladder;
}

inline TradeLadder put_ladder(const PutStrategy& s) {
    s.validate_for_pricing();
    TradeLadder ladder{{}, s.spacing(), LadderDirection::descending};
    ladder.levels.reserve(static_cast<std::size_t>(s.n_trades));
    for (int n = 1; n <= s.n_trades; ++n)
        ladder.levels.push_back(s.strike - s.strike * (s.alpha * (static_cast<double>(n) / s.n_trades)));
    return ladder;
}

/// Where a terminal price sits relative to the strike and the ladder.
struct Band {
    enum class Kind { out_of_money, vanilla, intermediate, saturated };

    Kind kind = Kind::out_of_money;
    /// Number of trades executed: 0 for out_of_money and vanilla, m for
    /// intermediate band m (1 <= m <= N-1), N for saturated.
    int trades = 0;

    friend bool operator==(const Band&, const Band&) = default;
};

inline std::string to_string(const Band& b) {
    switch (b.kind) {
    case Band::Kind::out_of_money:
        return "out_of_money";
    case Band::Kind::vanilla:
        return "vanilla";
    case Band::Kind::intermediate:
        return "band(" + std::to_string(b.trades) + ")";
    case Band::Kind::saturated:
        return "saturated";
    }
    return "unknown";
}

inline Band band_from_trades(int trades, int n_trades) {
    if (trades == 0)
        return {Band::Kind::vanilla, 0};
    if (trades >= n_trades)
        return {Band::Kind::saturated, n_trades};
    return {Band::Kind::intermediate, trades};
}

/// Call bands are left-closed [S_m, S_m+1), put bands right-closed
/// (S_m+1, S_m]; out of the money is S_T < K for calls and S_T > K for puts.
inline Band band_index(double s_T, const TradeLadder& ladder, double strike) {
    const auto& lv = ladder.levels;
    const int n = static_cast<int>(lv.size());
    if (ladder.direction == LadderDirection::ascending) {
        if (s_T < strike)
            return {};
        const auto executed = std::upper_bound(lv.begin(), lv.end(), s_T) - lv.begin();
        return band_from_trades(static_cast<int>(executed), n);
    }
    if (s_T > strike)
        return {};
    const auto executed =
        std::upper_bound(lv.begin(), lv.end(), s_T, std::greater<>{}) - lv.begin();
    // upper_bound with greater<> stops at the first level < s_T, so levels
    // equal to s_T count as executed.
    return band_from_trades(static_cast<int>(executed), n);
}

/// Call intrinsic value, reusable across many terminal prices.
///
/// Evaluated as the vanilla payoff minus the hedge adjustment
/// (beta*K/N) * sum_{n<=m} (S_T - S_n)/S_n, whose terms are non-negative
/// in floating point, so V <= max(S_T - K, 0) holds exactly.
class CallPayoff {
public:
    explicit CallPayoff(const CallStrategy& s)
        : ladder_(call_ladder(s)), strike_(s.strike), weight_(s.beta * s.strike / s.n_trades) {}

    double operator()(double s_T) const {
        if (s_T < strike_)
            return 0.0;
        double adjustment = 0.0;
        for (double level : ladder_.levels) {
            if (s_T < level)
                break;
            adjustment += (s_T - level) / level;
        }
        return (s_T - strike_) - weight_ * adjustment;
    }

    const TradeLadder& ladder() const { return ladder_; }

private:
    TradeLadder ladder_;
    double strike_;
    double weight_;
};

/// Put intrinsic value: K - S_T less (beta*K/N) * sum_{n<=m} (S_n - S_T)/S_n.
/// Below S_N all N trades have executed.
class PutPayoff {
public:
    explicit PutPayoff(const PutStrategy& s)
        : ladder_(put_ladder(s)), strike_(s.strike), weight_(s.beta * s.strike / s.n_trades) {}

    double operator()(double s_T) const {
        if (s_T > strike_)
            return 0.0;
        double adjustment = 0.0;
        for (double level : ladder_.levels) {
            if (s_T > level)
                break;
            adjustment += (level - s_T) / level;
        }
        return (strike_ - s_T) - weight_ * adjustment;
    }

    const TradeLadder& ladder() const { return ladder_; }

private:
    TradeLadder ladder_;
    double strike_;
    double weight_;
};

inline double call_payoff(double s_T, const CallStrategy& s) { return CallPayoff(s)(s_T); }

inline double put_payoff(double s_T, const PutStrategy& s) { return PutPayoff(s)(s_T); }

/// Loss of the put writer holding Q = A/K shares against capital A: the
/// vanilla loss Q(K - S) less the income of every sale triggered so far,
/// beta*A/(N*S_n) shares sold at S_n and valued at S.
inline double writer_loss(double s, const PutStrategy& strat, double capital) {
    if (!(capital > 0.0))
        throw std::invalid_argument("capital: must be > 0");
    const TradeLadder ladder = put_ladder(strat);
    const double shares = capital / strat.strike;
    if (s > strat.strike)
        return 0.0;
    double income = 0.0;
    for (double level : ladder.levels) {
        if (s > level)
            break;
        const double sold = strat.beta * capital / (strat.n_trades * level);
        income += sold * (level - s);
    }
    return shares * (strat.strike - s) - income;
}

} // namespace ladder
