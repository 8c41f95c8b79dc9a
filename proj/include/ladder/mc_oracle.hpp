#pragma once

// Monte Carlo estimators used to check the closed forms.
//
// sample_terminal draws ln S_T straight from a TerminalLaw, which checks the
// band integration. simulate_paths simulates the short rate and the equity
// jointly under the risk-neutral measure and discounts each path by
// exp(-int r dt), which checks the terminal law itself.
//
// Every sample i draws from its own generator keyed by (seed, i), and
// samples are reduced in fixed-size blocks combined in block order, so the
// estimate is bit-identical for any number of worker threads.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "ladder/numerics.hpp"
#include "ladder/rates.hpp"

namespace ladder {

/// Fewest steps accepted for stochastic-rate path simulation (step <= T/64).
inline constexpr int kMinStochasticRateSteps = 64;

struct McConfig {
    std::uint64_t n_paths = 1'000'000;
    int n_steps = 128;
    std::uint64_t seed = 0;
    bool antithetic = false;
    /// Worker threads; 0 uses the hardware concurrency. Never affects results.
    unsigned threads = 0;

    friend bool operator==(const McConfig&, const McConfig&) = default;

    void validate() const {
        if (n_paths < 2)
            throw std::invalid_argument("n_paths: must be >= 2");
        if (n_steps < 1)
            throw std::invalid_argument("n_steps: must be >= 1");
    }
};

/// Discounted sample mean. With antithetic sampling each pair counts as one
/// sample in n_paths and in the standard error.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t seed = 0;

    bool brackets(double value, double n_se = 3.0) const {
        return std::abs(value - mean) <= n_se * std_error;
    }
};

// splitmix64, used to expand (seed, stream) into generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ (period 2^256 - 1).
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
        for (auto& word : s_)
            word = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
};

/// Standard normal draws, optionally mirrored for the antithetic partner.
class NormalSource {
public:
    NormalSource(std::uint64_t seed, std::uint64_t stream, double sign)
        : engine_(seed, stream), sign_(sign) {}
    double operator()() { return sign_ * dist_(engine_); }

private:
    Xoshiro256pp engine_;
    std::normal_distribution<double> dist_;
    double sign_;
};

namespace detail {

struct RunningStats {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const RunningStats& o) {
        if (o.n == 0)
            return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n);
        const double nb = static_cast<double>(o.n);
        const double delta = o.mean - mean;
        const double total = na + nb;
        mean += delta * nb / total;
        m2 += o.m2 + delta * delta * na * nb / total;
        n += o.n;
    }

    double std_error() const {
        if (n < 2)
            return 0.0;
        const double var = std::max(m2, 0.0) / static_cast<double>(n - 1);
        return std::sqrt(var / static_cast<double>(n));
    }
};

inline constexpr std::uint64_t kBlockSize = 8192;

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs sample(i, stats) for i in [0, n), K statistics per sample, and
/// merges the per-block statistics in block order.
template <std::size_t K, class Sample>
std::array<RunningStats, K> run_blocks(std::uint64_t n, unsigned threads, Sample&& sample) {
    const std::uint64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<std::array<RunningStats, K>> blocks(n_blocks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try {
            for (;;) {
                const std::uint64_t b = next.fetch_add(1);
                if (b >= n_blocks)
                    return;
                const std::uint64_t end = std::min(n, (b + 1) * kBlockSize);
                for (std::uint64_t i = b * kBlockSize; i < end; ++i)
                    sample(i, blocks[b]);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next.store(n_blocks);
        }
    };

    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), n_blocks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    std::array<RunningStats, K> total{};
    for (const auto& blk : blocks)
        for (std::size_t k = 0; k < K; ++k)
            total[k].merge(blk[k]);
    return total;
}

inline McEstimate make_estimate(const RunningStats& s, double scale, const McConfig& cfg) {
    return {scale * s.mean, scale * s.std_error(), s.n, cfg.seed};
}

} // namespace detail

/// Discount times the sample mean of payoff(S_T), ln S_T ~ N(log_mean, log_var).
template <class Payoff>
McEstimate sample_terminal(const TerminalLaw& law, Payoff&& payoff, const McConfig& cfg) {
    law.validate();
    cfg.validate();
    const double mu = law.log_mean;
    const double sd = law.log_sd();
    auto draw = [&](std::uint64_t i, double sign) {
        NormalSource normal(cfg.seed, i, sign);
        return static_cast<double>(payoff(std::exp(mu + sd * normal())));
    };
    auto stats = detail::run_blocks<1>(
        cfg.n_paths, cfg.threads, [&](std::uint64_t i, std::array<detail::RunningStats, 1>& s) {
            if (cfg.antithetic)
                s[0].add(0.5 * (draw(i, 1.0) + draw(i, -1.0)));
            else
                s[0].add(draw(i, 1.0));
        });
    return detail::make_estimate(stats[0], law.discount, cfg);
}

namespace detail {

// Exact Gaussian transition r_{k+1} = decay * r_k + drift[k] + noise_sd * z
// on a uniform grid, for either Gaussian short-rate model.
struct RateGrid {
    int steps = 0;
    double dt = 0.0;
    bool stochastic = false;
    double fixed_r = 0.0;
    double r0 = 0.0;
    double decay = 1.0;
    double noise_sd = 0.0;
    std::vector<double> drift;
};

inline RateGrid make_rate_grid(const RateModel& model, double T, int steps,
                               const QuadratureSpec& spec) {
    RateGrid g;
    g.steps = steps;
    g.dt = T / steps;
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, FixedRate>) {
                p.validate();
                g.fixed_r = p.r;
            } else {
                p.validate();
                g.stochastic = true;
                g.r0 = p.r0;
                g.decay = std::exp(-p.a * g.dt);
                g.noise_sd = p.rate_vol * std::sqrt(-std::expm1(-2.0 * p.a * g.dt) / (2.0 * p.a));
                g.drift.resize(static_cast<std::size_t>(steps));
                for (int k = 0; k < steps; ++k) {
                    const double t1 = g.dt * (k + 1);
                    if constexpr (std::is_same_v<P, VasicekParams>) {
                        g.drift[k] = p.theta * affine_b(p.a, g.dt);
                    } else {
                        const double t0 = g.dt * k;
                        auto kernel = [&](double s) {
                            return p.theta_fn(s) * std::exp(-p.a * (t1 - s));
                        };
                        g.drift[k] = integrate_piecewise(kernel, t0, t1, p.theta_breaks, spec);
                    }
                }
            }
        },
        model);
    return g;
}

struct PathDraw {
    double int_r_fine = 0.0;
    double int_r_coarse = 0.0;   // trapezoid on every other grid point
    double equity_shock = 0.0;   // W_1(T)
};

inline PathDraw draw_path(const RateGrid& g, NormalSource& normal, double T) {
    PathDraw out;
    const double sqrt_dt = std::sqrt(g.dt);
    if (!g.stochastic) {
        out.int_r_fine = out.int_r_coarse = g.fixed_r * T;
        for (int k = 0; k < g.steps; ++k)
            out.equity_shock += sqrt_dt * normal();
        return out;
    }
    double r = g.r0;
    double fine = 0.0;
    double coarse = 0.0;
    double r_coarse_prev = g.r0;
    for (int k = 0; k < g.steps; ++k) {
        const double r_next = g.decay * r + g.drift[k] + g.noise_sd * normal();
        fine += 0.5 * g.dt * (r + r_next);
        if (k % 2 == 1) {
            coarse += g.dt * (r_coarse_prev + r_next);
            r_coarse_prev = r_next;
        }
        r = r_next;
        out.equity_shock += sqrt_dt * normal();
    }
    out.int_r_fine = fine;
    out.int_r_coarse = coarse;
    return out;
}

inline void check_path_inputs(const MarketParams& m, const RateModel& model, int steps) {
    m.validate();
    if (!std::holds_alternative<FixedRate>(model) && steps < kMinStochasticRateSteps)
        throw std::invalid_argument("n_steps: stochastic-rate simulation needs at least " +
                                    std::to_string(kMinStochasticRateSteps) +
                                    " steps (step <= T/64)");
}

} // namespace detail

/// Joint simulation of (r_t, S_t): exact Gaussian short-rate transitions,
/// trapezoidal int r dt, and ln S_T = ln S_0 + int r dt - sigma_1^2 T/2 +
/// sigma_1 W_1(T) accumulated step by step. Returns the mean of
/// exp(-int r dt) * payoff(S_T).
template <class Payoff>
McEstimate simulate_paths(const MarketParams& m, const RateModel& model, Payoff&& payoff,
                          const McConfig& cfg, const QuadratureSpec& spec = {}) {
    cfg.validate();
    detail::check_path_inputs(m, model, cfg.n_steps);
    const detail::RateGrid grid = detail::make_rate_grid(model, m.maturity, cfg.n_steps, spec);
    const double log_s0 = std::log(m.spot);
    const double convexity = 0.5 * m.equity_vol * m.equity_vol * m.maturity;

    auto one = [&](std::uint64_t i, double sign) {
        NormalSource normal(cfg.seed, i, sign);
        const detail::PathDraw p = detail::draw_path(grid, normal, m.maturity);
        const double s_T =
            std::exp(log_s0 + p.int_r_fine - convexity + m.equity_vol * p.equity_shock);
        return std::exp(-p.int_r_fine) * static_cast<double>(payoff(s_T));
    };
    auto stats = detail::run_blocks<1>(
        cfg.n_paths, cfg.threads, [&](std::uint64_t i, std::array<detail::RunningStats, 1>& s) {
            if (cfg.antithetic)
                s[0].add(0.5 * (one(i, 1.0) + one(i, -1.0)));
            else
                s[0].add(one(i, 1.0));
        });
    return detail::make_estimate(stats[0], 1.0, cfg);
}

/// Step-halving check on common random numbers: `coarse` uses cfg.n_steps,
/// `fine` uses 2 * cfg.n_steps, and the coarse short-rate path is the fine
/// exact path sampled at every other point. `shift` estimates fine - coarse.
struct StepRefinement {
    McEstimate coarse;
    McEstimate fine;
    McEstimate shift;
};

template <class Payoff>
StepRefinement simulate_paths_refined(const MarketParams& m, const RateModel& model,
                                      Payoff&& payoff, const McConfig& cfg,
                                      const QuadratureSpec& spec = {}) {
    cfg.validate();
    detail::check_path_inputs(m, model, cfg.n_steps);
    const detail::RateGrid grid =
        detail::make_rate_grid(model, m.maturity, 2 * cfg.n_steps, spec);
    const double log_s0 = std::log(m.spot);
    const double convexity = 0.5 * m.equity_vol * m.equity_vol * m.maturity;

    auto one = [&](std::uint64_t i, double sign) {
        NormalSource normal(cfg.seed, i, sign);
        const detail::PathDraw p = detail::draw_path(grid, normal, m.maturity);
        const double shock = log_s0 - convexity + m.equity_vol * p.equity_shock;
        const double fine = std::exp(-p.int_r_fine) * static_cast<double>(payoff(std::exp(shock + p.int_r_fine)));
        const double coarse =
            std::exp(-p.int_r_coarse) * static_cast<double>(payoff(std::exp(shock + p.int_r_coarse)));
        return std::array<double, 2>{coarse, fine};
    };
    auto stats = detail::run_blocks<3>(
        cfg.n_paths, cfg.threads, [&](std::uint64_t i, std::array<detail::RunningStats, 3>& s) {
            std::array<double, 2> v = one(i, 1.0);
            if (cfg.antithetic) {
                const auto w = one(i, -1.0);
                v = {0.5 * (v[0] + w[0]), 0.5 * (v[1] + w[1])};
            }
            s[0].add(v[0]);
            s[1].add(v[1]);
            s[2].add(v[1] - v[0]);
        });
    return {detail::make_estimate(stats[0], 1.0, cfg), detail::make_estimate(stats[1], 1.0, cfg),
            detail::make_estimate(stats[2], 1.0, cfg)};
}

} // namespace ladder
