#pragma once

// Normal CDF, compensated summation and adaptive Gauss-Legendre quadrature.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ladder {

/// Thrown when an integral does not reach its tolerance within the allowed
/// number of panel bisections.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Standard normal CDF through erfc, accurate in both tails.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * std::numbers::sqrt2 * 0.5);
}

/// Phi(b) - Phi(a) for a <= b, evaluated on whichever tail keeps the two
/// terms small so narrow bands far from the median do not cancel.
inline double normal_interval(double a, double b) {
    if (a >= 0.0)
        return normal_cdf(-a) - normal_cdf(-b);
    return normal_cdf(b) - normal_cdf(a);
}

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct QuadratureSpec {
    double abs_tolerance = 1e-10;
    int max_subdivisions = 2000;

    friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;

    void validate() const {
        if (!(abs_tolerance >= 1e-14))
            throw std::invalid_argument("abs_tolerance must be >= 1e-14");
        if (max_subdivisions < 1)
            throw std::invalid_argument("max_subdivisions must be >= 1");
    }
};

namespace detail {

inline constexpr std::size_t kGaussPoints = 10;

struct GaussRule {
    std::array<double, kGaussPoints> nodes{};
    std::array<double, kGaussPoints> weights{};
};

// Legendre roots by Newton iteration from the Chebyshev guesses.
inline GaussRule make_gauss_legendre() {
    GaussRule rule;
    constexpr std::size_t n = kGaussPoints;
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

inline const GaussRule& gauss_legendre() {
    static const GaussRule rule = make_gauss_legendre();
    return rule;
}

template <class F>
double gauss_panel(F& f, double a, double b) {
    const auto& rule = gauss_legendre();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t i = 0; i < kGaussPoints; ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * acc;
}

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel refine_panel(F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double whole = gauss_panel(f, a, b);
    const double halves = gauss_panel(f, a, mid) + gauss_panel(f, mid, b);
    return {a, b, halves, std::abs(halves - whole)};
}

} // namespace detail

/// Globally adaptive 10-point Gauss-Legendre quadrature of f over [a, b].
///
/// Each panel is estimated by the rule on the whole panel and on its two
/// halves; the worst panel is bisected until the summed error estimate is
/// below spec.abs_tolerance. Exact (to rounding) for polynomials of degree
/// up to 19. Throws QuadratureError after spec.max_subdivisions bisections.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(a <= b))
        throw std::invalid_argument("integrate: lower limit exceeds upper limit");
    if (a == b)
        return 0.0;

    std::vector<detail::Panel> panels{detail::refine_panel(f, a, b)};
    int subdivisions = 0;

    auto sum_of = [&panels](auto field) {
        CompensatedSum acc;
        for (const auto& p : panels)
            acc += field(p);
        return acc.value();
    };
    auto error_of = [](const detail::Panel& p) { return p.error; };
    auto magnitude_of = [](const detail::Panel& p) { return std::abs(p.value); };

    for (;;) {
        const double total_error = sum_of(error_of);
        if (total_error <= spec.abs_tolerance)
            break;
        // Error estimates below this are rounding noise, not truncation.
        if (total_error <= 64.0 * std::numeric_limits<double>::epsilon() * sum_of(magnitude_of))
            break;
        if (subdivisions >= spec.max_subdivisions) {
            throw QuadratureError("integrate: no convergence on [" + std::to_string(a) + ", " +
                                  std::to_string(b) + "] after " +
                                  std::to_string(spec.max_subdivisions) +
                                  " subdivisions (error estimate " +
                                  std::to_string(total_error) + ")");
        }
        std::pop_heap(panels.begin(), panels.end());
        const detail::Panel worst = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        panels.push_back(detail::refine_panel(f, worst.a, mid));
        std::push_heap(panels.begin(), panels.end());
        panels.push_back(detail::refine_panel(f, mid, worst.b));
        std::push_heap(panels.begin(), panels.end());
        ++subdivisions;
    }

    return sum_of([](const detail::Panel& p) { return p.value; });
}

/// Integrates across a sorted list of interior points where f may be
/// discontinuous, splitting the tolerance evenly over the pieces.
template <class F>
double integrate_piecewise(F&& f, double a, double b, const std::vector<double>& breaks,
                           const QuadratureSpec& spec = {}) {
    std::vector<double> knots{a};
    for (double x : breaks)
        if (x > a && x < b)
            knots.push_back(x);
    knots.push_back(b);
    QuadratureSpec piece = spec;
    piece.abs_tolerance =
        std::max(1e-14, spec.abs_tolerance / static_cast<double>(knots.size() - 1));
    CompensatedSum total;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        total += integrate(f, knots[i], knots[i + 1], piece);
    return total.value();
}

} // namespace ladder
