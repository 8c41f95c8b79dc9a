#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ladder/strategy.hpp"
#include "test_support.hpp"

using namespace ladder;
namespace lt = ladder::testing;

namespace {

void expect_levels(const TradeLadder& l, const std::vector<double>& expected, double spacing) {
    ASSERT_EQ(l.levels.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        EXPECT_NEAR(l.levels[i], expected[i], 1e-12) << "level " << i + 1;
    EXPECT_NEAR(l.spacing, spacing, 1e-12);
}

} // namespace

TEST(CallLadder, Examples) {
    expect_levels(call_ladder({0.1, 0.5, 1, 100.0}), {110.0}, 10.0);
    expect_levels(call_ladder({0.2, 0.5, 4, 100.0}), {105.0, 110.0, 115.0, 120.0}, 5.0);
    expect_levels(call_ladder({0.1, 0.5, 2, 50.0}), {52.5, 55.0}, 2.5);
}

TEST(CallLadder, LastLevelIsExactlyTopOfRange) {
    lt::Draw draw(3);
    for (int i = 0; i < 500; ++i) {
        const CallStrategy s{draw.uniform(0.01, 2.0), draw.uniform(0.0, 1.0), draw.integer(1, 300),
                             draw.uniform(1.0, 500.0)};
        const auto l = call_ladder(s);
        EXPECT_EQ(l.levels.back(), s.strike + s.strike * s.alpha);
        for (std::size_t k = 1; k < l.levels.size(); ++k)
            EXPECT_NEAR(l.levels[k] - l.levels[k - 1], l.spacing, 1e-12 * s.strike);
    }
}

TEST(CallLadder, RejectsInvalidStrategies) {
    EXPECT_THROW(call_ladder({0.0, 0.5, 2, 100.0}), std::invalid_argument);
    EXPECT_THROW(call_ladder({0.1, 1.5, 2, 100.0}), std::invalid_argument);
    EXPECT_THROW(call_ladder({0.1, -0.1, 2, 100.0}), std::invalid_argument);
    EXPECT_THROW(call_ladder({0.1, 0.5, 0, 100.0}), std::invalid_argument);
    EXPECT_THROW(call_ladder({0.1, 0.5, 2, -1.0}), std::invalid_argument);
}

TEST(PutLadder, Examples) {
    expect_levels(put_ladder({0.1, 0.5, 1, 100.0, 0.0}), {90.0}, 10.0);
    expect_levels(put_ladder({0.2, 0.5, 4, 100.0, 0.0}), {95.0, 90.0, 85.0, 80.0}, 5.0);
}

TEST(PutLadder, RejectsDegenerateAndOffsetLadders) {
    try {
        put_ladder({1.0, 0.5, 2, 100.0, 0.0});
        FAIL() << "alpha = 1 accepted";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("degenerate"), std::string::npos);
    }
    try {
        put_ladder({0.1, 0.5, 2, 100.0, 5.0});
        FAIL() << "trigger_offset != 0 accepted";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("trigger_offset"), std::string::npos);
    }
    // An offset is still a valid strategy value, just not a priceable one.
    EXPECT_NO_THROW((PutStrategy{0.1, 0.5, 2, 100.0, 5.0}.validate()));
    EXPECT_THROW((PutStrategy{0.1, 0.5, 2, 100.0, 100.0}.validate()), std::invalid_argument);
}

TEST(BandIndex, CallConventions) {
    const auto l = call_ladder({0.2, 1.0, 4, 100.0});
    EXPECT_EQ(band_index(95.0, l, 100.0).kind, Band::Kind::out_of_money);
    EXPECT_EQ(band_index(100.0, l, 100.0), (Band{Band::Kind::vanilla, 0}));
    EXPECT_EQ(band_index(104.9, l, 100.0), (Band{Band::Kind::vanilla, 0}));
    EXPECT_EQ(band_index(105.0, l, 100.0), (Band{Band::Kind::intermediate, 1}));
    EXPECT_EQ(band_index(107.0, l, 100.0), (Band{Band::Kind::intermediate, 1}));
    EXPECT_EQ(band_index(119.99, l, 100.0), (Band{Band::Kind::intermediate, 3}));
    EXPECT_EQ(band_index(120.0, l, 100.0), (Band{Band::Kind::saturated, 4}));
    EXPECT_EQ(band_index(125.0, l, 100.0), (Band{Band::Kind::saturated, 4}));
}

TEST(BandIndex, PutConventions) {
    const auto l = put_ladder({0.2, 1.0, 4, 100.0, 0.0});
    EXPECT_EQ(band_index(100.5, l, 100.0).kind, Band::Kind::out_of_money);
    EXPECT_EQ(band_index(100.0, l, 100.0), (Band{Band::Kind::vanilla, 0}));
    EXPECT_EQ(band_index(95.01, l, 100.0), (Band{Band::Kind::vanilla, 0}));
    EXPECT_EQ(band_index(95.0, l, 100.0), (Band{Band::Kind::intermediate, 1}));
    EXPECT_EQ(band_index(80.01, l, 100.0), (Band{Band::Kind::intermediate, 3}));
    EXPECT_EQ(band_index(80.0, l, 100.0), (Band{Band::Kind::saturated, 4}));
    EXPECT_EQ(band_index(1.0, l, 100.0), (Band{Band::Kind::saturated, 4}));
}

TEST(BandIndex, SingleTradeHasNoIntermediateBand) {
    const auto l = call_ladder({0.1, 1.0, 1, 100.0});
    EXPECT_EQ(band_index(105.0, l, 100.0).kind, Band::Kind::vanilla);
    EXPECT_EQ(band_index(110.0, l, 100.0).kind, Band::Kind::saturated);
}

TEST(CallPayoff, Examples) {
    EXPECT_EQ(call_payoff(90.0, {0.1, 0.7, 3, 100.0}), 0.0);
    EXPECT_EQ(call_payoff(110.0, {0.3, 0.0, 5, 100.0}), 10.0);
    EXPECT_NEAR(call_payoff(120.0, {0.1, 1.0, 1, 100.0}), 120.0 - 120.0 * 100.0 / 110.0, 1e-12);
    EXPECT_NEAR(call_payoff(120.0, {0.1, 1.0, 1, 100.0}), 10.909090909090909, 1e-12);
}

TEST(PutPayoff, Examples) {
    EXPECT_EQ(put_payoff(110.0, {0.1, 0.7, 3, 100.0, 0.0}), 0.0);
    EXPECT_EQ(put_payoff(90.0, {0.3, 0.0, 5, 100.0, 0.0}), 10.0);
    EXPECT_NEAR(put_payoff(80.0, {0.1, 1.0, 1, 100.0, 0.0}), -80.0 + 80.0 * 100.0 / 90.0, 1e-12);
    EXPECT_NEAR(put_payoff(80.0, {0.1, 1.0, 1, 100.0, 0.0}), 8.888888888888889, 1e-12);
}

TEST(Payoff, MatchesBranchFormulas) {
    lt::Draw draw(11);
    for (int i = 0; i < 300; ++i) {
        const double alpha = draw.uniform(0.01, 0.95);
        const double beta = draw.uniform(0.0, 1.0);
        const int n = draw.integer(1, 40);
        const double k = draw.uniform(10.0, 300.0);
        const CallPayoff call({alpha, beta, n, k});
        const PutPayoff put({alpha, beta, n, k, 0.0});
        for (int j = 0; j < 50; ++j) {
            const double s = draw.uniform(0.01, 2.5 * k);
            EXPECT_NEAR(call(s), lt::call_value_branches(s, alpha, beta, n, k), 1e-10 * k);
            EXPECT_NEAR(put(s), lt::put_value_branches(s, alpha, beta, n, k), 1e-10 * k);
        }
    }
}

TEST(Payoff, VanillaCollapseAtZeroBeta) {
    lt::Draw draw(5);
    for (int i = 0; i < 200; ++i) {
        const double k = draw.uniform(10.0, 200.0);
        const CallPayoff call({draw.uniform(0.01, 1.0), 0.0, draw.integer(1, 20), k});
        const PutPayoff put({draw.uniform(0.01, 0.99), 0.0, draw.integer(1, 20), k, 0.0});
        for (int j = 0; j < 50; ++j) {
            const double s = draw.uniform(0.01, 3.0 * k);
            EXPECT_EQ(call(s), std::max(s - k, 0.0));
            EXPECT_EQ(put(s), std::max(k - s, 0.0));
        }
    }
}

TEST(Payoff, DominanceAndMonotoneInBeta) {
    lt::Draw draw(9);
    for (int i = 0; i < 200; ++i) {
        const double alpha = draw.uniform(0.01, 0.95);
        const int n = draw.integer(1, 30);
        const double k = draw.uniform(10.0, 200.0);
        const double b1 = draw.uniform(0.0, 1.0);
        const double b2 = draw.uniform(b1, 1.0);
        const CallPayoff c1({alpha, b1, n, k}), c2({alpha, b2, n, k});
        const PutPayoff p1({alpha, b1, n, k, 0.0}), p2({alpha, b2, n, k, 0.0});
        for (int j = 0; j < 100; ++j) {
            const double s = draw.uniform(0.01, 3.0 * k);
            EXPECT_GE(c1(s), 0.0);
            EXPECT_LE(c1(s), std::max(s - k, 0.0));
            EXPECT_GE(p1(s), 0.0);
            EXPECT_LE(p1(s), std::max(k - s, 0.0));
            EXPECT_LE(c2(s), c1(s) + 1e-12 * k);
            EXPECT_LE(p2(s), p1(s) + 1e-12 * k);
        }
    }
}

TEST(Payoff, ContinuousAtLevelsAndStrike) {
    // One-sided limits from the two pieces meeting at each knot, by linear
    // extrapolation from points eps and 2 eps away.
    lt::Draw draw(13);
    for (int i = 0; i < 200; ++i) {
        const double alpha = draw.uniform(0.01, 0.95);
        const double beta = draw.uniform(0.0, 1.0);
        const int n = draw.integer(1, 25);
        const double k = draw.uniform(10.0, 200.0);
        const CallPayoff call({alpha, beta, n, k});
        const PutPayoff put({alpha, beta, n, k, 0.0});
        auto jump = [](const auto& f, double x) {
            const double eps = 1e-7 * x;
            const double left = 2.0 * f(x - eps) - f(x - 2.0 * eps);
            const double right = 2.0 * f(x + eps) - f(x + 2.0 * eps);
            return std::abs(left - right);
        };
        EXPECT_LE(jump(call, k), 1e-9);
        EXPECT_LE(jump(put, k), 1e-9);
        for (double level : call.ladder().levels)
            EXPECT_LE(jump(call, level), 1e-9);
        for (double level : put.ladder().levels)
            EXPECT_LE(jump(put, level), 1e-9);
    }
}

TEST(WriterLoss, Examples) {
    EXPECT_EQ(writer_loss(110.0, {0.1, 0.6, 3, 100.0, 0.0}, 1000.0), 0.0);
    EXPECT_NEAR(writer_loss(90.0, {0.1, 0.0, 3, 100.0, 0.0}, 1000.0), 100.0, 1e-12);
    EXPECT_NEAR(writer_loss(80.0, {0.1, 1.0, 1, 100.0, 0.0}, 1000.0), 88.88888888888889, 1e-10);
    EXPECT_THROW(writer_loss(80.0, {0.1, 1.0, 1, 100.0, 0.0}, 0.0), std::invalid_argument);
}

TEST(WriterLoss, EqualsSharesTimesIntrinsicValue) {
    lt::Draw draw(17);
    for (int i = 0; i < 300; ++i) {
        const PutStrategy s{draw.uniform(0.01, 0.95), draw.uniform(0.0, 1.0), draw.integer(1, 30),
                            draw.uniform(10.0, 200.0), 0.0};
        const double capital = draw.uniform(100.0, 1e6);
        for (int j = 0; j < 20; ++j) {
            const double price = draw.uniform(0.01, 1.5 * s.strike);
            const double expected = capital / s.strike * put_payoff(price, s);
            EXPECT_NEAR(writer_loss(price, s, capital), expected, 1e-12 * capital);
        }
    }
}
