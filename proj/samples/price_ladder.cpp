// Prices a ladder call under the three rate models and checks one of them
// against terminal-draw Monte Carlo.

#include <cstdio>

#include "ladder/ladder.hpp"

int main() {
    using namespace ladder;
    const MarketParams market{100.0, 0.2, 1.0};
    const CallStrategy strat{0.1, 1.0, 4, 100.0};

    const RateModel models[] = {FixedRate{0.05}, VasicekParams{0.5, 0.02, 0.01, 0.04},
                                HullWhiteParams{0.5, affine_theta(0.02, 0.005), 0.01, 0.04, {}}};
    const char* names[] = {"fixed", "vasicek", "hull_white"};

    for (int i = 0; i < 3; ++i) {
        const TerminalLaw law = terminal_law(market, models[i]);
        const double price = call_price(strat, law).price;
        const double vanilla = vanilla_price(OptionKind::call, strat.strike, law);
        std::printf("%-11s P(0,T)=%.6f  ladder call=%.6f  vanilla=%.6f  discount=%.2f%%\n", names[i],
                    law.discount, price, vanilla, 100.0 * (1.0 - price / vanilla));
    }

    McConfig cfg;
    cfg.n_paths = 1'000'000;
    cfg.seed = 7;
    const TerminalLaw law = terminal_law(market, models[0]);
    const McEstimate est = sample_terminal(law, CallPayoff(strat), cfg);
    std::printf("monte carlo %.6f +- %.6f\n", est.mean, est.std_error);
}
