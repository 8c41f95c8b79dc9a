"""Independent high-precision reference values frozen into the C++ tests.

Run with: python3 tests/oracles/compute_oracles.py
"""
from mpmath import mp, mpf, erfc, exp, log, sqrt, quad, e

mp.dps = 40


def phi(x):
    return erfc(-x / sqrt(2)) / 2


def black_scholes(s0, k, r, vol, t):
    d1 = (log(s0 / k) + (r + vol**2 / 2) * t) / (vol * sqrt(t))
    d2 = d1 - vol * sqrt(t)
    call = s0 * phi(d1) - k * exp(-r * t) * phi(d2)
    put = k * exp(-r * t) * phi(-d2) - s0 * phi(-d1)
    return call, put


print("Phi(1)            ", phi(mpf(1)))
print("Phi(-5)           ", phi(mpf(-5)))
call, put = black_scholes(mpf(100), mpf(100), mpf("0.05"), mpf("0.2"), mpf(1))
print("BS call           ", call)
print("BS put            ", put)
print("int_0^1 e^-x      ", 1 - exp(-1))

# Nested theta integral for theta(s) = s, a = 1, T = 1.
nested = quad(lambda t: exp(-t) * quad(lambda s: s * exp(s), [0, t]), [0, 1])
print("nested theta=s    ", nested)

# Lognormal band moments, mu = 0, sigma^2 = 0.04, band [1, 2].
sig = sqrt(mpf("0.04"))
dens = lambda x: exp(-(log(x)) ** 2 / (2 * sig**2)) / (x * sig * sqrt(2 * mp.pi))
print("band mass [1,2]   ", quad(dens, [1, 2]))
print("band pexp [1,2]   ", quad(lambda x: x * dens(x), [1, 2]))


def call_payoff(st, alpha, beta, n, k):
    d = alpha * k / n
    levels = [k + (i + 1) * d for i in range(n)]
    if st < k:
        return mpf(0)
    m = sum(1 for lv in levels if lv <= st)
    return (st - k) - beta * k / n * sum(st / levels[i] - 1 for i in range(m))


def put_payoff(st, alpha, beta, n, k):
    d = alpha * k / n
    levels = [k - (i + 1) * d for i in range(n)]
    if st > k:
        return mpf(0)
    m = sum(1 for lv in levels if lv >= st)
    return (k - st) - beta * k / n * sum(1 - st / levels[i] for i in range(m))


def strategy_price(payoff, alpha, beta, n, k, s0, r, vol, t):
    mu = log(s0) + (r - vol**2 / 2) * t
    sd = vol * sqrt(t)
    f = lambda y: payoff(exp(y), alpha, beta, n, k) * exp(-(y - mu) ** 2 / (2 * sd**2)) / (sd * sqrt(2 * mp.pi))
    d = alpha * k / n
    if payoff is call_payoff:
        pts = [log(k + i * d) for i in range(n + 1)]
        nodes = [mu - 12 * sd] + pts + [mu + 12 * sd]
    else:
        pts = sorted(log(k - i * d) for i in range(n + 1))
        nodes = [mu - 12 * sd] + pts + [mu + 12 * sd]
    return exp(-r * t) * quad(f, nodes)


print("call a.1 b1 N4    ", strategy_price(call_payoff, mpf("0.1"), mpf(1), 4, mpf(100), mpf(100), mpf("0.05"), mpf("0.2"), mpf(1)))
print("put  a.1 b1 N4    ", strategy_price(put_payoff, mpf("0.1"), mpf(1), 4, mpf(100), mpf(100), mpf("0.05"), mpf("0.2"), mpf(1)))
print("call a.2 b.5 N3   ", strategy_price(call_payoff, mpf("0.2"), mpf("0.5"), 3, mpf(100), mpf(100), mpf("0.05"), mpf("0.2"), mpf(1)))
print("put  a.2 b.5 N3   ", strategy_price(put_payoff, mpf("0.2"), mpf("0.5"), 3, mpf(100), mpf(100), mpf("0.05"), mpf("0.2"), mpf(1)))
