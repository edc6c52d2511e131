"""Regenerate the frozen expected values used across the test suite.

Evaluates the raw closed-form expressions with mpmath at 50 digits,
independently of the package code, so frozen constants can be audited or
refreshed:

    python3 tests/_oracles.py
"""

import mpmath as mp

mp.mp.dps = 50


def nu_mp(q, beta, x):
    return (1 - q * mp.e ** (-beta * x)) / (1 + q * mp.e ** (-beta * x))


def g_mp(q, beta, x):
    return (nu_mp(q, beta, x + 1) - nu_mp(q, beta, x - 1)) / 4


def psi_mp(q, beta, x):
    return (g_mp(q, beta, x) + g_mp(1 / q, beta, x)) / 2


def moment_bound_mp(q, beta, k):
    return (1 - mp.e**-beta) / (1 + mp.e**-beta) / (k + 1) + (q + 1 / q) * mp.e**beta * mp.factorial(k) / beta**k


def main():
    rows = [
        ("g(q=2, b=1, ln 2)", g_mp(2, 1, mp.log(2))),
        ("g max closed form (b=1)", (1 - mp.e**-1) / (2 * (1 + mp.e**-1))),
        ("psi(q=2, b=1, 0)", psi_mp(2, 1, 0)),
        ("psi(q=2, b=1, 1.3)", psi_mp(2, 1, mp.mpf("1.3"))),
        ("moment bound k=1 (q=1, b=1)", moment_bound_mp(1, 1, 1)),
        ("moment bound k=3 (q=1, b=1)", moment_bound_mp(1, 1, 3)),
        ("int |h| psi (q=1, b=1)", 2 * mp.quad(lambda h: h * psi_mp(1, 1, h), [0, 1, 5, 40, 120])),
        ("int h^2 psi (q=1, b=1)", 2 * mp.quad(lambda h: h**2 * psi_mp(1, 1, h), [0, 1, 5, 40, 120])),
        ("tail mass |h| >= 3 (q=1, b=1)", 2 * mp.quad(lambda h: psi_mp(1, 1, h), [3, 10, 60, 200])),
        ("tail bound n=9 (q=1, b=1)", 2 * mp.e**-2),
        ("tail bound n=9 (q=2, b=1)", mp.mpf("2.5") * mp.e**-2),
        ("jackson spot 0.25 + 4/e^3", mp.mpf("0.25") + 4 / mp.e**3),
        ("3 x jackson spot", 3 * (mp.mpf("0.25") + 4 / mp.e**3)),
        ("truncation radius eps=1e-12 (q=1, b=1)", 1 + mp.log(2 * mp.mpf(10) ** 12)),
        ("envelope at x=3 (q=1, b=1)", mp.e**-2),
        ("omega(sin, 0.1) = 2 sin(0.05)", 2 * mp.sin(mp.mpf("0.05"))),
        ("sqrt(2/e)", mp.sqrt(2 / mp.e)),
    ]
    for label, value in rows:
        print(f"{label:42s} {mp.nstr(value, 20)}")


if __name__ == "__main__":
    main()
