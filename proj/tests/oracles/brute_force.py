"""Independent brute-force reference values frozen into the unit tests.

Run: python3 tests/oracles/brute_force.py
Everything here is plain enumeration or direct summation, sharing no code with
the C++ library.
"""
import cmath
import itertools
import json
import math
from collections import Counter

import mpmath


def moments(t):
    return (sum(t), sum(x * x for x in t), sum(x ** 3 for x in t))


def rep_counter(s, lo, hi):
    # r_s over all ordered tuples, via multisets weighted by multinomials
    r = Counter()
    for ms in itertools.combinations_with_replacement(range(lo, hi + 1), s):
        w = math.factorial(s)
        for v in Counter(ms).values():
            w //= math.factorial(v)
        r[moments(ms)] += w
    return r


def B(s, X, h, lo=1):
    r = rep_counter(s, lo, X + lo - 1)
    return sum(c * r.get((m[0] - h[0], m[1] - h[1], m[2] - h[2]), 0) for m, c in r.items())


def B_naive(s, X, h):
    n = 0
    for x in itertools.product(range(1, X + 1), repeat=s):
        mx = moments(x)
        for y in itertools.product(range(1, X + 1), repeat=s):
            my = moments(y)
            if tuple(a - b for a, b in zip(mx, my)) == tuple(h):
                n += 1
    return n


def shifted(s, X, h, z):
    h1, h2, h3 = h
    return B(s, X, (h1, h2 + 2 * h1 * z, h3 + 3 * h2 * z + 3 * h1 * z * z), lo=z + 1)


def T0(X):
    n = 0
    for x in itertools.product(range(1, X + 1), repeat=3):
        for y in itertools.product(range(1, X + 1), repeat=3):
            if sum(x) == sum(y) and sum(a * a for a in x) == sum(b * b for b in y):
                n += 1
    return n


def mixed_g6(X, h):
    h1, h2, _ = h
    n = 0
    for x in itertools.product(range(1, X + 1), repeat=3):
        for y in itertools.product(range(1, X + 1), repeat=3):
            d1 = sum(x) - sum(y)
            d2 = sum(a * a for a in x) - sum(b * b for b in y)
            if 3 * h1 * d2 + 3 * h2 * d1 == 0 and 2 * h1 * d1 == 0:
                n += 1
    return n


def theta1(X, h):
    h1, h2, _ = h
    n = 0
    for x in range(1, 2 * X + 1):
        for y in range(1, 2 * X + 1):
            for u in itertools.product(range(1, X + 1), repeat=3):
                for v in itertools.product(range(1, X + 1), repeat=3):
                    d1 = sum(u) - sum(v)
                    d2 = sum(a * a for a in u) - sum(b * b for b in v)
                    if (x - y == 0 and x * x - y * y + 2 * h1 * d1 == 0
                            and x ** 3 - y ** 3 + 3 * h2 * d1 + 3 * h1 * d2 == 0):
                        n += 1
    return n


def S(q, a):
    return sum(cmath.exp(2j * math.pi * ((a[0] * r + a[1] * r * r + a[2] * r ** 3) % q) / q)
               for r in range(1, q + 1))


def series_term(q, s, h):
    tot = 0
    for a in itertools.product(range(1, q + 1), repeat=3):
        if math.gcd(q, *a) != 1:
            continue
        tot += abs(S(q, a) / q) ** (2 * s) * cmath.exp(-2j * math.pi * ((a[0] * h[0] + a[1] * h[1] + a[2] * h[2]) % q) / q)
    return tot


def N_mod(q, s, h):
    # residue distribution of s-tuple moments mod q, then pair counts
    one = Counter(((x % q), (x * x % q), (x ** 3 % q)) for x in range(q))
    dist = Counter({(0, 0, 0): 1})
    for _ in range(s):
        nxt = Counter()
        for m, c in dist.items():
            for e, d in one.items():
                nxt[((m[0] + e[0]) % q, (m[1] + e[1]) % q, (m[2] + e[2]) % q)] += c * d
        dist = nxt
    return sum(c * dist.get(((m[0] - h[0]) % q, (m[1] - h[1]) % q, (m[2] - h[2]) % q), 0)
               for m, c in dist.items())


def I(beta):
    mpmath.mp.dps = 30
    f = lambda t: mpmath.expj(2 * mpmath.pi * (beta[0] * t + beta[1] * t ** 2 + beta[2] * t ** 3))
    pts = mpmath.linspace(0, 1, 64)
    v = mpmath.quad(f, pts)
    return complex(v)


out = {
    "B_1_2_137": B_naive(1, 2, (1, 3, 7)),
    "B_2_2_0": B_naive(2, 2, (0, 0, 0)),
    "B_2_3_0": B_naive(2, 3, (0, 0, 0)),
    "B_1_3_0": B_naive(1, 3, (0, 0, 0)),
    "B_6_3": {str(h): B(6, 3, h) for h in [(0, 0, 0), (1, 1, 1), (2, 0, 2), (1, 3, 7)]},
    "B_6_8_111": B(6, 8, (1, 1, 1)),
    "B_6_8_000": B(6, 8, (0, 0, 0)),
    "B_6_16_111": B(6, 16, (1, 1, 1)),
    "shift_3_4_202_3": [B(3, 4, (2, 0, 2)), shifted(3, 4, (2, 0, 2), 3)],
    "T0": {X: T0(X) for X in range(1, 6)},
    "mixed_g6_2_100": mixed_g6(2, (1, 0, 0)),
    "mixed_g6_3_010": mixed_g6(3, (0, 1, 0)),
    "mixed_g6_3_120": mixed_g6(3, (1, 2, 0)),
    "theta1_1_100": theta1(1, (1, 0, 0)),
    "theta1_2_100": theta1(2, (1, 0, 0)),
    "theta1_2_210": theta1(2, (2, 1, 0)),
    "S": {f"{q}:{a}": [S(q, a).real, S(q, a).imag]
          for q, a in [(5, (1, 2, 3)), (7, (0, 0, 1)), (9, (1, 0, 3)), (12, (1, 5, 7))]},
    "series_term": {f"{q}:{h}": series_term(q, 6, h).real
                    for q in (2, 3, 4, 5) for h in [(0, 0, 0), (1, 1, 1)]},
    "N_mod": {f"{q}:{h}": N_mod(q, 6, h) for q in (2, 3, 4, 5, 8, 9) for h in [(0, 0, 0), (1, 1, 1), (0, 0, 1)]},
    "I": {str(b): [I(b).real, I(b).imag] for b in [(1.0, 2.0, 3.0), (0.0, 5.0, 0.0), (-2.5, 0.0, 7.0), (0.3, -0.7, 11.0)]},
}
print(json.dumps(out, indent=1))
