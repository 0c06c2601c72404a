# Dense univariate polynomials as ascending coefficient lists over int or Fraction.
# The zero polynomial is [].

from __future__ import annotations

from fractions import Fraction


def trim(p):
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    return list(p[:n])


def degree(p) -> int:
    p = trim(p)
    return len(p) - 1 if p else -1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def neg(a):
    return [-c for c in a]


def sub(a, b):
    return add(a, neg(b))


def scale(a, c):
    return trim([c * x for x in a])


def mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def divmod_poly(a, b):
    """Quotient and remainder; exact over Fraction, and over int when b is monic."""
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    lead = b[-1]
    monic = lead == 1 or lead == -1
    rem = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for shift in range(len(a) - len(b), -1, -1):
        c = rem[shift + len(b) - 1]
        if not c:
            continue
        c = c * lead if monic else Fraction(c) / lead
        q[shift] = c
        for j, y in enumerate(b):
            rem[shift + j] -= c * y
    return trim(q), trim(rem)


def exact_div(a, b):
    q, r = divmod_poly(a, b)
    if r:
        raise ArithmeticError("polynomial division is not exact")
    return q


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def resultant(f, g):
    """Resultant of f and g over Q by the Euclidean algorithm."""
    f, g = trim(f), trim(g)
    if not f or not g:
        return Fraction(0)
    res = Fraction(1)
    while True:
        n, k = len(f) - 1, len(g) - 1
        if k == 0:
            return res * Fraction(g[0]) ** n
        _, r = divmod_poly(f, g)
        if not r:
            return Fraction(0)
        # res(f, g) = (-1)^(nk) lc(g)^(n - deg r) res(g, r)
        if (n * k) % 2:
            res = -res
        res *= Fraction(g[-1]) ** (n - (len(r) - 1))
        f, g = g, r


def ext_gcd(a, b):
    """Return (g, s, t) with s*a + t*b = g, g monic, over Q."""
    r0, r1 = [Fraction(c) for c in trim(a)], [Fraction(c) for c in trim(b)]
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return [], s0, t0
    lead = r0[-1]
    return scale(r0, 1 / lead), scale(s0, 1 / lead), scale(t0, 1 / lead)
