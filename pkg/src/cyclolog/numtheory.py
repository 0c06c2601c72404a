"""Elementary arithmetic functions, p-adic valuations and cyclotomic polynomials.

Also holds the brute-force checkers for the factorial and binomial
congruences modulo p (the Wilson-type factorial congruence, the four
binomial valuation identities and their corollaries) and the
classification of Phi_m(-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from . import _poly
from .errors import InternalConsistencyError, UsageError

INFINITY = math.inf


# -- factorization ---------------------------------------------------------

@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division as ((p, e), ...) ascending."""
    if n < 1:
        raise UsageError(f"factorize needs n >= 1, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def moebius(n: int) -> int:
    if n < 1:
        raise UsageError(f"moebius needs n >= 1, got {n}")
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(m: int) -> int:
    if m < 1:
        raise UsageError(f"euler_phi needs m >= 1, got {m}")
    out = m
    for p, _ in factorize(m):
        out = out // p * (p - 1)
    return out


def omega1(m: int) -> int:
    """Largest k < m/2 coprime to m."""
    if m < 3:
        raise UsageError(f"omega1 needs m >= 3, got {m}")
    if m % 2:
        return (m - 1) // 2
    if m % 4 == 2:
        return m // 2 - 2
    return m // 2 - 1


# -- von Mangoldt ----------------------------------------------------------

@dataclass(frozen=True)
class MangoldtValue:
    """Symbolic value of the von Mangoldt function: 0 or log(prime)."""

    kind: Literal["zero", "log-of-prime"]
    prime: int | None = None

    def __post_init__(self):
        if (self.kind == "log-of-prime") != (self.prime is not None):
            raise UsageError("prime is present exactly for kind 'log-of-prime'")

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def exp(self) -> int:
        """exp of the value, an exact integer (1 or p)."""
        return 1 if self.prime is None else self.prime


ZERO = MangoldtValue("zero")


def mangoldt(n: int) -> MangoldtValue:
    if n < 1:
        raise UsageError(f"mangoldt needs n >= 1, got {n}")
    f = factorize(n)
    if len(f) == 1:
        return MangoldtValue("log-of-prime", f[0][0])
    return ZERO


def lambda0(m: int) -> MangoldtValue:
    """0 for odd m, Lambda(m/2) for even m."""
    if m < 1:
        raise UsageError(f"lambda0 needs m >= 1, got {m}")
    return ZERO if m % 2 else mangoldt(m // 2)


def ramified_prime(m: int) -> int | None:
    """The prime p when m = 2 p^a with a >= 1, else None."""
    lam = lambda0(m)
    return lam.prime


# -- lcm and valuations ----------------------------------------------------

def lcm_upto(bound: int) -> int:
    """lcm(1, ..., bound); 1 for bound <= 1."""
    if bound < 0:
        raise UsageError(f"lcm_upto needs bound >= 0, got {bound}")
    return math.lcm(*range(1, bound + 1)) if bound > 1 else 1


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(q: int | Fraction, p: int) -> float | int:
    """p-adic valuation of a rational; +inf for zero."""
    if not is_prime(p):
        raise UsageError(f"vp needs a prime, got {p}")
    q = Fraction(q)
    if q == 0:
        return INFINITY
    return _vp_int(q.numerator, p) - _vp_int(q.denominator, p)


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    return math.factorial(n)


def binom(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


# -- congruence checkers ---------------------------------------------------

def _check_prime_ge3(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise UsageError(f"need an odd prime, got {p}")


def lemma7_value(p: int, d: int, r: int) -> Fraction:
    """(dp + r)! / ((-p)^d d! r!) - 1."""
    return Fraction(factorial(d * p + r), (-p) ** d * factorial(d) * factorial(r)) - 1


def lemma7_check(p: int, d: int, r: int) -> bool:
    """v_p((dp + r)!/((-p)^d d! r!) - 1) >= 1."""
    _check_prime_ge3(p)
    if d < 0 or not 0 <= r < p:
        raise UsageError(f"need d >= 0 and 0 <= r < p, got d={d}, r={r}")
    return vp(lemma7_value(p, d, r), p) >= 1


@dataclass(frozen=True)
class Lemma8Result:
    """Outcome of the four binomial identities for one tuple.

    ``zd``/``ze`` apply when r1 <= r, ``zf``/``zg`` when r < r1; an
    inapplicable identity is reported as True with its flag False.
    """

    zd: bool
    ze: bool
    zf: bool
    zg: bool
    zd_applicable: bool
    ze_applicable: bool
    zf_applicable: bool
    zg_applicable: bool

    @property
    def ok(self) -> bool:
        return self.zd and self.ze and self.zf and self.zg

    def failures(self) -> list[str]:
        return [name for name in ("zd", "ze", "zf", "zg") if not getattr(self, name)]


def lemma8_check(p: int, d: int, d1: int, r: int, r1: int) -> Lemma8Result:
    _check_prime_ge3(p)
    if d < 0 or d1 < 0 or not 0 <= r < p or not 0 <= r1 < p:
        raise UsageError(f"bad tuple p={p}, d={d}, d1={d1}, r={r}, r1={r1}")
    if d1 * p + r1 > d * p + r:
        raise UsageError("need d1*p + r1 <= d*p + r")
    big = binom(d * p + r, d1 * p + r1)
    small = binom(d, d1)
    if r1 <= r:
        zd = vp(big, p) == vp(small, p)
        ze = vp(Fraction(big, small * binom(r, r1)) - 1, p) >= 1
        return Lemma8Result(zd, ze, True, True, True, True, False, False)
    # r < r1 forces d1 < d
    zf = vp(big, p) == 1 + vp((d - d1) * small, p)
    lhs = Fraction((-1) ** (r1 - r - 1) * big * binom(r1, r) * (r1 - r), p * small * (d - d1))
    zg = vp(lhs - 1, p) >= 1
    return Lemma8Result(True, True, zf, zg, False, False, True, True)


def corollary1_check(p: int, d: int, r: int, d1: int, d2: int, r1: int, r2: int) -> tuple[bool, bool]:
    """p^-d (dp+r)! == (-1)^d d! r!  and  C((d1+d2)p + r1+r2, d1 p + r1) == C(d1+d2, d1) C(r1+r2, r1), mod p."""
    if max(r, r1, r2) >= p or min(d, r, d1, d2, r1, r2) < 0:
        raise UsageError("product congruence check needs nonnegative inputs with r, r1, r2 < p")
    first = Fraction(factorial(d * p + r), p**d) - (-1) ** d * factorial(d) * factorial(r)
    second = binom((d1 + d2) * p + r1 + r2, d1 * p + r1) - binom(d1 + d2, d1) * binom(r1 + r2, r1)
    return vp(first, p) >= 1, vp(second, p) >= 1


def corollary2_check(p: int, d: int, d1: int, r1: int) -> bool:
    """C(dp, d1 p + r1) / (d C(d-1, d1) C(p, r1)) == 1 mod p, for 1 <= r1 < p, d1 < d."""
    _check_prime_ge3(p)
    if d < 1 or not 0 <= d1 < d or not 1 <= r1 < p:
        raise UsageError("ratio congruence check needs d >= 1, 0 <= d1 < d, 1 <= r1 < p")
    ratio = Fraction(binom(d * p, d1 * p + r1), d * binom(d - 1, d1) * binom(p, r1))
    return vp(ratio - 1, p) >= 1


def corollary3_check(p: int, d: int, d1: int, r1: int) -> bool:
    """C(dp, d1 p + r1) == d C(d-1, d1) C(p, r1) mod p^2."""
    _check_prime_ge3(p)
    if d < 1 or not 0 <= d1 < d or not 1 <= r1 < p:
        raise UsageError("mod p^2 congruence check needs d >= 1, 0 <= d1 < d, 1 <= r1 < p")
    diff = binom(d * p, d1 * p + r1) - d * binom(d - 1, d1) * binom(p, r1)
    return vp(diff, p) >= 2


# -- cyclotomic polynomials ------------------------------------------------

@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients in ascending degree."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(_poly.trim(list(self.coefficients))))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        return _poly.evaluate(self.coefficients, x)

    def __len__(self) -> int:
        return len(self.coefficients)


@lru_cache(maxsize=512)
def cyclotomic_poly(m: int) -> IntPoly:
    """Phi_m as prod over d | m of (z^(m/d) - 1)^mu(d), by exact division."""
    if m < 1:
        raise UsageError(f"cyclotomic_poly needs m >= 1, got {m}")
    num, den = [1], [1]
    for d in divisors(m):
        mu = moebius(d)
        if mu == 0:
            continue
        factor = [-1] + [0] * (m // d - 1) + [1]
        if mu == 1:
            num = _poly.mul(num, factor)
        else:
            den = _poly.mul(den, factor)
    phi = IntPoly(tuple(_poly.exact_div(num, den)))
    if phi.degree != euler_phi(m):
        raise InternalConsistencyError(f"deg Phi_{m} = {phi.degree} != phi({m})")
    return phi


@dataclass(frozen=True)
class PhiMinusOne:
    """Phi_m(-1): 'unit' (value 1, 1 + zeta_m a unit) or 'ramified' (value p)."""

    kind: Literal["unit", "ramified"]
    value: int

    @property
    def prime(self) -> int | None:
        return self.value if self.kind == "ramified" else None


def phi_at_minus_one(m: int) -> PhiMinusOne:
    """Classify Phi_m(-1) by the exp(Lambda(m/2)) rule, cross-checked by evaluation."""
    if m < 3:
        raise UsageError(f"phi_at_minus_one needs m >= 3, got {m}")
    p = ramified_prime(m)
    predicted = PhiMinusOne("unit", 1) if p is None else PhiMinusOne("ramified", p)
    direct = cyclotomic_poly(m)(-1)
    if direct != predicted.value:
        raise InternalConsistencyError(f"Phi_{m}(-1) = {direct}, rule predicts {predicted.value}")
    return predicted
