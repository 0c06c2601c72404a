"""Verification suites driven by the ``verify`` subcommand.

Each suite yields :class:`Failure` records; an empty list means the suite
passed.  Suites are split into independent cases so the CLI can farm them
out to worker processes and still report in a fixed order.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import mpmath

from . import approximants as ap
from . import hiprec
from .divisors import integrality_check
from .errors import InternalConsistencyError
from .exponents import growth_measure, positivity_scan, v_star
from .numtheory import (
    corollary1_check,
    corollary2_check,
    corollary3_check,
    is_prime,
    lemma7_check,
    lemma8_check,
    phi_at_minus_one,
)
from .spectra import l_delta_closed, l_delta_via_roots, monotonicity_scan, ordering_check

SUITES = ("padic", "identities", "integrality", "spectra", "growth")
GROWTH_TOLERANCE = 0.05


@dataclass(frozen=True)
class Failure:
    anchor: str
    inputs: dict
    expected: str
    got: str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Options:
    pmax: int = 13
    nus: tuple[int, ...] = (1, 2, 3)
    deltas: tuple[int, ...] = (5, 7)
    ms: tuple[int, ...] = (3, 4, 5, 8, 9, 10, 12)
    precision: int = hiprec.DEFAULT_PRECISION
    growth_nu: tuple[int, int] = (80, 160)
    growth_pairs: tuple[tuple[int, int], ...] = ((5, 3), (7, 4))


# -- p-adic -----------------------------------------------------------------

def _padic_prime(p: int) -> list[Failure]:
    out = []
    for d in range(7):
        for r in range(p):
            if not lemma7_check(p, d, r):
                out.append(Failure("factorial congruence", dict(p=p, d=d, r=r), "v_p >= 1", "v_p < 1"))
    for d in range(6):
        for d1 in range(6):
            for r in range(p):
                for r1 in range(p):
                    if d1 * p + r1 > d * p + r:
                        continue
                    res = lemma8_check(p, d, d1, r, r1)
                    for name in res.failures():
                        out.append(
                            Failure(f"binomial identity {name}", dict(p=p, d=d, d1=d1, r=r, r1=r1), "holds", "fails")
                        )
    for d in range(6):
        for r in range(p):
            for d1 in range(6):
                for d2 in range(6 - d1):
                    for r1 in range(p):
                        for r2 in range(p - r1):
                            first, second = corollary1_check(p, d, r, d1, d2, r1, r2)
                            if not first:
                                out.append(Failure("factorial congruence mod p", dict(p=p, d=d, r=r), "holds", "fails"))
                            if not second:
                                args = dict(p=p, d1=d1, d2=d2, r1=r1, r2=r2)
                                out.append(Failure("binomial product congruence mod p", args, "holds", "fails"))
    for d in range(1, 6):
        for d1 in range(d):
            for r1 in range(1, p):
                args = dict(p=p, d=d, d1=d1, r1=r1)
                if not corollary2_check(p, d, d1, r1):
                    out.append(Failure("binomial ratio congruence mod p", args, "ratio == 1 mod p", "fails"))
                if not corollary3_check(p, d, d1, r1):
                    out.append(Failure("binomial congruence mod p^2", args, "holds", "fails"))
    return out


def _phi_minus_one_cases() -> list[Failure]:
    out = []
    for m in range(3, 201):
        try:
            phi_at_minus_one(m)
        except InternalConsistencyError as exc:
            out.append(Failure("Phi_m(-1) classification", dict(m=m), "rule matches evaluation", str(exc)))
    return out


# -- exact identities -------------------------------------------------------

_SAMPLE_POINTS = (Fraction(1, 3), Fraction(-7, 2), Fraction(5, 11), Fraction(13, 4), Fraction(-2, 9))


def _identities_case(delta: int, nu: int) -> list[Failure]:
    out = []
    inputs = dict(delta=delta, nu=nu)
    total = sum(ap._alpha_tuple(delta, nu))
    if total != 0:
        out.append(Failure("alpha coefficient sum", inputs, "0", str(total)))
    try:
        ap.alpha_poly(delta, nu)
    except InternalConsistencyError as exc:
        out.append(Failure("alpha closed form", inputs, "both constructions agree", str(exc)))
    if ap.phi_poly(delta, nu) != ap.phi_poly_direct(delta, nu):
        out.append(Failure("phi construction", inputs, "suffix-sum form equals double sum", "differs"))
    if not ap.check_ode(delta, nu):
        out.append(Failure("alpha differential equation", inputs, "identity holds", "fails"))
    if not ap.check_contiguous(delta, nu):
        lhs, rhs = ap.contiguous_sides(delta, nu)
        out.append(Failure("contiguous relation", inputs, repr(lhs), repr(rhs)))
    for t in _SAMPLE_POINTS:
        x, y = ap.r0_eval(delta, nu, t), ap.r0_partial_fractions(delta, nu, t)
        if x != y:
            out.append(Failure("R0 partial fractions", dict(inputs, t=str(t)), str(x), str(y)))
    return out


def _integrality_case(delta: int, m: int, nu: int) -> list[Failure]:
    res = integrality_check(delta, m, nu)
    return [
        Failure(f"U {name}(theta0) integrality", dict(delta=delta, m=m, nu=nu, embedding=j), "algebraic integer", "not integral")
        for j, name in res.failures
    ]


# -- spectra ----------------------------------------------------------------

def _spectra_case(delta: int, precision: int) -> list[Failure]:
    out = []
    tol = mpmath.mpf(2) ** (-(precision - 16))
    for i in range(11):
        T = Fraction(i, 5)
        for eps in (0, 1):
            a = l_delta_closed(delta, eps, T, precision)
            b = l_delta_via_roots(delta, eps, T, precision)
            with hiprec.working(precision):
                if abs(a - b) > tol * max(1, abs(a)):
                    out.append(Failure("l closed form vs roots", dict(delta=delta, eps=eps, T=str(T)), str(a), str(b)))
        if not ordering_check(delta, T, precision):
            out.append(Failure("root ordering", dict(delta=delta, T=str(T)), "|eta1 + e| < |eta0 + e|", "violated"))
    try:
        v_star(delta, precision)
    except InternalConsistencyError as exc:
        out.append(Failure("V* dual route", dict(delta=delta), "closed form = (D+1) - c_D", str(exc)))
    grid = [Fraction(i, 20) for i in range(30)]
    if not monotonicity_scan(delta, grid, precision):
        out.append(Failure("growth monotonicity in u", dict(delta=delta), "monotone", "not monotone"))
    try:
        positivity_scan(delta, [3, 4, 5] + list(range(7, 101)), precision)
    except InternalConsistencyError as exc:
        out.append(Failure("positivity of h", dict(delta=delta), "h > 0", str(exc)))
    return out


def _growth_case(delta: int, m: int, nu_lo: int, nu_hi: int, precision: int) -> list[Failure]:
    g = growth_measure(delta, m, nu_lo, nu_hi, precision)
    out = []
    inputs = dict(delta=delta, m=m, nu_lo=nu_lo, nu_hi=nu_hi)
    for label, got, want in (
        ("remainder growth rate", g.remainder_slope, g.predictions[0]),
        ("numerator growth rate", g.numerator_slope, g.predictions[1]),
    ):
        if abs(got - want) > GROWTH_TOLERANCE:
            out.append(Failure(label, inputs, f"{want:.6f} +- {GROWTH_TOLERANCE}", f"{got:.6f}"))
    if not g.remainder_slope < 0 < g.numerator_slope:
        out.append(Failure("growth rate signs", inputs, "remainder < 0 < numerator", f"{g.remainder_slope}, {g.numerator_slope}"))
    return out


# -- case lists -------------------------------------------------------------

Case = tuple[Callable[..., list[Failure]], tuple]


def cases(suite: str, opts: Options) -> list[Case]:
    """Independent units of work for ``suite`` in reporting order."""
    if suite == "padic":
        primes = [p for p in range(3, opts.pmax + 1) if is_prime(p)]
        return [(_padic_prime, (p,)) for p in primes] + [(_phi_minus_one_cases, ())]
    if suite == "identities":
        return [(_identities_case, (d, nu)) for d in opts.deltas for nu in opts.nus]
    if suite == "integrality":
        return [(_integrality_case, (d, m, nu)) for d in opts.deltas for m in opts.ms for nu in opts.nus]
    if suite == "spectra":
        return [(_spectra_case, (d, opts.precision)) for d in opts.deltas]
    if suite == "growth":
        lo, hi = opts.growth_nu
        return [(_growth_case, (d, m, lo, hi, opts.precision)) for d, m in opts.growth_pairs]
    if suite == "all":
        return [c for s in SUITES for c in cases(s, opts)]
    raise ValueError(f"unknown suite {suite!r}")


def run_case(case: Case) -> list[Failure]:
    fn, args = case
    return fn(*args)


def run(suite: str, opts: Options = Options()) -> list[Failure]:
    out = []
    for c in cases(suite, opts):
        out.extend(run_case(c))
    return out


__all__ = ["Failure", "Options", "SUITES", "cases", "run", "run_case"]
