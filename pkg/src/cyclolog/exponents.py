"""Irrationality exponents beta(Delta, m), alpha(Delta, m) and the constants behind them.

The exponents come from three growth rates taken from :mod:`spectra`:

    g_eps(m) = (-1)^eps (l(eps, T_omega) + V(m)),   T_omega = tan(pi omega1(m)/m)
    h(m)     = -V(m) - l(1, tan(pi/m))
    beta     = g_0/h,    alpha = beta - 1 + g_1/h

with V(m) = V* + (Delta + 1) Lambda_0(m)/phi(m).
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import mpmath
from mpmath import mpf

from . import hiprec
from .approximants import DeltaParams, _alpha_tuple, as_params, f0_at_root_of_unity
from .cyclotomic import context, theta0_value
from .errors import InternalConsistencyError, UsageError
from .numtheory import euler_phi, lambda0, omega1
from .spectra import l_delta

THEOREM_DELTAS = (5, 7)
EXCLUDED_M = (1, 2, 6)


def _hata_raw(D: int) -> mpf:
    total = mpf(0)
    for sign in (1, -1):
        n = D + sign
        part = mpf(n) / 2 * mpmath.log(mpf(D) / n)
        part += sign * mpmath.pi / 2 * mpmath.fsum(mpmath.cot(mpmath.pi * k / n) for k in range(1, n // 2 + 1))
        total += part
    return total


def hata_rate(delta: DeltaParams | int, precision: int = hiprec.DEFAULT_PRECISION) -> mpf:
    """Asymptotic rate c_Delta of log(dstar1)/nu."""
    D = as_params(delta).delta
    with hiprec.working(precision):
        return hiprec.rounded(_hata_raw(D), precision)


def _v_star_closed(D: int) -> mpf:
    # log((D-1)^((D-1)/2) (D+1)^((D+1)/2) D^-D); for D = 2 the first factor is 1
    lg = (mpf(D + 1) / 2) * mpmath.log(D + 1) - D * mpmath.log(D)
    if D > 2:
        lg += (mpf(D - 1) / 2) * mpmath.log(D - 1)
    cots = mpf(0)
    for mu in (0, 1):
        n = D - 1 + 2 * mu
        cots += (1 - 2 * mu) * mpmath.fsum(mpmath.cot(mpmath.pi * k / n) for k in range(1, (D - 1) // 2 + mu + 1))
    return (D + 1) + lg + mpmath.pi / 2 * cots


def v_star(delta: DeltaParams | int, precision: int = hiprec.DEFAULT_PRECISION) -> mpf:
    """V*, by the closed form and checked against (Delta + 1) - c_Delta."""
    D = as_params(delta).delta
    with hiprec.working(precision):
        closed = _v_star_closed(D)
        other = (D + 1) - _hata_raw(D)
        if abs(closed - other) > mpf(2) ** (-(precision - 16)) * max(1, abs(closed)):
            raise InternalConsistencyError(f"V*_{D}: closed form {closed} vs (D+1) - c_D = {other}")
        return hiprec.rounded(closed, precision)


def v_m(delta: DeltaParams | int, m: int, precision: int = hiprec.DEFAULT_PRECISION) -> mpf:
    """V* + (Delta + 1) Lambda_0(m)/phi(m)."""
    if m < 3:
        raise UsageError(f"m must be >= 3, got {m}")
    D = as_params(delta).delta
    lam = lambda0(m)
    with hiprec.working(precision):
        extra = mpf(0) if lam.is_zero else (D + 1) * mpmath.log(lam.prime) / euler_phi(m)
        return hiprec.rounded(v_star(D, precision + hiprec.GUARD_BITS) + extra, precision)


@dataclass(frozen=True)
class ExponentReport:
    m: int
    delta: int
    c_delta: mpf
    v_star: mpf
    v_m: mpf
    l0_omega: mpf
    l1_omega: mpf
    l1_one: mpf
    g0: mpf
    g1: mpf
    h: mpf
    beta: mpf
    alpha: mpf
    outside_theorem_range: bool = False
    h_nonpositive: bool = False

    FIELDS = ("m", "delta", "c_delta", "v_star", "v_m", "l0_omega", "l1_omega", "l1_one", "g0", "g1", "h", "beta", "alpha")


def exponent_report(delta: DeltaParams | int, m: int, precision: int = hiprec.DEFAULT_PRECISION) -> ExponentReport:
    """All constants for one (Delta, m).  Non-positive h is flagged, not raised."""
    if m < 3:
        raise UsageError(f"m must be >= 3, got {m}")
    D = as_params(delta).delta
    p = precision + hiprec.GUARD_BITS
    with hiprec.working(precision):
        t_omega = mpmath.tan(mpmath.pi * omega1(m) / m)
        t_one = mpmath.tan(mpmath.pi / m)
        c = hata_rate(D, p)
        vs = v_star(D, p)
        V = v_m(D, m, p)
        l0w = l_delta(D, 0, t_omega, p)
        l1w = l_delta(D, 1, t_omega, p)
        l11 = l1w if omega1(m) == 1 else l_delta(D, 1, t_one, p)
        g0 = l0w + V
        g1 = -(l1w + V)
        h = -V - l11
        beta = g0 / h
        alpha = beta - 1 + g1 / h
        vals = [c, vs, V, l0w, l1w, l11, g0, g1, h, beta, alpha]
        vals = [hiprec.rounded(v, precision) for v in vals]
    return ExponentReport(
        m,
        D,
        *vals,
        outside_theorem_range=D not in THEOREM_DELTAS or m in EXCLUDED_M,
        h_nonpositive=not h > 0,
    )


def positivity_scan(
    delta: DeltaParams | int, m_range: Iterable[int], precision: int = hiprec.DEFAULT_PRECISION
) -> list[tuple[int, mpf, int]]:
    """(m, h, sign of h) for each m; raises if h <= 0 at an m where positivity is claimed."""
    D = as_params(delta).delta
    out = []
    for m in m_range:
        h = exponent_report(D, m, precision).h
        sign = 1 if h > 0 else (-1 if h < 0 else 0)
        out.append((m, h, sign))
        if D in THEOREM_DELTAS and m not in EXCLUDED_M and sign <= 0:
            raise InternalConsistencyError(f"h_{D}({m}) = {h} is not positive")
    return out


@dataclass(frozen=True)
class TableRow:
    m: int
    delta: int
    beta: float
    alpha: float


@dataclass(frozen=True)
class TableComparison:
    rows: int
    mismatches: list[tuple[TableRow, float, float]] = field(default_factory=list)


def compare_table(reference: Iterable[TableRow], tolerance=1e-4, wide_tolerance=1e-3, wide_m=(10, 14, 22, 26)):
    """Compare computed beta, alpha against reference rows; mismatches carry both computed values."""
    rows = list(reference)
    bad = []
    for row in rows:
        rep = exponent_report(row.delta, row.m)
        tol = wide_tolerance if row.m in wide_m else tolerance
        b, a = float(rep.beta), float(rep.alpha)
        if abs(b - row.beta) > tol or abs(a - row.alpha) > tol:
            bad.append((row, b, a))
    return TableComparison(len(rows), bad)


# -- empirical growth -------------------------------------------------------

@dataclass(frozen=True)
class GrowthRecord:
    delta: int
    m: int
    nus: tuple[int, ...]
    log_remainders: tuple[float, ...]
    log_numerators: tuple[float, ...]
    remainder_slope: float
    numerator_slope: float
    predictions: tuple[float, float]


def _alpha_house_log(delta: int, nu: int, m: int, bits: int) -> float:
    a = _alpha_tuple(delta, nu)
    best = None
    for k in context(m).residues:
        w = theta0_value(m, k, bits)
        with mpmath.mp.workprec(bits):
            v = abs((-w) ** nu * mpmath.polyval(list(reversed(a)), w))
        best = v if best is None or v > best else best
    with mpmath.mp.workprec(bits):
        return float(mpmath.log(best))


def _growth_point(args) -> tuple[int, float, float]:
    delta, m, nu, precision, extra = args
    f = f0_at_root_of_unity(delta, nu, m, 1, precision, extra_bits=extra)
    with mpmath.mp.workprec(f.working_bits):
        lr = float(mpmath.log(abs(f.value)))
    return nu, lr, _alpha_house_log(delta, nu, m, f.working_bits)


def growth_measure(
    delta: DeltaParams | int,
    m: int,
    nu_lo: int,
    nu_hi: int,
    precision: int = hiprec.DEFAULT_PRECISION,
    step: int = 10,
    workers: int = 1,
) -> GrowthRecord:
    """Least-squares slopes of log|f0(theta0, nu)| and log(house of alpha(theta0)) against nu.

    The remainder uses the embedding zeta -> exp(2 pi i/m).  Working precision
    grows with nu by the predicted cancellation nu (l0 - l1)/log 2.
    """
    if not nu_hi > nu_lo >= 20:
        raise UsageError(f"need nu_hi > nu_lo >= 20, got [{nu_lo}, {nu_hi}]")
    if step < 1:
        raise UsageError(f"step must be >= 1, got {step}")
    D = as_params(delta).delta
    with hiprec.working(precision):
        t_one = mpmath.tan(mpmath.pi / m)
        t_omega = mpmath.tan(mpmath.pi * omega1(m) / m)
        l1 = float(l_delta(D, 1, t_one, precision))
        l0_one = float(l_delta(D, 0, t_one, precision))
        l0w = float(l_delta(D, 0, t_omega, precision))
    nus = list(range(nu_lo, nu_hi + 1, step))
    if len(nus) < 2:
        raise UsageError("need at least two nu values")
    jobs = [(D, m, nu, precision, math.ceil(nu * (l0_one - l1) / math.log(2))) for nu in nus]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_growth_point, jobs))
    else:
        results = [_growth_point(j) for j in jobs]
    results.sort()
    xs = [r[0] for r in results]
    lr = tuple(r[1] for r in results)
    ln = tuple(r[2] for r in results)
    rs = statistics.linear_regression(xs, lr).slope
    ns = statistics.linear_regression(xs, ln).slope
    return GrowthRecord(D, m, tuple(xs), lr, ln, rs, ns, (l1, l0w))
