"""Characteristic roots and growth constants at the points w = -(1 + iT)/2.

The characteristic polynomial

    D(w, eta) = (eta + 1)(eta + g) - 2 (1 + g) w eta,   g = (Delta - 1)/(Delta + 1),

has at w = -(1 + iT)/2 the roots eta_0, eta_1 (eta_1 the smaller one), and
l(eps, T) = log |h(eta_eps)| with

    h(eta) = (eta - 1)(eta + 1) eta^(Delta-1) / (4 (1 - 1/Delta)^(Delta-1))

is the exponential growth rate of the solution attached to eta_eps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath
from mpmath import mpc, mpf

from . import hiprec
from .approximants import DeltaParams, as_params
from .errors import InternalConsistencyError


def w_delta(params: DeltaParams | int, T, precision: int = hiprec.DEFAULT_PRECISION) -> mpf:
    """sqrt((sqrt((D^2 (3 - T^2) + 1)^2 + 16 D^4 T^2) + D^2 (3 - T^2) + 1) / 2)."""
    D = as_params(params).delta
    with hiprec.working(precision):
        return hiprec.rounded(_w_raw(D, hiprec.to_mp(T)), precision)


def _w_raw(D: int, T) -> mpf:
    a = D * D * (3 - T * T) + 1
    return mpmath.sqrt((mpmath.sqrt(a * a + 16 * D**4 * T * T) + a) / 2)


def _eta_raw(D: int, T, j: int) -> mpc:
    W = _w_raw(D, T)
    s = 1 if j == 0 else -1
    return -mpc(2 * D + s * W, T * D * (1 + s * 2 * D / W)) / (D + 1)


def eta_roots(params: DeltaParams | int, T, precision: int = hiprec.DEFAULT_PRECISION) -> tuple[mpc, mpc]:
    """(eta_0, eta_1); eta_0 takes +w_Delta(T)."""
    D = as_params(params).delta
    with hiprec.working(precision):
        t = hiprec.to_mp(T)
        return hiprec.rounded(_eta_raw(D, t, 0), precision), hiprec.rounded(_eta_raw(D, t, 1), precision)


def char_poly(params: DeltaParams | int, w, eta):
    """D(w, eta) evaluated numerically at the current working precision."""
    g = as_params(params).gamma1
    gm = mpf(g.numerator) / g.denominator
    return (eta + 1) * (eta + gm) - 2 * (1 + gm) * w * eta


def _h_raw(D: int, eta):
    return (eta - 1) * (eta + 1) * eta ** (D - 1) / (4 * (1 - mpf(1) / D) ** (D - 1))


def h_tilde(params: DeltaParams | int, eta, precision: int = hiprec.DEFAULT_PRECISION) -> mpc:
    D = as_params(params).delta
    with hiprec.working(precision):
        return hiprec.rounded(mpc(_h_raw(D, mpc(hiprec.to_mp(eta)))), precision)


def _l_closed(D: int, eps: int, T) -> mpf:
    W = _w_raw(D, T)
    s = 1 if eps == 0 else -1
    lead = 2 * D + s * W
    im2 = T * T * D * D * (1 + s * 2 * D / W) ** 2
    c = -mpmath.log(4 * mpf(D + 1) ** (D + 1) * (1 - mpf(1) / D) ** (D - 1))
    return (
        c
        + mpmath.log((lead + (D + 1)) ** 2 + im2) / 2
        + mpmath.log((lead - (D + 1)) ** 2 + im2) / 2
        + (D - 1) * mpmath.log(lead**2 + im2) / 2
    )


def l_delta_closed(params: DeltaParams | int, eps: int, T, precision: int = hiprec.DEFAULT_PRECISION) -> mpf:
    D = as_params(params).delta
    with hiprec.working(precision):
        return hiprec.rounded(_l_closed(D, eps, hiprec.to_mp(T)), precision)


def l_delta_via_roots(params: DeltaParams | int, eps: int, T, precision: int = hiprec.DEFAULT_PRECISION) -> mpf:
    D = as_params(params).delta
    with hiprec.working(precision):
        return hiprec.rounded(mpmath.log(abs(_h_raw(D, _eta_raw(D, hiprec.to_mp(T), eps)))), precision)


def l_delta(params: DeltaParams | int, eps: int, T, precision: int = hiprec.DEFAULT_PRECISION) -> mpf:
    """Growth rate l_Delta(eps, T), closed form, cross-checked against log |h(eta_eps)|."""
    if eps not in (0, 1):
        raise ValueError(f"eps must be 0 or 1, got {eps}")
    D = as_params(params).delta
    hiprec.check_precision(precision)
    with hiprec.working(precision):
        t = hiprec.to_mp(T)
        closed = _l_closed(D, eps, t)
        via = mpmath.log(abs(_h_raw(D, _eta_raw(D, t, eps))))
        if abs(closed - via) > mpf(2) ** (-(precision - 16)) * max(1, abs(closed)):
            raise InternalConsistencyError(f"l_{D}({eps}, {T}): closed form {closed} vs roots {via}")
        return hiprec.rounded(closed, precision)


@dataclass(frozen=True)
class SpectralParams:
    params: DeltaParams
    T: mpf
    psi: mpf
    rho: mpf
    u: mpf
    w_delta: mpf
    eta0: mpc
    eta1: mpc
    h0: mpc
    h1: mpc
    l0: mpf
    l1: mpf

    @property
    def gamma1(self):
        return self.params.gamma1

    def trinomial(self) -> tuple[mpc, mpc]:
        """(constant, linear) coefficients of (x - h0)(x - h1)."""
        return self.h0 * self.h1, -(self.h0 + self.h1)


def spectral_params(params: DeltaParams | int, psi, precision: int = hiprec.DEFAULT_PRECISION, rho=1) -> SpectralParams:
    """Everything at angle psi in (-pi/2, pi/2), with T = tan psi and r = rho / (2 cos psi)."""
    params = as_params(params)
    with hiprec.working(precision):
        p = hiprec.to_mp(psi)
        T = mpmath.tan(p)
        rho_v = hiprec.to_mp(rho)
        r = rho_v / (2 * mpmath.cos(p))
        eta0, eta1 = eta_roots(params, T, precision)
        values = dict(
            params=params,
            T=hiprec.rounded(T, precision),
            psi=hiprec.rounded(p, precision),
            rho=hiprec.rounded(rho_v, precision),
            u=hiprec.rounded(r * r, precision),
            w_delta=w_delta(params, T, precision),
            eta0=eta0,
            eta1=eta1,
            h0=h_tilde(params, eta0, precision),
            h1=h_tilde(params, eta1, precision),
            l0=l_delta(params, 0, T, precision),
            l1=l_delta(params, 1, T, precision),
        )
    return SpectralParams(**values)


def ordering_check(params: DeltaParams | int, T, precision: int = hiprec.DEFAULT_PRECISION) -> bool:
    """|eta_1 + e| < |eta_0 + e| for e in {0, 1}, and |eta_1 - 1| < |eta_0 - 1|."""
    eta0, eta1 = eta_roots(params, T, precision)
    with hiprec.working(precision):
        return all(abs(eta1 + e) < abs(eta0 + e) for e in (0, 1, -1))


def monotonicity_scan(
    params: DeltaParams | int,
    psi_grid: Sequence | Iterable,
    precision: int = hiprec.DEFAULT_PRECISION,
) -> bool:
    """|h(eta_0)| strictly increases and |h(eta_1)| strictly decreases in u = 1/(2 cos psi)^2.

    The grid is in psi (rho = 1); it is sorted by u, which is increasing in
    |psi|.  Each step must move by more than 2^-(precision/2) relatively.
    """
    params = as_params(params)
    D = params.delta
    with hiprec.working(precision):
        pts = []
        for psi in psi_grid:
            p = hiprec.to_mp(psi)
            u = 1 / (2 * mpmath.cos(p)) ** 2
            T = mpmath.tan(p)
            pts.append((u, abs(_h_raw(D, _eta_raw(D, T, 0))), abs(_h_raw(D, _eta_raw(D, T, 1)))))
        pts.sort(key=lambda x: x[0])
        margin = mpf(2) ** (-(precision // 2))
        for (u_a, a0, a1), (u_b, b0, b1) in zip(pts, pts[1:]):
            if u_b - u_a <= margin:
                continue
            if not b0 - a0 > margin * a0:
                return False
            if not a1 - b1 > margin * a1:
                return False
        return True
