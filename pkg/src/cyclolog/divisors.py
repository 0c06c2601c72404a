"""Denominators and common factors of the approximant polynomials.

``dstar0`` clears every 1/tau in phi; ``dstar1`` is the largest common
factor that can then be divided back out of both alpha and phi; the
normalizer ``u_factor`` also clears the denominator of -1/(1 + zeta_m)
when m = 2 p^a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .approximants import DeltaParams, _alpha_tuple, _check_nu, alpha_poly, as_params, phi_numerators, phi_poly
from .cyclotomic import context, theta0_elem
from .errors import InternalConsistencyError
from .numtheory import euler_phi, lcm_upto, ramified_prime


def dstar0(params: DeltaParams | int, nu: int) -> int:
    """lcm(1, ..., nu (Delta + 1))."""
    params = as_params(params)
    _check_nu(nu)
    return lcm_upto(nu * (params.delta + 1))


def alpha_content(params: DeltaParams | int, nu: int) -> int:
    params = as_params(params)
    _check_nu(nu)
    return math.gcd(*_alpha_tuple(params.delta, nu))


@lru_cache(maxsize=128)
def _dstar1(delta: int, nu: int) -> int:
    big_l, c = phi_numerators(delta, nu)
    d0 = lcm_upto(nu * (delta + 1))
    # phi numerators are over L = d0 already
    if big_l != d0:
        raise InternalConsistencyError("phi common denominator differs from dstar0")
    return math.gcd(d0 * math.gcd(*_alpha_tuple(delta, nu)), math.gcd(*c))


def dstar1(params: DeltaParams | int, nu: int) -> int:
    """Largest D with (d0/D) alpha and (d0/D) phi both integral: gcd(d0 content(alpha), content(d0 phi))."""
    params = as_params(params)
    _check_nu(nu)
    return _dstar1(params.delta, nu)


@dataclass(frozen=True)
class DivisorData:
    params: DeltaParams
    nu: int
    dstar0: int
    dstar1: int
    ratio: int

    def log_rate(self) -> float:
        """log(dstar1) / nu."""
        return math.log(self.dstar1) / self.nu


def divisor_data(params: DeltaParams | int, nu: int) -> DivisorData:
    params = as_params(params)
    d0, d1 = dstar0(params, nu), dstar1(params, nu)
    if d0 % d1:
        raise InternalConsistencyError(f"dstar1 = {d1} does not divide dstar0 = {d0} (delta={params.delta}, nu={nu})")
    return DivisorData(params, nu, d0, d1, d0 // d1)


def u_factor(params: DeltaParams | int, m: int, nu: int) -> int:
    """d0/d1, times p^(floor((Delta+1) nu / phi(m)) + 1) when m = 2 p^a."""
    params = as_params(params)
    ratio = divisor_data(params, nu).ratio
    p = ramified_prime(m)
    if p is None:
        return ratio
    return ratio * p ** ((params.delta + 1) * nu // euler_phi(m) + 1)


@dataclass(frozen=True)
class IntegralityResult:
    ok: bool
    failures: tuple[tuple[int, str], ...] = ()

    def __bool__(self):
        return self.ok


def integrality_check(params: DeltaParams | int, m: int, nu: int) -> IntegralityResult:
    """U alpha(theta0) and U phi(theta0) are algebraic integers at every theta0 = -1/(1 + zeta^k_j)."""
    params = as_params(params)
    ctx = context(m)
    U = u_factor(params, m, nu)
    a = alpha_poly(params, nu)
    ph = phi_poly(params, nu)
    failures = []
    for j, k in enumerate(ctx.residues, start=1):
        theta = theta0_elem(ctx, k)
        for name, poly in (("alpha", a), ("phi", ph)):
            if not (poly(theta) * U).is_integer:
                failures.append((j, name))
    return IntegralityResult(not failures, tuple(failures))
