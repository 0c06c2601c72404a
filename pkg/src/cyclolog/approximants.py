"""Approximant polynomials for log(1 - 1/w) and their remainder.

For a parameter Delta >= 2 and an index nu >= 1 the table

    a[k] = (-1)^(nu + nu*Delta + k) * C(nu*Delta, k) * C(nu*Delta + k, nu*Delta - nu)

gives the partial fractions of R0(t) = sum_k a[k] / (t + k), and

    alpha(w) = (-w)^nu sum_k a[k] w^k
    phi(w)   = (-1)^nu sum_{tau=1}^{nu(Delta+1)} (1/tau) sum_{k >= tau - nu} a[k] w^(nu - tau + k)
    f0(w)    = alpha(w) * (-log(1 - 1/w)) - phi(w)

f0 is small at the cyclotomic points w = -1/(1 + zeta^k); on |w| > 1 it
equals the series (-w)^nu sum_{t > nu} R0(t) w^(-t).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

import mpmath
from mpmath import mp, mpc, mpf

from . import hiprec
from .errors import DomainError, InternalConsistencyError, UsageError
from .numtheory import factorial, lcm_upto


@dataclass(frozen=True)
class DeltaParams:
    delta: int

    def __post_init__(self):
        if not isinstance(self.delta, int) or self.delta < 2:
            raise UsageError(f"delta must be an integer >= 2, got {self.delta!r}")

    @property
    def delta0(self) -> Fraction:
        return Fraction(1, self.delta)

    @property
    def d1(self) -> int:
        return self.delta - 1

    @property
    def d2(self) -> int:
        return self.delta + 1

    @property
    def gamma1(self) -> Fraction:
        return Fraction(self.delta - 1, self.delta + 1)


def as_params(delta: int | DeltaParams) -> DeltaParams:
    return delta if isinstance(delta, DeltaParams) else DeltaParams(delta)


def _check_nu(nu: int) -> None:
    if not isinstance(nu, int) or nu < 1:
        raise UsageError(f"nu must be an integer >= 1, got {nu!r}")


@dataclass(frozen=True)
class SurfacePoint:
    """Point (r, phi) on the Riemann surface of Log: theta0 = r e^(i phi), Log = ln r + i phi."""

    r: mpf
    phi: mpf

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError(f"surface point needs r > 0, got {self.r}")

    @classmethod
    def evaluation_point(cls, psi, rho=1) -> "SurfacePoint":
        """(rho / (2 cos psi), psi - pi); theta0 is then -rho (1 + i tan psi) / 2."""
        psi = hiprec.to_mp(psi)
        return cls(hiprec.to_mp(rho) / (2 * mpmath.cos(psi)), psi - mp.pi)

    def theta0(self) -> mpc:
        return self.r * mpmath.expj(self.phi)

    def log(self) -> mpc:
        return mpc(mpmath.log(self.r), self.phi)


# -- rational polynomials --------------------------------------------------

class RationalPoly:
    """Finitely supported polynomial {degree: Fraction}; zero coefficients are dropped."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Mapping[int, object] | Iterable = ()):
        items = coefficients.items() if isinstance(coefficients, Mapping) else enumerate(coefficients)
        c = {}
        for n, v in items:
            if n < 0:
                raise UsageError(f"negative degree {n}")
            v = Fraction(v)
            if v:
                c[int(n)] = c.get(int(n), 0) + v
        self._c = {n: v for n, v in c.items() if v}

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return dict(self._c)

    def __getitem__(self, n: int) -> Fraction:
        return self._c.get(n, Fraction(0))

    @property
    def degree(self) -> int:
        return max(self._c, default=-1)

    @property
    def low_degree(self) -> int:
        return min(self._c, default=-1)

    def dense(self) -> list[Fraction]:
        return [self[n] for n in range(self.degree + 1)]

    def __eq__(self, other):
        return isinstance(other, RationalPoly) and self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        terms = " + ".join(f"({v})*w^{n}" for n, v in sorted(self._c.items()))
        return f"RationalPoly({terms or '0'})"

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        c = dict(self._c)
        for n, v in other._c.items():
            c[n] = c.get(n, 0) + v
        return RationalPoly(c)

    def __neg__(self):
        return RationalPoly({n: -v for n, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RationalPoly):
            c: dict[int, Fraction] = {}
            for n, v in self._c.items():
                for k, u in other._c.items():
                    c[n + k] = c.get(n + k, 0) + v * u
            return RationalPoly(c)
        other = Fraction(other)
        return RationalPoly({n: v * other for n, v in self._c.items()})

    __rmul__ = __mul__

    def shift(self, k: int) -> "RationalPoly":
        """Multiply by w^k."""
        return RationalPoly({n + k: v for n, v in self._c.items()})

    def __call__(self, x):
        acc = 0
        for v in reversed(self.dense()):
            acc = acc * x + v
        return acc

    def denominator_lcm(self) -> int:
        return math.lcm(*(v.denominator for v in self._c.values())) if self._c else 1

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._c.values())

    def content(self) -> int:
        """gcd of the coefficients of an integral polynomial."""
        if not self.is_integral():
            raise UsageError("content() needs integer coefficients")
        return math.gcd(*(v.numerator for v in self._c.values()))


def delta_op(p: RationalPoly) -> RationalPoly:
    """w d/dw: w^n -> n w^n."""
    return RationalPoly({n: n * v for n, v in p.coefficients.items()})


def affine_delta(p: RationalPoly, c) -> RationalPoly:
    """(delta + c) p."""
    return delta_op(p) + p * c


# -- coefficient tables ----------------------------------------------------

@dataclass(frozen=True)
class CoeffTable:
    params: DeltaParams
    nu: int
    alpha_star: tuple[int, ...]

    def __post_init__(self):
        if len(self.alpha_star) != self.nu * self.params.delta + 1:
            raise InternalConsistencyError("coefficient table has the wrong length")
        if sum(self.alpha_star):
            raise InternalConsistencyError(
                f"coefficients do not sum to zero for delta={self.params.delta}, nu={self.nu}"
            )

    def to_json(self) -> str:
        """Decimal-string array: the integers overflow 64 bits quickly."""
        return json.dumps(
            {"delta": self.params.delta, "nu": self.nu, "alpha_star": [str(a) for a in self.alpha_star]}
        )

    @classmethod
    def from_json(cls, text: str) -> "CoeffTable":
        data = json.loads(text)
        return cls(DeltaParams(int(data["delta"])), int(data["nu"]), tuple(int(a) for a in data["alpha_star"]))


@lru_cache(maxsize=256)
def _alpha_tuple(delta: int, nu: int) -> tuple[int, ...]:
    n = nu * delta
    sign0 = -1 if (nu + n) % 2 else 1
    return tuple(
        (sign0 if k % 2 == 0 else -sign0) * math.comb(n, k) * math.comb(n + k, n - nu) for k in range(n + 1)
    )


def alpha_coeffs(params: DeltaParams | int, nu: int) -> CoeffTable:
    params = as_params(params)
    _check_nu(nu)
    return CoeffTable(params, nu, _alpha_tuple(params.delta, nu))


def f1_closed_form(params: DeltaParams | int, nu: int) -> RationalPoly:
    """(nu D)!/(nu d1)! times the residue sum w^nu (-1)^(nu D) (nu d1)!/(nu D)! sum (-w)^k C(nu D, k) C(nu D + k, nu d1)."""
    params = as_params(params)
    _check_nu(nu)
    n, nd1 = nu * params.delta, nu * params.d1
    pre = Fraction(factorial(nd1), factorial(n))
    sign = -1 if n % 2 else 1
    f1 = RationalPoly({nu + k: pre * sign * (-1) ** k * math.comb(n, k) * math.comb(n + k, nd1) for k in range(n + 1)})
    return f1 * Fraction(factorial(n), factorial(nd1))


@lru_cache(maxsize=256)
def _alpha_poly(delta: int, nu: int) -> RationalPoly:
    a = _alpha_tuple(delta, nu)
    sign = -1 if nu % 2 else 1
    return RationalPoly({nu + k: sign * c for k, c in enumerate(a)})


def alpha_poly(params: DeltaParams | int, nu: int) -> RationalPoly:
    """alpha(w) = (-w)^nu sum_k a[k] w^k, checked against the residue closed form."""
    params = as_params(params)
    _check_nu(nu)
    p = _alpha_poly(params.delta, nu)
    if p != f1_closed_form(params, nu):
        raise InternalConsistencyError(f"alpha constructions disagree for delta={params.delta}, nu={nu}")
    return p


@lru_cache(maxsize=64)
def _phi_numerators(delta: int, nu: int) -> tuple[int, tuple[int, ...]]:
    # phi = (sum_j c[j] w^j) / L with L = lcm(1..nu(delta+1))
    a = _alpha_tuple(delta, nu)
    top = nu * (delta + 1)
    big_l = lcm_upto(top)
    inv = [0] + [big_l // t for t in range(1, top + 1)]
    n = nu * delta
    c = []
    for j in range(top):
        # j = nu - tau + k with 1 <= tau <= top
        s = 0
        for k in range(max(0, j - nu + 1), n + 1):
            s += a[k] * inv[nu + k - j]
        c.append(-s if nu % 2 else s)
    return big_l, tuple(c)


def phi_numerators(params: DeltaParams | int, nu: int) -> tuple[int, tuple[int, ...]]:
    """(L, c) with phi(w) = sum_j c[j] w^j / L and L = lcm(1..nu(Delta+1))."""
    params = as_params(params)
    _check_nu(nu)
    return _phi_numerators(params.delta, nu)


def phi_poly(params: DeltaParams | int, nu: int) -> RationalPoly:
    big_l, c = phi_numerators(params, nu)
    return RationalPoly({j: Fraction(v, big_l) for j, v in enumerate(c)})


def phi_poly_direct(params: DeltaParams | int, nu: int) -> RationalPoly:
    """phi from its first form (-w)^nu sum_k a[k] w^k sum_{tau=1}^{nu+k} w^-tau / tau (slow, for cross-checks)."""
    params = as_params(params)
    _check_nu(nu)
    a = _alpha_tuple(params.delta, nu)
    sign = -1 if nu % 2 else 1
    c: dict[int, Fraction] = {}
    for k, ak in enumerate(a):
        for tau in range(1, nu + k + 1):
            e = nu + k - tau
            c[e] = c.get(e, 0) + Fraction(sign * ak, tau)
    return RationalPoly(c)


# -- R0 --------------------------------------------------------------------

def r0_eval(params: DeltaParams | int, nu: int, t) -> Fraction:
    """(nu D)!/(nu d1)! prod_{nu < kappa <= nu D}(t - kappa) / prod_{0 <= kappa <= nu D}(t + kappa)."""
    params = as_params(params)
    _check_nu(nu)
    t = Fraction(t)
    n = nu * params.delta
    if t.denominator == 1 and -n <= t <= 0:
        raise DomainError(f"R0 has a pole at t = {t}")
    num = Fraction(factorial(n), factorial(nu * params.d1))
    for kappa in range(nu + 1, n + 1):
        num *= t - kappa
    den = Fraction(1)
    for kappa in range(n + 1):
        den *= t + kappa
    return num / den


def r0_partial_fractions(params: DeltaParams | int, nu: int, t) -> Fraction:
    """sum_k a[k] / (t + k)."""
    t = Fraction(t)
    a = alpha_coeffs(params, nu).alpha_star
    if t.denominator == 1 and -len(a) < t <= 0:
        raise DomainError(f"R0 has a pole at t = {t}")
    return sum((Fraction(ak) / (t + k) for k, ak in enumerate(a)), Fraction(0))


# -- numeric evaluation ----------------------------------------------------

@dataclass(frozen=True)
class F0Value:
    value: mpc
    alpha: mpc
    phi: mpc
    working_bits: int
    lost_bits: int


def _in_domain(params: DeltaParams, w: mpc) -> bool:
    if abs(w) > 1 + mpf(1) / (2 * params.delta):
        return True
    if w == 0:
        return False
    return (1 - 1 / w).real > mpf(1) / 2


def _f0_once(a: tuple[int, ...], nu: int, w: mpc):
    n = len(a) - 1
    # suffix[k] = sum_{i >= k} a[i] w^(i - k)
    suffix = [mpc(0)] * (n + 1)
    acc = mpc(0)
    for k in range(n, -1, -1):
        acc = acc * w + a[k]
        suffix[k] = acc
    sign = -1 if nu % 2 else 1
    alpha = sign * w**nu * suffix[0]
    # tau <= nu contributes w^(nu - tau) suffix[0]; tau > nu contributes suffix[tau - nu]
    head = mpc(0)
    for tau in range(1, nu + 1):
        head = head * w + mpf(1) / tau
    tail = sum((suffix[tau - nu] / tau for tau in range(nu + 1, nu + n + 1)), mpc(0))
    phi = sign * (head * suffix[0] + tail)
    log_term = -mpmath.log(1 - 1 / w)
    return alpha * log_term - phi, alpha, phi, log_term


def _cancellation_scale(a, nu: int, w: mpc, log_term) -> mpf:
    # every summand of alpha*log and of phi is bounded by |w|^(nu - tau) sum_i |a_i| |w|^i
    aw = abs(w)
    mag = mpf(0)
    for k in range(len(a) - 1, -1, -1):
        mag = mag * aw + abs(a[k])
    top = nu + len(a) - 1
    spread = sum(aw ** (nu - tau) / tau for tau in range(1, top + 1))
    return mag * (aw**nu * abs(log_term) + spread)


def f0_eval_detail(
    params: DeltaParams | int,
    nu: int,
    w: mpc | Callable[[int], mpc] | complex | int,
    precision: int = hiprec.DEFAULT_PRECISION,
    extra_bits: int = 0,
    max_attempts: int = 6,
) -> F0Value:
    """Evaluate f0 and report the precision actually used.

    ``w`` is a number (taken as exact) or a callable ``w(bits)`` that
    recomputes the point at a given working precision.  Start at
    ``precision + extra_bits + 64`` bits; if the measured cancellation
    leaves fewer than ``precision`` good bits, rerun with enough bits
    (at least doubling the previous attempt's shortfall).
    """
    params = as_params(params)
    _check_nu(nu)
    hiprec.check_precision(precision)
    a = _alpha_tuple(params.delta, nu)
    wfun = w if callable(w) else (lambda bits, _w=w: mpc(hiprec.to_mp(_w)))
    bits = precision + max(0, int(extra_bits)) + 64
    for _ in range(max_attempts):
        with mp.workprec(bits):
            wv = mpc(wfun(bits))
            if not _in_domain(params, wv):
                raise DomainError(f"w = {wv} is outside the analyticity domain of f0")
            value, alpha, phi, log_term = _f0_once(a, nu, wv)
            with mp.workprec(64):
                scale = _cancellation_scale(a, nu, wv, log_term)
                lost = 0 if value == 0 else max(0, int(mpmath.ceil(mpmath.log(scale / abs(value), 2))))
            if value != 0 and bits - lost >= precision + 16:
                return F0Value(
                    hiprec.rounded(value, precision),
                    hiprec.rounded(alpha, precision),
                    hiprec.rounded(phi, precision),
                    bits,
                    lost,
                )
        bits = max(2 * bits, precision + lost + 64) if value != 0 else 2 * bits
    raise InternalConsistencyError(f"f0 cancellation not resolved after {max_attempts} attempts (last {bits} bits)")


def f0_eval(
    params: DeltaParams | int,
    nu: int,
    w,
    precision: int = hiprec.DEFAULT_PRECISION,
    extra_bits: int = 0,
) -> mpc:
    """alpha(w) (-log(1 - 1/w)) - phi(w) with ``precision`` correct bits."""
    return f0_eval_detail(params, nu, w, precision, extra_bits).value


def f0_at_root_of_unity(params: DeltaParams | int, nu: int, m: int, k: int, precision: int, extra_bits: int = 0) -> F0Value:
    """f0 at w = -1/(1 + exp(2 pi i k/m)), with w recomputed at every working precision."""
    from .cyclotomic import theta0_value

    return f0_eval_detail(params, nu, lambda bits: theta0_value(m, k, bits), precision, extra_bits)


@dataclass(frozen=True)
class SeriesValue:
    value: mpc
    tail_bound: mpf
    terms: int


def f2_series_eval(
    params: DeltaParams | int,
    nu: int,
    w,
    terms: int | None = None,
    precision: int = hiprec.DEFAULT_PRECISION,
) -> SeriesValue:
    """Partial sum of (-w)^nu sum_{t = nu+1}^{nu+terms} R0(t) w^-t with a rigorous tail bound.

    R0 vanishes on nu < t <= nu*Delta.  Past t* = nu D (nu D + 1)/(nu + 1)
    the ratio R0(t+1)/R0(t) = t (t - nu) / ((t - nu D)(t + nu D + 1)) is
    below 1, so the tail is at most the first omitted term times
    1/(1 - 1/|w|).  With ``terms=None`` the sum runs until that bound
    drops below 2^-(precision + 8).
    """
    params = as_params(params)
    _check_nu(nu)
    hiprec.check_precision(precision)
    n = nu * params.delta
    t_star = Fraction(n * (n + 1), nu + 1)
    with hiprec.working(precision):
        wv = mpc(hiprec.to_mp(w))
        aw = abs(wv)
        if aw <= 1:
            raise DomainError(f"series needs |w| > 1, got |w| = {aw}")
        geometric = 1 / (1 - 1 / aw)
        target = mpf(2) ** (-(precision + 8))
        winv = 1 / wv
        t = n + 1
        r0 = hiprec.to_mp(r0_eval(params, nu, t))
        power = winv ** (t - nu)  # w^(nu - t)
        total = mpc(0)
        count = t - nu - 1  # zero terms skipped
        limit = None if terms is None else nu + terms
        while True:
            if limit is not None and t > limit:
                break
            total += r0 * power
            count += 1
            ratio = mpf(t * (t - nu)) / ((t - n) * (t + n + 1))
            r0 *= ratio
            power *= winv
            t += 1
            if limit is None and t > t_star and abs(r0 * power) * geometric < target:
                break
        if t <= t_star:
            raise UsageError(f"need at least {math.ceil(t_star) - nu} terms for a valid tail bound")
        tail = abs(r0 * power) * geometric
        if nu % 2:
            total = -total
        return SeriesValue(hiprec.rounded(total, precision), hiprec.rounded(tail, precision), count)


# -- differential and contiguous identities --------------------------------

def check_ode(params: DeltaParams | int, nu: int) -> bool:
    """w (delta + 1 + d1 nu)(delta - d2 nu) f = delta (delta - nu) f for f = alpha(.; nu), exactly."""
    params = as_params(params)
    f = alpha_poly(params, nu)
    lhs = affine_delta(affine_delta(f, -params.d2 * nu), 1 + params.d1 * nu).shift(1)
    rhs = delta_op(affine_delta(f, -nu))
    return lhs == rhs


def contiguous_sides(params: DeltaParams | int, nu: int) -> tuple[RationalPoly, RationalPoly]:
    params = as_params(params)
    D, d1, d2 = params.delta, params.d1, params.d2
    left = alpha_poly(params, nu + 1)
    for kappa in range(1, d2 + 1):
        left = affine_delta(left, -d2 * nu - kappa)
    left = left * math.prod(nu * (D - 1) + kappa for kappa in range(1, D))
    right = alpha_poly(params, nu)
    for kappa in range(1, d1 + 1):
        right = affine_delta(right, d1 * nu + kappa)
    right = affine_delta(right, -nu) * math.prod(nu * D + kappa for kappa in range(1, D + 1))
    return left, right


def check_contiguous(params: DeltaParams | int, nu: int) -> bool:
    """Contiguous relation between alpha(.; nu + 1) and alpha(.; nu), exactly."""
    left, right = contiguous_sides(params, nu)
    return left == right
