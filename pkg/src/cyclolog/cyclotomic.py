"""Exact arithmetic in Q(zeta_m) on the power basis modulo Phi_m.

Elements carry rational coordinates on 1, zeta, ..., zeta^(phi(m)-1).
Embeddings are indexed 1..phi(m) by the residues 1, -1, 2, -2, ...
coprime to m, so embedding 1 is zeta -> exp(2 pi i / m).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterable

import mpmath
from mpmath import mp

from . import _poly, hiprec
from .errors import DomainError, UsageError
from .numtheory import IntPoly, cyclotomic_poly, euler_phi


@dataclass(frozen=True, eq=False)
class CyclotomicContext:
    m: int
    phi_m: int = field(init=False)
    modulus_poly: IntPoly = field(init=False)
    residues: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.m < 3:
            raise UsageError(f"cyclotomic context needs m >= 3, got {self.m}")
        object.__setattr__(self, "phi_m", euler_phi(self.m))
        object.__setattr__(self, "modulus_poly", cyclotomic_poly(self.m))
        ks = []
        for k in range(1, (self.m + 1) // 2):
            if gcd(k, self.m) == 1:
                ks += [k, -k]
        object.__setattr__(self, "residues", tuple(ks))

    def __eq__(self, other):
        return isinstance(other, CyclotomicContext) and other.m == self.m

    def __hash__(self):
        return hash(("CyclotomicContext", self.m))

    def __repr__(self):
        return f"CyclotomicContext(m={self.m})"

    def elem(self, coeffs: Iterable) -> "CycElem":
        return CycElem(self, coeffs)

    def const(self, c) -> "CycElem":
        return CycElem(self, [c])

    @cached_property
    def zeta(self) -> "CycElem":
        return CycElem(self, [0, 1])

    def zeta_power(self, k: int) -> "CycElem":
        return CycElem(self, [0] * (k % self.m) + [1])

    def embedding_residue(self, j: int) -> int:
        if not 1 <= j <= self.phi_m:
            raise UsageError(f"embedding index must be in 1..{self.phi_m}, got {j}")
        return self.residues[j - 1]


@lru_cache(maxsize=None)
def context(m: int) -> CyclotomicContext:
    return CyclotomicContext(m)


def _reduce(ctx: CyclotomicContext, coeffs) -> tuple[Fraction, ...]:
    p = _poly.trim([Fraction(c) for c in coeffs])
    if len(p) > ctx.phi_m:
        _, p = _poly.divmod_poly(p, list(ctx.modulus_poly.coefficients))
    p = list(p) + [Fraction(0)] * (ctx.phi_m - len(p))
    return tuple(p)


class CycElem:
    """Element of Q(zeta_m), immutable, always reduced modulo Phi_m."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: CyclotomicContext, coeffs: Iterable):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", _reduce(ctx, coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CycElem is immutable")

    def __repr__(self):
        return f"CycElem(m={self.ctx.m}, {[str(c) for c in self.coeffs]})"

    def _coerce(self, other) -> "CycElem":
        if isinstance(other, CycElem):
            if other.ctx != self.ctx:
                raise UsageError(f"context mismatch: m={self.ctx.m} vs m={other.ctx.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycElem(self.ctx, [other])
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.ctx.m, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycElem(self.ctx, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycElem(self.ctx, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycElem(self.ctx, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycElem(self.ctx, _poly.mul(list(self.coeffs), list(o.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = CycElem(self.ctx, [1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def inverse(self) -> "CycElem":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta_m)")
        g, s, _ = _poly.ext_gcd(list(self.coeffs), list(self.ctx.modulus_poly.coefficients))
        # Phi_m is irreducible, so gcd is 1 for any nonzero element
        return CycElem(self.ctx, s)

    @property
    def is_integer(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def norm(self) -> Fraction:
        return norm(self)

    def embed(self, j: int, precision: int = hiprec.DEFAULT_PRECISION):
        return embed(self, j, precision)

    def house(self, precision: int = hiprec.DEFAULT_PRECISION):
        return house(self, precision)


def norm(a: CycElem) -> Fraction:
    """Product of all conjugates, as the resultant Res(Phi_m, a)."""
    if not a:
        return Fraction(0)
    return _poly.resultant(list(a.ctx.modulus_poly.coefficients), _poly.trim(list(a.coeffs)))


def _embed_raw(a: CycElem, k: int):
    z = mpmath.expjpi(mpmath.mpf(2 * k) / a.ctx.m)
    acc = mpmath.mpc(0)
    for c in reversed(a.coeffs):
        acc = acc * z + hiprec.to_mp(c)
    return acc


def embed(a: CycElem, j: int, precision: int = hiprec.DEFAULT_PRECISION):
    """sigma_j(a) with zeta -> exp(2 pi i k_j / m)."""
    k = a.ctx.embedding_residue(j)
    with hiprec.working(precision):
        return hiprec.rounded(_embed_raw(a, k), precision)


def embeddings(a: CycElem, precision: int = hiprec.DEFAULT_PRECISION) -> list:
    return [embed(a, j, precision) for j in range(1, a.ctx.phi_m + 1)]


def house(a: CycElem, precision: int = hiprec.DEFAULT_PRECISION):
    """max_j |sigma_j(a)|."""
    with hiprec.working(precision):
        best = max(abs(_embed_raw(a, k)) for k in a.ctx.residues)
        return hiprec.rounded(best, precision)


def theta0_elem(ctx: CyclotomicContext, k: int) -> CycElem:
    """-1/(1 + zeta^k)."""
    if gcd(abs(k), ctx.m) != 1:
        raise DomainError(f"residue {k} is not coprime to m={ctx.m}")
    return -(1 + ctx.zeta_power(k)).inverse()


def theta0_value(m: int, k: int, precision: int):
    """Complex value of -1/(1 + exp(2 pi i k/m)) at ``precision`` bits (no rounding step)."""
    with mp.workprec(precision):
        return -1 / (1 + mpmath.expjpi(mpmath.mpf(2 * k) / m))
