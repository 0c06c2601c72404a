"""Arbitrary-precision real and complex evaluation on top of mpmath.

Reals are ``mpmath.mpf`` and complex values are ``mpmath.mpc``; every
function that produces one takes an explicit ``precision`` in bits, works
internally with :data:`GUARD_BITS` extra bits and rounds the result back.

mpmath keeps the working precision in a process-global context.  Results
are immutable, but arithmetic *between* results happens at whatever the
global precision is, so do downstream arithmetic inside :func:`working`.
Parallel callers should use processes, not threads (the CLI does).
"""

from __future__ import annotations

from contextlib import contextmanager
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from numbers import Rational
from typing import Iterator, Union

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError, UsageError

MIN_PRECISION = 64
DEFAULT_PRECISION = 128
GUARD_BITS = 32

HiPrecReal = mpf
HiPrecComplex = mpc
Number = Union[int, Fraction, float, str, mpf, mpc, complex]

ELEMENTARY = ("log", "sqrt", "atan", "tan", "cos", "cot", "exp", "pi")


def check_precision(precision: int) -> int:
    if not isinstance(precision, int) or precision < MIN_PRECISION:
        raise UsageError(f"precision must be an integer >= {MIN_PRECISION} bits, got {precision!r}")
    return precision


@contextmanager
def working(precision: int, guard: int = GUARD_BITS) -> Iterator[None]:
    """Run the body at ``precision + guard`` bits."""
    check_precision(precision)
    with mp.workprec(precision + guard):
        yield


def to_mp(x: Number) -> mpf | mpc:
    """Convert an exact or floating value at the current working precision."""
    if isinstance(x, (mpf, mpc)):
        return x
    if isinstance(x, bool):
        return mpf(int(x))
    if isinstance(x, int):
        return mpf(x)
    if isinstance(x, Rational):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, complex):
        return mpc(x)
    return mpf(x)


def rounded(x: mpf | mpc, precision: int) -> mpf | mpc:
    """Round ``x`` to ``precision`` bits."""
    with mp.workprec(precision):
        return +x


def real(x: Number, precision: int = DEFAULT_PRECISION) -> mpf:
    check_precision(precision)
    with mp.workprec(precision):
        return +to_mp(x)


def cplx(re: Number, im: Number = 0, precision: int = DEFAULT_PRECISION) -> mpc:
    check_precision(precision)
    with mp.workprec(precision):
        return mpc(to_mp(re), to_mp(im))


def _is_zero_sin(x, eps) -> bool:
    return abs(mpmath.sin(x)) <= eps * max(1, abs(x))


def eval_elementary(fn: str, x: Number | None = None, precision: int = DEFAULT_PRECISION):
    """Evaluate one of :data:`ELEMENTARY` at ``x`` with ``precision`` bits.

    Real input stays real: ``log`` and ``sqrt`` of a negative real raise
    :class:`DomainError` instead of returning a complex number.  Complex
    ``log`` is the principal branch.
    """
    check_precision(precision)
    if fn not in ELEMENTARY:
        raise UsageError(f"unknown elementary function {fn!r}")
    with working(precision):
        if fn == "pi":
            return rounded(+mp.pi, precision)
        if x is None:
            raise UsageError(f"{fn} needs an argument")
        v = to_mp(x)
        is_real = isinstance(v, mpf)
        eps = mpf(2) ** (-(precision + GUARD_BITS // 2))
        if fn == "log":
            if v == 0:
                raise DomainError("log(0)")
            if is_real and v < 0:
                raise DomainError(f"log of negative real {v}")
            y = mpmath.log(v)
        elif fn == "sqrt":
            if is_real and v < 0:
                raise DomainError(f"sqrt of negative real {v}")
            y = mpmath.sqrt(v)
        elif fn == "atan":
            if not is_real and (v == mpc(0, 1) or v == mpc(0, -1)):
                raise DomainError("atan(+-i)")
            y = mpmath.atan(v)
        elif fn == "tan":
            if is_real and abs(mpmath.cos(v)) <= eps:
                raise DomainError(f"tan pole at {v}")
            y = mpmath.tan(v)
        elif fn == "cos":
            y = mpmath.cos(v)
        elif fn == "cot":
            if is_real and _is_zero_sin(v, eps):
                raise DomainError(f"cot pole at {v}")
            if not is_real and v == 0:
                raise DomainError("cot(0)")
            y = mpmath.cot(v)
        else:
            y = mpmath.exp(v)
        if not mpmath.isfinite(y):
            raise DomainError(f"{fn}({v}) is not finite")
        return rounded(y, precision)


def principal_log_one_minus_inverse(w: Number, precision: int = DEFAULT_PRECISION) -> mpc:
    """Return ``-log(1 - 1/w)`` on the principal branch.

    At the cyclotomic evaluation points ``w = -1/(1 + zeta^k)`` the argument
    ``1 - 1/w`` equals ``2 + zeta^k``, whose real part exceeds 1.
    """
    check_precision(precision)
    with working(precision):
        wv = mpc(to_mp(w))
        if wv == 0:
            raise DomainError("w = 0")
        y = 1 - 1 / wv
        if y.imag == 0 and y.real <= 0:
            raise DomainError(f"1 - 1/w = {y} lies on the branch cut")
        return rounded(-mpmath.log(y), precision)


def fixed(x: Number, digits: int = 12) -> str:
    """Fixed-point decimal string with ``digits`` significant digits."""
    v = to_mp(x)
    if isinstance(v, mpc):
        raise UsageError("fixed() takes a real value")
    return mpmath.nstr(v, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf, strip_zeros=False)


def quantize(x: Number, places: int = 6) -> str:
    """Decimal string rounded half-even to ``places`` digits after the point."""
    v = to_mp(x)
    with mp.workprec(max(mp.prec, 128)):
        text = mpmath.nstr(v, places + 30, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
    q = Decimal(text).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)
    return f"{q:f}"
