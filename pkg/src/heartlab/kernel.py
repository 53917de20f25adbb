"""Extended-precision scalars, log-scale combinators and a bracketing root finder.

Connection parameters at ``n`` turns sit at ``eps ~ exp(-exp(n * gamma))``,
far below the double range after a handful of turns, so everything downstream
works with logarithms of small quantities and with the double-log chart
``sigma = ln(-ln eps)``.

Scalars are :class:`mpmath.mpf` values bound to an :class:`mpmath.MPContext`
created per precision by :func:`context`.  Addition, subtraction,
multiplication and division are correctly rounded (round-to-nearest);
``exp``, ``ln``, ``log1p`` and ``power`` are faithfully rounded.  The binary
exponent range of mpmath is unbounded, which covers the required ``2**40``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable

import mpmath

from .errors import BracketError, DomainError, SignDomainError

DEFAULT_PRECISION = 256
DEFAULT_TOL = 1e-24


@functools.lru_cache(maxsize=None)
def context(prec: int = DEFAULT_PRECISION) -> mpmath.MPContext:
    """Return a private mpmath context working at ``prec`` mantissa bits.

    Contexts are cached and must be treated as read-only; never assign to
    ``ctx.prec`` on a returned object.
    """
    prec = int(prec)
    if prec < 53:
        raise DomainError(f"precision must be at least 53 bits, got {prec}")
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def ctx_of(x, default_prec: int = DEFAULT_PRECISION) -> mpmath.MPContext:
    """Context an mpf belongs to, or the default context for plain numbers."""
    ctx = getattr(x, "context", None)
    if isinstance(ctx, mpmath.MPContext):
        return ctx
    return context(default_prec)


def required_precision(depth: int, gamma) -> int:
    """Working precision (bits) for orbits of ``depth`` turns with growth ``gamma``.

    ``ceil((depth + 5) * gamma / ln 2) + 64``: the doubly exponential scale
    ``exp(depth * gamma)`` of ``-ln eps`` eats that many bits before any
    fractional digits survive, and 64 guard bits remain on top.
    """
    if int(depth) != depth or depth < 1:
        raise DomainError(f"depth must be a positive integer, got {depth!r}")
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    ctx = context(max(DEFAULT_PRECISION, 64 + 4 * int(depth)))
    bits = ctx.ceil((int(depth) + 5) * ctx.mpf(gamma) / ctx.ln2)
    return int(bits) + 64


@dataclass(frozen=True)
class LnValue:
    """A real number stored as ``sign * exp(ln)``.

    ``sign`` is -1, 0 or 1; ``ln`` is ``None`` exactly when ``sign == 0``.
    """

    sign: int
    ln: object = None

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or 1, got {self.sign!r}")
        if self.sign == 0:
            if self.ln is not None:
                raise DomainError("zero LnValue carries no logarithm")
        elif self.ln is None or not mpmath.isfinite(self.ln):
            raise DomainError("non-zero LnValue needs a finite logarithm")

    @classmethod
    def positive(cls, ln) -> "LnValue":
        return cls(1, ln)

    @classmethod
    def negative(cls, ln) -> "LnValue":
        return cls(-1, ln)

    @classmethod
    def zero(cls) -> "LnValue":
        return cls(0, None)

    @classmethod
    def from_real(cls, x, ctx=None) -> "LnValue":
        ctx = ctx or ctx_of(x)
        x = ctx.mpf(x)
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, ctx.ln(abs(x)))

    def to_real(self, ctx=None):
        ctx = ctx or ctx_of(self.ln)
        if self.sign == 0:
            return ctx.zero
        return self.sign * ctx.exp(self.ln)

    def __neg__(self) -> "LnValue":
        return LnValue(-self.sign, self.ln)

    @property
    def is_positive(self) -> bool:
        return self.sign > 0


def ln_diff(a: LnValue, b: LnValue) -> LnValue:
    """``ln(e**a - e**b)`` for positive ``a`` and non-negative ``b`` with ``a > b``.

    Evaluated as ``a + log1p(-exp(b - a))`` so no cancellation occurs when
    ``b`` is many orders of magnitude below ``a``.
    """
    if a.sign != 1 or b.sign < 0:
        raise SignDomainError("ln_diff needs a positive minuend and non-negative subtrahend")
    if b.sign == 0:
        return a
    if not a.ln > b.ln:
        raise SignDomainError(f"ln_diff needs a > b, got a={a.ln}, b={b.ln}")
    ctx = ctx_of(a.ln)
    gap = b.ln - a.ln
    return LnValue(1, a.ln + ctx.log1p(-ctx.exp(gap)))


def ln_sum(a: LnValue, b: LnValue) -> LnValue:
    """``ln(e**a + e**b)`` for two non-negative values."""
    if a.sign < 0 or b.sign < 0:
        raise SignDomainError("ln_sum takes non-negative operands")
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    ctx = ctx_of(a.ln)
    hi, lo = (a.ln, b.ln) if a.ln >= b.ln else (b.ln, a.ln)
    return LnValue(1, hi + ctx.log1p(ctx.exp(lo - hi)))


def ln_sub(a: LnValue, b: LnValue) -> LnValue:
    """Signed difference ``a - b`` of two non-negative values."""
    if a.sign < 0 or b.sign < 0:
        raise SignDomainError("ln_sub takes non-negative operands")
    if b.sign == 0:
        return a
    if a.sign == 0:
        return -b
    if a.ln == b.ln:
        return LnValue.zero()
    if a.ln > b.ln:
        return ln_diff(a, b)
    return -ln_diff(b, a)


@dataclass(frozen=True)
class BisectionInfo:
    lo: object
    hi: object
    f_lo: object
    f_hi: object
    steps: int


def _sign(v) -> int:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def bisect_monotone(
    f: Callable,
    lo,
    hi,
    tol=DEFAULT_TOL,
    *,
    max_steps: int = 10_000,
    full_output: bool = False,
):
    """Root of a monotone ``f`` on ``[lo, hi]`` by plain bisection.

    Only the sign of ``f`` is used, so ``f`` may return ``-inf``/``+inf``
    away from the root.  The midpoint of the final bracket is returned; the
    bracket has width ``<= tol`` and ``f`` changes sign across it.  An exact
    zero at a probe point ends the search early.

    Raises :class:`BracketError` when ``f(lo)`` and ``f(hi)`` share a sign.
    """
    ctx = ctx_of(lo) if not isinstance(lo, (int, float)) else ctx_of(hi)
    lo, hi, tol = ctx.mpf(lo), ctx.mpf(hi), ctx.mpf(tol)
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if not lo < hi:
        raise DomainError(f"empty bracket [{lo}, {hi}]")
    f_lo, f_hi = f(lo), f(hi)
    s_lo, s_hi = _sign(f_lo), _sign(f_hi)
    if s_lo == 0:
        return (lo, BisectionInfo(lo, lo, f_lo, f_lo, 0)) if full_output else lo
    if s_hi == 0:
        return (hi, BisectionInfo(hi, hi, f_hi, f_hi, 0)) if full_output else hi
    if s_lo == s_hi:
        raise BracketError(
            f"no sign change on [{mpmath.nstr(lo, 15)}, {mpmath.nstr(hi, 15)}]: "
            f"f(lo)={mpmath.nstr(f_lo, 8)}, f(hi)={mpmath.nstr(f_hi, 8)}",
            lo, hi, f_lo, f_hi,
        )
    steps = 0
    while hi - lo > tol:
        if steps >= max_steps:
            break
        mid = (lo + hi) / 2
        if mid <= lo or mid >= hi:
            # bracket already at one ulp
            break
        f_mid = f(mid)
        steps += 1
        s_mid = _sign(f_mid)
        if s_mid == 0:
            lo = hi = mid
            f_lo = f_hi = f_mid
            break
        if s_mid == s_lo:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    root = (lo + hi) / 2
    if full_output:
        return root, BisectionInfo(lo, hi, f_lo, f_hi, steps)
    return root


def bits_to_digits(prec: int) -> int:
    """Decimal digits that a ``prec``-bit mantissa carries faithfully."""
    return max(15, int(math.floor(prec * math.log10(2))) - 2)
