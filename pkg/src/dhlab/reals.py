"""Certified high-precision reals.

A :class:`PreciseReal` is a closed interval with exact rational endpoints.
Irrational constants are bracketed at a chosen number of bits, so any
digit that is identical at both endpoints is certified.  Plain floats are
taken as the exact dyadic rationals they are.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DomainError

DEFAULT_BITS = 128


@dataclass(frozen=True)
class PreciseReal:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise DomainError("interval endpoints out of order")

    # construction -------------------------------------------------------
    @classmethod
    def exact(cls, x) -> "PreciseReal":
        f = Fraction(x)
        return cls(f, f)

    @classmethod
    def sqrt(cls, n: int, bits: int = DEFAULT_BITS) -> "PreciseReal":
        if n < 0:
            raise DomainError("sqrt of a negative integer")
        r = math.isqrt(n)
        if r * r == n:
            return cls.exact(r)
        s = math.isqrt(n << (2 * bits))
        return cls(Fraction(s, 1 << bits), Fraction(s + 1, 1 << bits))

    @classmethod
    def from_mpmath(cls, fn, bits: int = DEFAULT_BITS) -> "PreciseReal":
        with mpmath.workprec(bits + 32):
            man, exp = mpmath.mpf(fn()).man_exp
        v = Fraction(int(man)) * Fraction(2) ** int(exp)
        pad = Fraction(1, 1 << bits)
        return cls(v - pad, v + pad)

    @classmethod
    def pi(cls, bits: int = DEFAULT_BITS) -> "PreciseReal":
        return cls.from_mpmath(lambda: mpmath.pi, bits)

    @classmethod
    def e(cls, bits: int = DEFAULT_BITS) -> "PreciseReal":
        return cls.from_mpmath(lambda: mpmath.e, bits)

    # views ----------------------------------------------------------------
    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def dd(self) -> tuple[float, float]:
        """The midpoint as an unevaluated double-double sum ``hi + lo``."""
        m = self.mid
        hi = float(m)
        return hi, float(m - Fraction(hi))

    def __float__(self) -> float:
        return float(self.mid)

    def sign(self) -> int:
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.is_exact:
            return 0
        raise DomainError("sign of an interval straddling zero is undecided")

    # arithmetic (interval) -----------------------------------------------------
    def __neg__(self) -> "PreciseReal":
        return PreciseReal(-self.hi, -self.lo)

    def __add__(self, other) -> "PreciseReal":
        o = as_precise(other)
        return PreciseReal(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "PreciseReal":
        return self + (-as_precise(other))

    def __mul__(self, other) -> "PreciseReal":
        o = as_precise(other)
        c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return PreciseReal(min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PreciseReal":
        o = as_precise(other)
        if o.lo <= 0 <= o.hi:
            raise DomainError("division by an interval containing zero")
        return self * PreciseReal(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other) -> "PreciseReal":
        return as_precise(other) / self

    def __abs__(self) -> "PreciseReal":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return PreciseReal(Fraction(0), max(-self.lo, self.hi))


def as_precise(x) -> PreciseReal:
    if isinstance(x, PreciseReal):
        return x
    if isinstance(x, str):
        return parse_literal(x)
    return PreciseReal.exact(x)


def to_dd(x) -> tuple[float, float]:
    return as_precise(x).dd


_SQRT = re.compile(r"^sqrt\(?(\d+)\)?$")


def parse_literal(text, bits: int = DEFAULT_BITS) -> PreciseReal:
    """Parse ``sqrt2``, ``sqrt(5)``, ``pi``, ``e``, ``p/q``, decimals; optional sign."""
    if not isinstance(text, str):
        if isinstance(text, bool) or not isinstance(text, (int, float)):
            raise DomainError(f"unsupported literal {text!r}")
        if isinstance(text, float) and not math.isfinite(text):
            raise DomainError("non-finite literal")
        return PreciseReal.exact(text)
    s = text.strip().lower().replace(" ", "")
    neg = s.startswith("-")
    if s[:1] in "+-":
        s = s[1:]
    if not s:
        raise DomainError(f"empty literal {text!r}")
    m = _SQRT.match(s)
    if m:
        v = PreciseReal.sqrt(int(m.group(1)), bits)
    elif s == "pi":
        v = PreciseReal.pi(bits)
    elif s == "e":
        v = PreciseReal.e(bits)
    else:
        try:
            v = PreciseReal.exact(Fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse literal {text!r}") from exc
    return -v if neg else v
