"""Continued fractions, Dirichlet approximation and the X = q^(9/5) ladder."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import DomainError, PrecisionExhausted
from .reals import PreciseReal, as_precise

LADDER_EXPONENT = 9 / 5


@dataclass(frozen=True)
class Convergent:
    a: int
    q: int
    quality: float  # |q xi - a|

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.q)


def _partial_quotients(xi: PreciseReal) -> Iterator[int]:
    """Yield certified partial quotients; raise PrecisionExhausted when they stop."""
    lo, hi = xi.lo, xi.hi
    while True:
        a = math.floor(lo)
        if math.floor(hi) != a:
            raise PrecisionExhausted("partial quotient not certified")
        yield a
        lo, hi = lo - a, hi - a
        if lo == hi == 0:
            return
        if lo <= 0:
            raise PrecisionExhausted("remainder interval reaches zero")
        lo, hi = 1 / hi, 1 / lo


def _all_convergents(xi: PreciseReal) -> Iterator[tuple[int, int]]:
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in _partial_quotients(xi):
        p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        yield p0, q0


def _make(xi: PreciseReal, a: int, q: int) -> Convergent:
    return Convergent(a, q, float(abs(q * xi.mid - a)))


def continued_fraction(xi, count: int) -> list[Convergent]:
    """First ``count`` convergents of ``xi``.

    ``xi`` may be a float (taken exactly), a Fraction, a literal string or a
    :class:`PreciseReal`.  A leading convergent with numerator zero (when
    ``0 <= xi < 1``) is skipped; rational inputs stop at their last
    convergent.  If the bracket of ``xi`` is too wide to certify ``count``
    convergents, :class:`PrecisionExhausted` carries the certified prefix.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    x = as_precise(xi)
    out: list[Convergent] = []
    try:
        for a, q in _all_convergents(x):
            if a == 0 and not out and q == 1 and x.mid != 0:
                continue
            out.append(_make(x, a, q))
            if len(out) == count:
                break
    except PrecisionExhausted as exc:
        raise PrecisionExhausted(
            f"only {len(out)} of {count} convergents certified", out
        ) from exc
    return out


def dirichlet_approx(alpha, N: int) -> Convergent:
    """(a, q) with 1 <= q <= N and |q alpha - a| <= 1/(N+1).

    The last convergent with denominator <= N does the job, since the next
    denominator is at least N + 1.  Zero numerators are allowed here.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    x = as_precise(alpha)
    best = None
    try:
        for a, q in _all_convergents(x):
            if q > N:
                break
            best = (a, q)
    except PrecisionExhausted:
        if best is None:
            raise
    return _make(x, *best)


def choose_X(q: int) -> float:
    if q < 1:
        raise DomainError("q must be >= 1")
    r = round(q ** 0.2)
    if r**5 == q:
        return float(r**9)
    return float(q) ** LADDER_EXPONENT


def ladder(xi, count: int, min_q: int = 1) -> list[tuple[Convergent, float]]:
    """Convergents of ``xi`` with q >= min_q, paired with X = q^(9/5).

    Returns the certified part only (never raises on exhausted precision).
    """
    try:
        convs = continued_fraction(xi, count)
    except PrecisionExhausted as exc:
        convs = exc.convergents
    return [(c, choose_X(c.q)) for c in convs if c.q >= min_q]
