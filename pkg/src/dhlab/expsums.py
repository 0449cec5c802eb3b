"""Exponential sums over primes and integers, and their smooth approximants.

All phases are reduced modulo 1 in double-double precision before the
trigonometric kernel is called, so ``e(n^2 * alpha)`` stays accurate even
when ``n^2 * alpha`` is far beyond 2**53 ulps of its fractional part.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial.legendre import leggauss

from .dd import compensated_sum, dd_mul, frac_dd, scaled_frac, two_prod, unit_phase
from .errors import DomainError, PrecisionExhausted
from .primes import PrimeTable
from .reals import PreciseReal, as_precise

_GL16 = leggauss(16)
_CHUNK = 1 << 22  # phase matrix entries per block
_T2_PANELS = 1 << 16


class Kind(enum.Enum):
    LINEAR = "linear"
    SQUARE = "square"


def snap_floor(x: float) -> int:
    """floor(x), treating values within 1e-9 relative of an integer as that integer."""
    r = round(x)
    return int(r) if abs(x - r) <= 1e-9 * max(1.0, abs(x)) else math.floor(x)


def snap_ceil(x: float) -> int:
    r = round(x)
    return int(r) if abs(x - r) <= 1e-9 * max(1.0, abs(x)) else math.ceil(x)


@dataclass(frozen=True)
class SumSpec:
    kind: Kind
    X: float
    delta: float
    weighted: bool = True

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise DomainError(f"delta must lie in (0, 1), got {self.delta}")
        if not self.X > 0:
            raise DomainError("X must be positive")

    @property
    def value_bounds(self) -> tuple[int, int]:
        """Integer bounds on f(n): ceil(delta X) <= f(n) <= floor(X)."""
        return snap_ceil(self.delta * self.X), snap_floor(self.X)

    @property
    def variable_bounds(self) -> tuple[int, int]:
        lo, hi = self.value_bounds
        if self.kind is Kind.LINEAR:
            return max(lo, 0), hi
        if hi < 0:
            return 1, 0
        return (math.isqrt(lo - 1) + 1 if lo > 0 else 0), math.isqrt(hi)


def sum_terms(spec: SumSpec, table: PrimeTable | None = None):
    """(frequencies f(n), weights) for the summands of ``spec``, as float arrays."""
    lo, hi = spec.variable_bounds
    if spec.weighted:
        if table is None:
            raise DomainError("weighted sums need a prime table")
        if hi < lo:
            n, w = np.zeros(0, np.int64), np.zeros(0)
        else:
            n, w = table.between(lo, hi)
    else:
        n = np.arange(max(lo, 0), hi + 1, dtype=np.int64)
        w = np.ones(len(n))
    k = n * n if spec.kind is Kind.SQUARE else n
    if len(k) and k[-1] >= 2**53:
        raise DomainError("frequencies beyond 2**53 are not exactly representable")
    return k.astype(np.float64), np.asarray(w, dtype=np.float64)


def as_dd_array(alpha):
    """Split ``alpha`` (float, array, (hi, lo) pair or PreciseReal) into dd arrays."""
    if isinstance(alpha, PreciseReal):
        hi, lo = alpha.dd
        return np.float64(hi), np.float64(lo)
    if isinstance(alpha, tuple):
        hi, lo = alpha
        return np.asarray(hi, dtype=np.float64), np.asarray(lo, dtype=np.float64)
    if isinstance(alpha, Fraction):
        return as_dd_array(PreciseReal.exact(alpha))
    hi = np.asarray(alpha, dtype=np.float64)
    return hi, np.zeros_like(hi)


def scale(lam, alpha):
    """lam * alpha as a double-double pair (lam: any real, alpha: as above)."""
    l_hi, l_lo = as_precise(lam).dd
    a_hi, a_lo = as_dd_array(alpha)
    return dd_mul(np.float64(l_hi), np.float64(l_lo), a_hi, a_lo)


def exp_sum_terms(k, w, alpha):
    """sum_j w_j e(k_j alpha), vectorised over ``alpha`` with compensated sums."""
    a_hi, a_lo = as_dd_array(alpha)
    shape = np.shape(a_hi)
    a_hi = np.ravel(a_hi)
    a_lo = np.ravel(np.broadcast_to(a_lo, shape))
    out = np.zeros(a_hi.shape, dtype=np.complex128)
    if len(k):
        step = max(1, _CHUNK // len(k))
        for s in range(0, len(a_hi), step):
            fr = scaled_frac(k[None, :], a_hi[s : s + step, None], a_lo[s : s + step, None])
            out[s : s + step] = compensated_sum(w[None, :] * unit_phase(fr), axis=-1)
    return out.reshape(shape) if shape else complex(out[0])


def prime_exp_sum(spec: SumSpec, alpha, table: PrimeTable | None = None):
    """S1/S2 (weighted, prime support) or U1/U2 (unweighted, all integers) at ``alpha``."""
    k, w = sum_terms(spec, table)
    return exp_sum_terms(k, w, alpha)


def geometric_U1(alpha: float, X: float, delta: float) -> complex:
    """Closed form of the unweighted linear sum, for cross-checks."""
    lo, hi = SumSpec(Kind.LINEAR, X, delta, weighted=False).variable_bounds
    n = hi - lo + 1
    if n <= 0:
        return 0j
    z = unit_phase(frac_dd(np.float64(alpha), 0.0))
    if abs(z - 1) < 1e-12:
        return complex(n)
    start = unit_phase(scaled_frac(np.float64(lo), np.float64(alpha), 0.0))
    zn = unit_phase(scaled_frac(np.float64(n), np.float64(alpha), 0.0))
    return complex(start * (zn - 1) / (z - 1))


# smooth approximants --------------------------------------------------------------

def _check_delta(delta):
    if not 0 <= delta < 1:
        raise DomainError(f"delta must lie in [0, 1), got {delta}")


def _t1(alpha, X, delta):
    length = (1 - delta) * X
    centre = (1 + delta) * X / 2
    p, e = two_prod(np.float64(centre), np.float64(alpha))
    return complex(unit_phase(frac_dd(p, e)) * length * np.sinc(length * alpha))


def _t2(alpha, X, delta):
    t0, t1 = math.sqrt(delta * X), math.sqrt(X)
    u0, u1 = t0 * t0, t1 * t1
    panels = max(1, math.ceil(4 * abs(alpha) * (u1 - u0)))
    x, wg = _GL16
    parts = []
    for first in range(0, panels, _T2_PANELS):
        last = min(first + _T2_PANELS, panels)
        edges = np.sqrt(u0 + (u1 - u0) * np.arange(first, last + 1) / panels)
        if first == 0:
            edges[0] = t0
        if last == panels:
            edges[-1] = t1
        a, b = edges[:-1, None], edges[1:, None]
        t = (a + b) / 2 + (b - a) / 2 * x[None, :]
        wt = (b - a) / 2 * wg[None, :]
        sq_hi, sq_lo = two_prod(t, t)
        ph_hi, ph_lo = dd_mul(sq_hi, sq_lo, np.float64(alpha), 0.0)
        parts.append(compensated_sum((wt * unit_phase(frac_dd(ph_hi, ph_lo))).ravel()))
    return complex(compensated_sum(np.array(parts)))


def smooth_approx(kind: Kind, alpha, X: float, delta: float):
    """T1 (closed form) or T2 (panel Gauss-Legendre) at ``alpha``; vectorised over alpha.

    T2 panels are uniform in t^2 so the phase changes by at most pi/2 on each.
    """
    _check_delta(delta)
    if not X > 0:
        raise DomainError("X must be positive")
    fn = _t1 if kind is Kind.LINEAR else _t2
    a = np.asarray(alpha, dtype=np.float64)
    if a.ndim == 0:
        return fn(float(a), X, delta)
    return np.array([fn(float(v), X, delta) for v in a.ravel()]).reshape(a.shape)


def powers_of_two_sum(alpha, L: int) -> complex:
    """G(alpha) = sum_{1 <= n <= L} e(2^n alpha), reduced by exact doubling mod 1."""
    if L < 1:
        raise DomainError("L must be >= 1")
    x = as_precise(alpha)
    if not x.is_exact and x.width * 2**L > Fraction(1, 2**40):
        raise PrecisionExhausted("alpha bracket too wide for 2^L alpha mod 1")
    r = x.mid % 1
    terms = []
    for _ in range(L):
        r = (2 * r) % 1
        terms.append(float(r if r <= Fraction(1, 2) else r - 1))
    z = unit_phase(np.array(terms))
    return complex(math.fsum(z.real), math.fsum(z.imag))


def dichotomy_V(alpha, lambda1, lambda2, linear: SumSpec, square: SumSpec,
                linear_table: PrimeTable, square_table: PrimeTable):
    """V(alpha) = min(|S1(lambda1 alpha)|^(1/2), |S2(lambda2 alpha)|), vectorised."""
    s1 = prime_exp_sum(linear, scale(lambda1, alpha), linear_table)
    s2 = prime_exp_sum(square, scale(lambda2, alpha), square_table)
    return np.minimum(np.sqrt(np.abs(s1)), np.abs(s2))
