"""Mean values of S1 and S2 over a period, and the Selberg integrals J, J*.

Orthogonality turns each mean value into a count: the integral of
|S1|^2 over [0, 1) is the sum of log^2 p, and the integral of |S2|^4 is a
weighted count of p1^2 + p2^2 = p3^2 + p4^2.  Both are also computed by an
equispaced Riemann sum, which is exact once the node count exceeds the
degree of the trigonometric polynomial.
"""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from ..errors import CoverageError, DomainError
from ..expsums import Kind, SumSpec, prime_exp_sum, snap_floor, sum_terms
from ..primes import PrimeTable

_GL = leggauss(16)


@dataclass
class L2Mean:
    exact: float
    quadrature: float | None
    nodes: int


@dataclass
class L4Mean:
    exact: float
    diagonal: float
    offdiagonal: float
    quadrature: float | None
    nodes: int


def _riemann_power(spec: SumSpec, table, power: int, nodes: int) -> float:
    alpha = np.arange(nodes) / nodes
    s = prime_exp_sum(spec, alpha, table)
    return math.fsum(np.abs(s) ** power) / nodes


def mean_value_L2(X: float, delta: float, table: PrimeTable, nodes: int | None = None,
                  quadrature: bool = True) -> L2Mean:
    spec = SumSpec(Kind.LINEAR, X, delta)
    _, w = sum_terms(spec, table)
    n = nodes if nodes is not None else 2 * snap_floor(X) + 3
    if n <= snap_floor(X):
        raise DomainError("too few nodes for an exact Riemann sum")
    quad = None
    if quadrature:
        quad = _riemann_power(spec, table, 2, n) if len(w) else 0.0
    return L2Mean(math.fsum(w * w), quad, n)


def mean_value_L4(X: float, delta: float, table: PrimeTable, nodes: int | None = None,
                  quadrature: bool = True) -> L4Mean:
    spec = SumSpec(Kind.SQUARE, X, delta)
    lo, hi = spec.variable_bounds
    if hi < lo:
        raise DomainError("square range is empty")
    k, w = sum_terms(spec, table)
    if not len(k):
        raise DomainError("square range holds no primes")
    pair = defaultdict(float)
    n2 = k.astype(np.int64)
    for a, wa in zip(n2.tolist(), w.tolist()):
        for b, wb in zip(n2.tolist(), w.tolist()):
            pair[a + b] += wa * wb
    exact = math.fsum(v * v for v in pair.values())
    diag = []
    for i, wa in enumerate(w.tolist()):
        for j, wb in enumerate(w.tolist()):
            diag.append((wa * wb) ** 2 * (1 if i == j else 2))
    diagonal = math.fsum(diag)
    n = nodes if nodes is not None else 4 * snap_floor(X) + 3
    quad = _riemann_power(spec, table, 4, n) if quadrature else None
    return L4Mean(exact, diagonal, exact - diagonal, quad, n)


# Selberg integrals --------------------------------------------------------------------

class Variant(enum.Enum):
    LINEAR = "linear"
    SQRT = "sqrt"


def _gl_integral(f, a, b):
    """Piecewise 16-point Gauss-Legendre of a smooth vectorised f over [a_i, b_i]."""
    x, w = _GL
    mid, half = (a + b) / 2, (b - a) / 2
    pts = mid[:, None] + half[:, None] * x[None, :]
    return (f(pts) * w[None, :]).sum(axis=1) * half


def selberg_J(X: float, h: float, delta: float, variant: Variant, table: PrimeTable) -> float:
    """J(X, h) or J*(X, h) by an exact sweep over the breakpoints of the prime count.

    On each piece between consecutive breakpoints the prime part of the
    integrand is constant; the smooth part sqrt(x+h) - sqrt(x) (J* only) is
    integrated by Gauss-Legendre, exact to rounding on such short analytic pieces.
    """
    if not h > 0:
        raise DomainError("h must be positive")
    a0, a1 = delta * X, X
    if variant is Variant.LINEAR:
        need_lo, need_hi = a0, a1 + h
        keys = table.primes.astype(np.float64)
    else:
        need_lo, need_hi = math.sqrt(a0), math.sqrt(a1 + h)
        keys = table.primes.astype(np.float64) ** 2
    if not table.covers(need_lo, need_hi):
        raise CoverageError(f"table must cover [{need_lo}, {need_hi}]")
    cum = np.concatenate(([0.0], np.cumsum(table.logs)))
    cuts = np.concatenate((keys, keys - h))
    cuts = cuts[(cuts > a0) & (cuts < a1)]
    edges = np.unique(np.concatenate(([a0, a1], cuts)))
    left, right = edges[:-1], edges[1:]
    mid = (left + right) / 2
    # primes with x < key <= x + h, constant on each piece
    count = cum[np.searchsorted(keys, mid + h, side="right")] - cum[np.searchsorted(keys, mid, side="right")]
    length = right - left
    if variant is Variant.LINEAR:
        return math.fsum(length * (count - h) ** 2)
    g = lambda x: h / (np.sqrt(x + h) + np.sqrt(x))  # noqa: E731
    g1 = _gl_integral(g, left, right)
    g2 = _gl_integral(lambda x: g(x) ** 2, left, right)
    return math.fsum(count * count * length - 2 * count * g1 + g2)
