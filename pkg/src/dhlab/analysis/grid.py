"""Quadrature grids factored as block starts + in-block offsets.

Every node is ``start[b] + offset[i]``.  Because ``e(k(s + o)) = e(ks) e(ko)``,
an exponential sum over all nodes is a complex matrix product of a
(blocks x terms) matrix by a (terms x offsets) matrix; phases of both
factors are reduced in double-double precision, so no recurrence error
accumulates along the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from ..dd import dd_mul, scaled_frac, unit_phase
from ..reals import as_precise

GL_ORDER = 8
_GL = leggauss(GL_ORDER)


@dataclass(frozen=True)
class Grid:
    starts: np.ndarray
    offsets: np.ndarray
    rule: str
    npoints: int  # nodes carrying nonzero weight
    step: float  # mean node spacing
    lo: float  # actual integration endpoints
    hi: float
    _weight_fn: object = None

    def weights(self, b0: int, b1: int) -> np.ndarray:
        return self._weight_fn(b0, b1)

    def nodes(self, b0: int, b1: int) -> np.ndarray:
        return self.starts[b0:b1, None] + self.offsets[None, :]

    @property
    def blocks(self) -> int:
        return len(self.starts)


def dyadic_step(h_max: float) -> float:
    """Largest m * 2^-k <= h_max with m in {4..7}, so j * h is exact for all j used."""
    k = math.floor(-math.log2(h_max)) + 3
    while True:
        for m in (7, 6, 5, 4):
            h = m * 2.0**-k
            if h <= h_max:
                return h
        k += 1


def trapezoid_grid(a: float, b: float, h_max: float, block: int = 2048) -> Grid:
    """Trapezoid rule on [a, b] with n = ceil((b-a)/h) intervals of width h = (b-a)/n.

    When a = -b the grid is symmetric and uses an exactly representable
    dyadic step; b is then moved out to the next node (reported via ``offsets``).
    """
    if a == -b:
        h = dyadic_step(h_max)
        J = math.ceil(b / h)
        n = 2 * J
        first = -J * h
    else:
        n = max(1, math.ceil((b - a) / h_max))
        h = (b - a) / n
        first = a
    M = min(block, n + 1)
    nb = -(-(n + 1) // M)
    starts = first + np.arange(nb) * (M * h)
    offsets = np.arange(M) * h

    def wfn(b0, b1):
        j = np.arange(b0 * M, b1 * M).reshape(b1 - b0, M)
        w = np.where(j <= n, h, 0.0)
        w[(j == 0) | (j == n)] = h / 2
        return w

    return Grid(starts, offsets, "trapezoid", n + 1, h, first, first + n * h, wfn)


def gauss_grid(a: float, b: float, h_max: float, panels_per_block: int = 256) -> Grid:
    """Composite Gauss-Legendre (order 8) on [a, b], panel width <= 8 * h_max."""
    width = b - a
    panels = max(1, math.ceil(width / (GL_ORDER * h_max)))
    w = width / panels
    K = min(panels_per_block, panels)
    nb = -(-panels // K)
    x, wg = _GL
    offsets = (np.arange(K)[:, None] * w + (x[None, :] + 1) * (w / 2)).ravel()
    starts = a + np.arange(nb) * (K * w)
    base = np.tile(wg * (w / 2), K)

    def wfn(b0, b1):
        panel = (np.arange(b0, b1)[:, None] * K + np.arange(K)[None, :])
        mask = np.repeat(panel < panels, GL_ORDER, axis=1)
        return np.where(mask, base[None, :], 0.0)

    return Grid(starts, offsets, "gauss", panels * GL_ORDER, w / GL_ORDER, a, b, wfn)


def _phases(k, lam, points):
    l_hi, l_lo = as_precise(lam).dd
    s_hi, s_lo = dd_mul(np.float64(l_hi), np.float64(l_lo), points, np.zeros_like(points))
    return unit_phase(scaled_frac(k[None, :], s_hi[:, None], s_lo[:, None]))


class FactorEvaluator:
    """Evaluates sum_j w_j e(k_j lam alpha) on a grid, one block range at a time."""

    def __init__(self, grid: Grid, k, w, lam):
        self.k = np.asarray(k, dtype=np.float64)
        self.w = np.asarray(w, dtype=np.float64)
        self.lam = lam
        self.grid = grid
        self.right = _phases(self.k, lam, grid.offsets).T.copy()  # (terms, M)

    def block(self, b0: int, b1: int) -> np.ndarray:
        if not len(self.k):
            return np.zeros((b1 - b0, len(self.grid.offsets)), dtype=np.complex128)
        left = self.w[None, :] * _phases(self.k, self.lam, self.grid.starts[b0:b1])
        return left @ self.right


def evaluators(grid: Grid, factors) -> list:
    """One evaluator per factor; repeated (frequencies, lambda) pairs are shared."""
    cache = {}
    out = []
    for k, w, lam in factors:
        key = (id(k), id(w), as_precise(lam))
        if key not in cache:
            cache[key] = FactorEvaluator(grid, k, w, lam)
        out.append(cache[key])
    return out


def block_ranges(grid: Grid, target: int = 1 << 20):
    """Block ranges holding about ``target`` nodes each."""
    step = max(1, target // len(grid.offsets))
    for b0 in range(0, grid.blocks, step):
        yield b0, min(b0 + step, grid.blocks)
