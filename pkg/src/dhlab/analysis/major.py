"""Lower bounds and Monte Carlo estimates for the major-arc main term J1.

J1 = int_D max(0, eta - |l1 t1 + l2 t2^2 + l3 t3^2 + l4 t4^2 + varpi|) dt over
D = [dX, X] x [sqrt(dX), sqrt X]^3.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import SignPatternError
from ..problem import ProblemSpec


@dataclass
class J1Result:
    constructive: float  # rigorous lower bound
    pivot: int  # index m integrated exactly in the constructive bound (0-based)
    estimate: float | None  # Monte Carlo value, None when mc_samples = 0
    stderr: float | None
    samples: int
    scale: float  # eta^2 X^(3/2)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _tent_cdf(x, eta):
    """H(x) = int_{-inf}^x max(0, eta - |y|) dy."""
    x = np.clip(x, -eta, eta)
    return np.where(x <= 0, (x + eta) ** 2 / 2, eta * eta - (eta - x) ** 2 / 2)


def _halfspace_volume(a: list[Fraction], lo: list[Fraction], hi: list[Fraction], t: Fraction) -> Fraction:
    """Volume of {u in prod [lo_j, hi_j] : sum a_j u_j <= t}, all a_j > 0.

    Inclusion-exclusion over the box vertices, exact in rationals.
    """
    n = len(a)
    total = Fraction(0)
    for corner in itertools.product((0, 1), repeat=n):
        v = sum(aj * (h if c else l) for aj, l, h, c in zip(a, lo, hi, corner))
        if t > v:
            total += (-1) ** sum(corner) * (t - v) ** n
    return total / (math.factorial(n) * math.prod(a))


def _slab_volume(coef, lo, hi, s_lo, s_hi) -> Fraction:
    """Volume of {u in box : s_lo <= sum coef_j u_j <= s_hi}, signs of coef arbitrary."""
    # u -> lo + hi - u flips the sign of a negative coefficient
    a = [abs(c) for c in coef]
    shift = sum((c * (l + h) for c, l, h in zip(coef, lo, hi) if c < 0), Fraction(0))
    lo_t, hi_t = s_lo - shift, s_hi - shift
    if hi_t <= lo_t:
        return Fraction(0)
    return _halfspace_volume(a, lo, hi, hi_t) - _halfspace_volume(a, lo, hi, lo_t)


def constructive_bound(spec: ProblemSpec) -> tuple[float, int]:
    """max over m of eta^2 / (8 X^(3/2) |l_m|) * vol(G_m).

    In u-coordinates (u_1 = t_1, u_j = t_j^2) the Jacobian is at least
    (2 sqrt X)^-3.  G_m is the set of the other three coordinates for which the
    full window of u_m where |form| < eta lies inside [dX, X]; there the u_m
    integral equals eta^2 / |l_m| exactly.
    """
    X, d, eta = Fraction(spec.X), Fraction(spec.delta), Fraction(spec.eta)
    lams = [lam.mid for lam in spec.lambdas]
    varpi = spec.varpi.mid
    lo, hi = d * X, X
    best, pivot = Fraction(0), 0
    for m in range(4):
        lm = lams[m]
        others = [lams[j] for j in range(4) if j != m]
        # need -(s + varpi)/l_m in [lo + eta/|l_m|, hi - eta/|l_m|]
        w = eta / abs(lm)
        if hi - w <= lo + w:
            continue
        ends = sorted((-lm * (lo + w) - varpi, -lm * (hi - w) - varpi))
        vol = _slab_volume(others, [lo] * 3, [hi] * 3, ends[0], ends[1])
        val = eta * eta / abs(lm) * vol
        if val > best:
            best, pivot = val, m
    jac = 8 * float(X) ** 1.5
    return float(best) / jac, pivot


def _cell_estimate(args):
    spec, seed, cells, k, m = args
    X, d, eta = spec.X, spec.delta, spec.eta
    l1, l2, l3, l4 = (float(v) for v in spec.lambdas)
    varpi = float(spec.varpi)
    t0, t1 = math.sqrt(d * X), math.sqrt(X)
    width = (t1 - t0) / k
    out = []
    for c in cells:
        rng = np.random.Generator(np.random.Philox(key=(int(c) << 64) | seed))
        i, rem = divmod(int(c), k * k)
        j, l = divmod(rem, k)
        u = rng.random((m, 3))
        t = t0 + width * (np.array([i, j, l]) + u)
        g = l2 * t[:, 0] ** 2 + l3 * t[:, 1] ** 2 + l4 * t[:, 2] ** 2 + varpi
        a, b = l1 * d * X + g, l1 * X + g
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        f = (_tent_cdf(hi, eta) - _tent_cdf(lo, eta)) / abs(l1)
        out.append((f.mean(), f.var(ddof=1) if m > 1 else 0.0))
    return out


def major_lower_J1(spec: ProblemSpec, mc_samples: int, seed: int = 0, threads: int = 1) -> J1Result:
    """Constructive lower bound for J1 and a stratified Monte Carlo estimate.

    The t1 integral is done in closed form; (t2, t3, t4) is stratified into k^3
    equal cells with mc_samples // k^3 points each, every cell drawing from its
    own Philox stream keyed by (seed, cell), so the result does not depend on
    ``threads``.
    """
    signs = {lam.sign() for lam in spec.lambdas}
    if len(signs) == 1:
        raise SignPatternError("all coefficients share a sign: J1 can vanish")
    X, eta = spec.X, spec.eta
    bound, pivot = constructive_bound(spec)
    scale = eta * eta * X**1.5
    if mc_samples <= 0:
        return J1Result(bound, pivot, None, None, 0, scale)
    k = max(1, round((mc_samples / 1024) ** (1 / 3)))
    m = max(1, mc_samples // k**3)
    ncell = k**3
    cells = np.arange(ncell)
    chunks = np.array_split(cells, max(1, min(ncell, 4 * max(1, threads))))
    jobs = [(spec, seed, ch, k, m) for ch in chunks]
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(_cell_estimate, jobs))
    else:
        parts = [_cell_estimate(j) for j in jobs]
    stats = np.array([s for p in parts for s in p])
    t0, t1 = math.sqrt(spec.delta * X), math.sqrt(X)
    vol = (t1 - t0) ** 3
    est = vol * math.fsum(stats[:, 0]) / ncell
    se = vol * math.sqrt(math.fsum(stats[:, 1] / m)) / ncell
    return J1Result(bound, pivot, est, se, m * ncell, scale)
