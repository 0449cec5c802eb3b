"""The weighted solution count and the circle-method integral I(eta, varpi, region).

For real coefficients the integrand
S1(l1 a) S2(l2 a) S2(l3 a) S2(l4 a) K_eta(a) e(varpi a) is a finite sum of
terms c e(w a) K_eta(a), each band-limited to |freq| <= B.  A trapezoid sum
over all of R with step h < 1/B is therefore exact, and truncating it at
|a| = A costs at most S1(0) S2(0)^3 times the discrete kernel tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BandwidthError, DomainError
from ..expsums import Kind, smooth_approx
from ..kernel import fejer, fejer_tail_bound
from ..problem import ProblemSpec
from .grid import block_ranges, evaluators, gauss_grid, trapezoid_grid

_U = 2.0**-53


# regions ------------------------------------------------------------------------

@dataclass(frozen=True)
class Major:
    pass


@dataclass(frozen=True)
class Minor:
    pass


@dataclass(frozen=True)
class TrivialTruncated:
    A: float


@dataclass(frozen=True)
class Interval:
    a: float
    b: float


def region_intervals(region, spec: ProblemSpec) -> list[tuple[float, float]]:
    p = spec.params
    edge = p.major_edge
    if isinstance(region, Major):
        return [(-edge, edge)]
    if isinstance(region, Minor):
        return [(-p.R, -edge), (edge, p.R)] if edge < p.R else []
    if isinstance(region, TrivialTruncated):
        if region.A < p.R:
            raise DomainError("truncation point A must be >= R")
        return [(-region.A, -p.R), (p.R, region.A)]
    if isinstance(region, Interval):
        if region.b < region.a:
            raise DomainError("interval endpoints out of order")
        return [(region.a, region.b)]
    raise DomainError(f"unknown region {region!r}")


@dataclass(frozen=True)
class QuadratureSpec:
    """``step`` caps the node spacing (default 1/(4B)); ``rule`` is auto (= gauss), trapezoid or gauss."""

    step: float | None = None
    rule: str = "auto"


@dataclass
class IntegralResult:
    value: complex
    region: str
    rule: str
    step: float
    nodes: int
    bandwidth: float
    rounding_budget: float
    endpoints: list

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag_residual(self) -> float:
        return self.value.imag


def nyquist_step(bandwidth: float, step: float | None) -> float:
    safe = 1.0 / (4.0 * bandwidth)
    if step is None:
        return safe
    if step > safe:
        raise BandwidthError(f"step {step} exceeds the Nyquist-safe bound {safe}")
    return step


def _grids(intervals, h, rule):
    grids = []
    for a, b in intervals:
        if b <= a:
            continue
        # the trapezoid rule is exact only over the whole line, and it rounds the
        # ends outward to the grid; bounded regions therefore default to Gauss
        r = "gauss" if rule == "auto" else rule
        if r == "trapezoid":
            grids.append(trapezoid_grid(a, b, h))
        elif r == "gauss":
            # panel width 2h: the fastest term turns by at most pi per panel
            grids.append(gauss_grid(a, b, h / 8))
        else:
            raise DomainError(f"unknown rule {rule!r}")
    return grids


def _integrate(grids, factors, combine, eta):
    """Sum of weight * combine(factor values, nodes) * K_eta(node) over all grids.

    Returns (value, sum of weight * K_eta, node count).
    """
    parts, kmass, nodes = [], [], 0
    for grid in grids:
        evs = evaluators(grid, factors)
        for b0, b1 in block_ranges(grid):
            vals = [ev.block(b0, b1) for ev in evs]
            alpha = grid.nodes(b0, b1)
            wk = grid.weights(b0, b1) * fejer(eta, alpha)
            g = combine(vals, alpha) * wk
            parts.append(g.sum())
            kmass.append(wk.sum())
        nodes += grid.npoints
    parts = np.array(parts, dtype=np.complex128)
    value = complex(math.fsum(parts.real), math.fsum(parts.imag))
    return value, math.fsum(kmass), nodes


def _product(vals, alpha):
    out = vals[0]
    for v in vals[1:]:
        out = out * v
    return out


def integral_I(spec: ProblemSpec, region, sampler: QuadratureSpec = QuadratureSpec()) -> IntegralResult:
    """Quadrature of I(eta, varpi, region) with a Nyquist-safe step."""
    B = spec.bandwidth()
    h = nyquist_step(B, sampler.step)
    grids = _grids(region_intervals(region, spec), h, sampler.rule)
    factors = spec.factors() + [(np.ones(1), np.ones(1), spec.varpi)]
    value, kmass, nodes = _integrate(grids, factors, _product, spec.eta)
    nf = sum(len(f[0]) for f in factors)
    budget = 16 * (nf + 8) * _U * spec.trivial_product() * kmass
    return IntegralResult(
        value, type(region).__name__, grids[0].rule if grids else "none",
        grids[0].step if grids else h, nodes, B, budget,
        [(g.lo, g.hi) for g in grids],
    )


def weighted_solution_sum(spec: ProblemSpec) -> float:
    """Sum over admissible prime quadruples of (prod log p_i) * max(0, eta - |form|).

    Enumerates (p2, p3, p4) and, for each, only the p1 inside the window
    |lambda1 p1 + rest| < eta located by binary search.
    """
    w, _ = _solution_terms(spec)
    return math.fsum(w)


def _solution_terms(spec: ProblemSpec):
    eta = spec.eta
    p1 = spec.p1
    ps = spec.p_sq
    if not len(p1) or not len(ps):
        return np.zeros(0), np.zeros((0, 4), dtype=np.int64)
    g2, g3, g4 = (g.ravel() for g in np.meshgrid(ps, ps, ps, indexing="ij"))
    zero = np.zeros_like(g2)
    r_hi, r_lo, mag = spec.form_dd(zero, g2, g3, g4)
    rest = r_hi + r_lo
    lam1 = float(spec.lambdas[0])
    ends = np.sort(np.stack([(-rest - eta) / lam1, (-rest + eta) / lam1]), axis=0)
    slack = 1e-9 * (mag / abs(lam1) + 1.0)
    p1f = p1.astype(np.float64)
    i0 = np.searchsorted(p1f, ends[0] - slack, side="left")
    i1 = np.searchsorted(p1f, ends[1] + slack, side="right")
    counts = i1 - i0
    if not counts.sum():
        return np.zeros(0), np.zeros((0, 4), dtype=np.int64)
    owner = np.repeat(np.arange(len(g2)), counts)
    first = np.repeat(i0 - np.cumsum(np.concatenate(([0], counts[:-1]))), counts)
    idx = first + np.arange(counts.sum())
    q = np.stack([p1[idx], g2[owner], g3[owner], g4[owner]], axis=1)
    f_hi, f_lo, _ = spec.form_dd(*q.T)
    hat = eta - np.abs(f_hi + f_lo)
    keep = hat > 0
    q = q[keep]
    logs = np.log(q.astype(np.float64)).prod(axis=1)
    return logs * hat[keep], q


@dataclass
class IdentityReport:
    weighted_sum: float
    integral: float
    imag_residual: float
    A: float
    step: float
    nodes: int
    tail_bound: float
    rounding_budget: float
    discrepancy: float
    allowance: float

    @property
    def passed(self) -> bool:
        return self.discrepancy <= self.allowance


def circle_identity(spec: ProblemSpec, A: float, step: float | None = None,
                    absolute_slack: float = 1e-6) -> IdentityReport:
    """Compare the truncated integral over (-A, A) with the weighted solution sum.

    Allowance = S1(0) S2(0)^3 * (kernel tail beyond the last node, including the
    trapezoid end weight) + rounding budget + ``absolute_slack``.
    """
    res = integral_I(spec, Interval(-A, A), QuadratureSpec(step, "trapezoid"))
    a_eff = res.endpoints[0][1]
    h = res.step
    kernel_tail = fejer_tail_bound(spec.eta, a_eff) + h * min(spec.eta**2, 1 / (math.pi * a_eff) ** 2)
    tail = spec.trivial_product() * kernel_tail
    w = weighted_solution_sum(spec)
    return IdentityReport(
        w, res.real, res.imag_residual, a_eff, h, res.nodes, tail, res.rounding_budget,
        abs(res.real - w), tail + res.rounding_budget + absolute_slack,
    )


# mean values against the kernel -------------------------------------------------------

@dataclass
class KernelMean:
    value: float
    envelope: float
    ratio: float
    nodes: int


def kernel_weighted_mean(spec: ProblemSpec, power: str = "S1sq", j: int = 2,
                         region=Minor(), step: float | None = None) -> KernelMean:
    """Integral over ``region`` of |S1(l1 a)|^2 K_eta (power='S1sq') or
    |S2(l_j a)|^4 K_eta (power='S2fourth'), next to eta X ln X (resp. eta X ln^2 X)."""
    factors = spec.factors()
    lam = [abs(float(v)) for v in spec.lambdas]
    X, L = spec.X, math.log(spec.X)
    if power == "S1sq":
        fac, B = [factors[0]], 2 * lam[0] * X
        env = spec.eta * X * L
        combine = lambda vals, a: np.abs(vals[0]) ** 2  # noqa: E731
    elif power == "S2fourth":
        if j not in (2, 3, 4):
            raise DomainError("j must be 2, 3 or 4")
        fac, B = [factors[j - 1]], 4 * lam[j - 1] * X
        env = spec.eta * X * L * L
        combine = lambda vals, a: np.abs(vals[0]) ** 4  # noqa: E731
    else:
        raise DomainError(f"unknown power {power!r}")
    B += spec.eta
    h = nyquist_step(B, step)
    grids = _grids(region_intervals(region, spec), h, "gauss")
    value, _, nodes = _integrate(grids, fac, combine, spec.eta)
    return KernelMean(value.real, env, value.real / env, nodes)


# major arc: S-products against T-products -------------------------------------------------

@dataclass
class MajorDefect:
    s_integral: complex
    t_integral: complex
    defect: complex
    main_scale: float  # eta^2 X^(3/2)


def major_arc_defect(spec: ProblemSpec, step: float | None = None) -> MajorDefect:
    """I over the major arc minus the same integral with every S replaced by its T.

    This lumps together the J2..J5 error terms; J1 is the T-integral.
    """
    B = spec.bandwidth()
    h = nyquist_step(B, step)
    grids = _grids(region_intervals(Major(), spec), h, "gauss")
    s_val = integral_I(spec, Major(), QuadratureSpec(step)).value
    lams = [float(v) for v in spec.lambdas]
    X, d = spec.X, spec.delta
    parts = []
    for grid in grids:
        for b0, b1 in block_ranges(grid):
            alpha = grid.nodes(b0, b1)
            flat = alpha.ravel()
            t = smooth_approx(Kind.LINEAR, lams[0] * flat, X, d)
            for lam in lams[1:]:
                t = t * smooth_approx(Kind.SQUARE, lam * flat, X, d)
            phase = np.exp(2j * np.pi * float(spec.varpi) * flat)
            wk = (grid.weights(b0, b1) * fejer(spec.eta, alpha)).ravel()
            parts.append((t * phase * wk).sum())
    parts = np.array(parts, dtype=np.complex128)
    t_val = complex(math.fsum(parts.real), math.fsum(parts.imag))
    return MajorDefect(s_val, t_val, s_val - t_val, spec.eta**2 * X**1.5)
