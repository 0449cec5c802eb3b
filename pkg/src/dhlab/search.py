"""Prime quadruples with |l1 p1 + l2 p2^2 + l3 p3^2 + l4 p4^2 + varpi| small.

``find_solutions`` merges a left list l1 p1 + l2 p2^2 + varpi against a sorted
right list l3 p3^2 + l4 p4^2; ``brute_force_oracle`` walks every quadruple.
Both hand their candidates to the same acceptance predicate.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, OverflowGuard, ScaleError
from .problem import ProblemSpec

_U = 2.0**-52
_BORDER_ULPS = 1000
BRUTE_FORCE_MAX_X = 1e4


class MarginClass(enum.Enum):
    CLEAR = "clear"
    BORDERLINE = "borderline"


@dataclass(frozen=True)
class TheoremThreshold:
    """threshold = (max_j p_j)^(-1/18 + eps)"""

    eps: float

    def threshold(self, max_p):
        return np.asarray(max_p, dtype=np.float64) ** (-1 / 18 + self.eps)


@dataclass(frozen=True)
class FixedWindow:
    eta: float

    def threshold(self, max_p):
        return np.full(np.shape(max_p), float(self.eta))


@dataclass(frozen=True)
class SolutionRecord:
    p1: int
    p2: int
    p3: int
    p4: int
    form_value: float
    max_p: int
    threshold: float
    margin_class: MarginClass

    @property
    def key(self) -> tuple:
        return (self.p1, self.p2, self.p3, self.p4)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["margin_class"] = self.margin_class.value
        return d


# acceptance -----------------------------------------------------------------------

def _guard(spec: ProblemSpec):
    """Refuse scales where the float64 block stage cannot resolve the form."""
    kmax = max(float(spec.X), 1.0)
    if kmax >= 2.0**53:
        raise OverflowGuard("frequencies beyond 2**53")
    mag = sum(abs(float(v)) for v in spec.lambdas) * kmax + abs(float(spec.varpi))
    if mag * _U > 2.0**-10:
        raise OverflowGuard(f"form magnitude {mag:.3g} too large for the float64 window stage")


def _accept(spec: ProblemSpec, mode, q: np.ndarray, strict: bool = False) -> list[SolutionRecord]:
    """The acceptance predicate shared by every search route.

    The form is evaluated in double-double; a record is Borderline when it sits
    within 1000 ulps of the threshold or when the rational re-evaluation moves
    it by at least 1e-3 of the threshold.
    """
    if not len(q):
        return []
    hi, lo, mag = spec.form_dd(q[:, 0], q[:, 1], q[:, 2], q[:, 3])
    f = hi + lo
    max_p = q.max(axis=1)
    thr = mode.threshold(max_p)
    ok = np.abs(f) < thr if strict else np.abs(f) <= thr
    out = []
    for i in np.flatnonzero(ok):
        quad = tuple(int(v) for v in q[i])
        margin = MarginClass.CLEAR
        if abs(thr[i] - abs(f[i])) < _BORDER_ULPS * _U * mag[i]:
            margin = MarginClass.BORDERLINE
        else:
            exact = float(spec.form_exact(*quad))
            if abs(exact - f[i]) >= 1e-3 * thr[i]:
                margin = MarginClass.BORDERLINE
        out.append(SolutionRecord(*quad, float(f[i]), int(max_p[i]), float(thr[i]), margin))
    return out


def _loosest_threshold(spec: ProblemSpec, mode) -> float:
    ps = [a for a in (spec.p1, spec.p_sq) if len(a)]
    lo = min(int(a[0]) for a in ps)
    hi = max(int(a[-1]) for a in ps)
    return float(np.max(mode.threshold(np.array([lo, hi]))))


# meet in the middle -----------------------------------------------------------------

def _right_list(spec: ProblemSpec):
    ps = spec.p_sq.astype(np.float64)
    p3, p4 = (g.ravel() for g in np.meshgrid(ps, ps, indexing="ij"))
    val = float(spec.lambdas[2]) * p3 * p3 + float(spec.lambdas[3]) * p4 * p4
    order = np.argsort(val, kind="stable")
    return val[order], p3[order].astype(np.int64), p4[order].astype(np.int64)


def _search_p2(spec, p2: int, right, window: float, slack: float):
    rv, r3, r4 = right
    p1 = spec.p1
    left = float(spec.lambdas[0]) * p1.astype(np.float64) + float(spec.lambdas[1]) * float(p2) ** 2 \
        + float(spec.varpi)
    i0 = np.searchsorted(rv, -left - window - slack, side="left")
    i1 = np.searchsorted(rv, -left + window + slack, side="right")
    counts = i1 - i0
    n = int(counts.sum())
    if not n:
        return np.zeros((0, 4), dtype=np.int64)
    owner = np.repeat(np.arange(len(p1)), counts)
    start = np.repeat(i0 - np.cumsum(np.concatenate(([0], counts[:-1]))), counts)
    idx = start + np.arange(n)
    return np.stack([p1[owner], np.full(n, p2, dtype=np.int64), r3[idx], r4[idx]], axis=1)


def candidates(spec: ProblemSpec, window: float, threads: int = 1) -> np.ndarray:
    """All quadruples whose float64 form lies within ``window`` (plus rounding slack)."""
    if not len(spec.p1) or not len(spec.p_sq):
        return np.zeros((0, 4), dtype=np.int64)
    _guard(spec)
    right = _right_list(spec)
    mag = sum(abs(float(v)) for v in spec.lambdas) * spec.X + abs(float(spec.varpi))
    slack = 64 * _U * mag
    p2s = spec.p_sq.tolist()
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(lambda p: _search_p2(spec, p, right, window, slack), p2s))
    else:
        parts = [_search_p2(spec, p, right, window, slack) for p in p2s]
    # parts are in p2 order whatever the thread count
    return np.concatenate(parts) if parts else np.zeros((0, 4), dtype=np.int64)


def find_solutions(spec: ProblemSpec, mode, limit: int | None = None,
                   threads: int = 1) -> list[SolutionRecord]:
    """Records with |form| <= threshold, sorted by |form_value| then by quadruple."""
    if limit is not None and limit < 1:
        raise DomainError("limit must be >= 1")
    if not len(spec.p1) or not len(spec.p_sq):
        return []
    q = candidates(spec, _loosest_threshold(spec, mode), threads)
    recs = _accept(spec, mode, q)
    recs.sort(key=lambda r: (abs(r.form_value), r.key))
    return recs if limit is None else recs[:limit]


def count_N(spec: ProblemSpec, eta: float, threads: int = 1) -> tuple[int, float]:
    """(#quadruples with |form| < eta, sum of prod log p_i * (eta - |form|))."""
    if eta <= 0 or not len(spec.p1) or not len(spec.p_sq):
        return 0, 0.0
    mode = FixedWindow(eta)
    recs = _accept(spec, mode, candidates(spec, eta, threads), strict=True)
    w = [math.prod(math.log(p) for p in r.key) * (eta - abs(r.form_value)) for r in recs]
    return len(recs), math.fsum(w)


def brute_force_oracle(spec: ProblemSpec, mode) -> list[SolutionRecord]:
    """Every quadruple is evaluated; records sorted by (p1, p2, p3, p4)."""
    if spec.X > BRUTE_FORCE_MAX_X:
        raise ScaleError(f"X = {spec.X} exceeds the brute-force limit {BRUTE_FORCE_MAX_X}")
    p1, ps = spec.p1, spec.p_sq
    out = []
    for a in ps.tolist():
        for b in ps.tolist():
            for c in ps.tolist():
                q = np.empty((len(p1), 4), dtype=np.int64)
                q[:, 0] = p1
                q[:, 1:] = (a, b, c)
                out.extend(_accept(spec, mode, q))
    out.sort(key=lambda r: r.key)
    return out


# output ----------------------------------------------------------------------------

CSV_COLUMNS = ("p1", "p2", "p3", "p4", "form_value", "threshold", "margin")


def to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([r.p1, r.p2, r.p3, r.p4, f"{r.form_value:.17g}", f"{r.threshold:.17g}",
                    r.margin_class.value])
    return buf.getvalue()


def to_json(records) -> str:
    return json.dumps([r.to_dict() for r in records], indent=1)
