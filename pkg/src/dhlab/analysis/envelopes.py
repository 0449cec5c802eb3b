"""Vaughan and Ghosh envelopes and the minor-arc dichotomy scan for V(alpha)."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..diophantine import dirichlet_approx
from ..errors import DegenerateParams, DomainError
from ..expsums import prime_exp_sum, scale
from ..problem import ProblemSpec
from ..reals import PreciseReal, as_precise


def _check_q(a: int, q: int):
    if q < 1:
        raise DomainError("q must be >= 1")
    if math.gcd(abs(a), q) != 1:
        raise DomainError(f"gcd({a}, {q}) != 1")


def vaughan_envelope(a: int, q: int, X: float) -> float:
    """(X/sqrt q + sqrt(Xq) + X^(4/5)) (ln X)^4 with constant 1."""
    _check_q(a, q)
    return (X / math.sqrt(q) + math.sqrt(X * q) + X**0.8) * math.log(X) ** 4


def ghosh_envelope(a: int, q: int, X: float, ghosh_eps: float) -> float:
    """X^(1/2+eps) (1/q + X^(-1/4) + q/X)^(1/4) with constant 1."""
    _check_q(a, q)
    return X ** (0.5 + ghosh_eps) * (1 / q + X**-0.25 + q / X) ** 0.25


@dataclass
class ScanRow:
    alpha: float
    V: float
    q1: int
    q2: int
    label: str  # which bound controls V: X1 (q1 > Q, Vaughan) or X2 (q2 > Q, Ghosh)


@dataclass
class ScanReport:
    sup_V: float
    argmax_alpha: float
    samples: int
    dichotomy_violations: list = field(default_factory=list)  # (alpha, q1, q2, reason)
    trivial_V: float = 0.0
    X: float = 0.0
    Q: float = 0.0
    seed: int = 0
    vaughan_ratio: float = 0.0  # max |S1| / Vaughan envelope over the samples
    ghosh_ratio: float = 0.0
    both_small: int = 0  # samples with both q_i <= Q and a1 a2 != 0
    rows: list = field(default_factory=list)

    @property
    def normalized_sup(self) -> float:
        return self.sup_V / self.X ** (4 / 9) if self.X else 0.0

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "sup_V", "argmax_alpha", "samples", "trivial_V", "X", "Q", "seed",
            "vaughan_ratio", "ghosh_ratio", "both_small")}
        d["normalized_sup"] = self.normalized_sup
        d["dichotomy_violations"] = [list(v) for v in self.dichotomy_violations]
        return d


def sample_alphas(lo: float, hi: float, n: int, seed: int) -> np.ndarray:
    """n log-uniform points in (lo, hi), from a Philox stream keyed by ``seed``."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    u = rng.random(n)
    return np.exp(math.log(lo) + (math.log(hi) - math.log(lo)) * u)


def _approximations(lam: PreciseReal, alpha: np.ndarray, N: int):
    out = []
    for a in alpha.tolist():
        c = dirichlet_approx(lam * PreciseReal.exact(a), N)
        out.append((c.a, c.q))
    return out


def _audit_block(spec: ProblemSpec, alpha: np.ndarray):
    p = spec.params
    lam1, lam2 = spec.lambdas[0], spec.lambdas[1]
    s1 = prime_exp_sum(spec.linear, scale(lam1, alpha), spec.linear_table)
    s2 = prime_exp_sum(spec.square, scale(lam2, alpha), spec.square_table)
    V = np.minimum(np.sqrt(np.abs(s1)), np.abs(s2))
    N = max(1, math.floor(p.X / p.Q))
    ap1 = _approximations(lam1, alpha, N)
    ap2 = _approximations(lam2, alpha, N)
    return s1, s2, V, ap1, ap2


def minor_arc_scan(spec: ProblemSpec, samples: int, seed: int = 0, threads: int = 1,
                   block: int = 1024) -> ScanReport:
    """Sample V(alpha) = min(|S1(l1 a)|^(1/2), |S2(l2 a)|) over the minor arc and audit
    the Dirichlet dichotomy: for each alpha, approximations a_i/q_i of lambda_i alpha
    with q_i <= X/Q must have a_1 a_2 != 0 and not both q_i <= Q.
    """
    p = spec.params
    if p.major_edge >= p.R:
        raise DegenerateParams("minor arc is empty (P/X >= R)")
    s10, s20 = spec.sums_at_zero()
    trivial = min(math.sqrt(s10), s20)
    report = ScanReport(0.0, 0.0, samples, trivial_V=trivial, X=p.X, Q=p.Q, seed=seed)
    if samples <= 0:
        return report
    alpha = sample_alphas(p.major_edge, p.R, samples, seed)
    chunks = [alpha[i:i + block] for i in range(0, samples, block)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(lambda c: _audit_block(spec, c), chunks))
    else:
        parts = [_audit_block(spec, c) for c in chunks]

    ratio = as_precise(spec.lambdas[0]) / as_precise(spec.lambdas[1])
    r_mid = float(ratio)
    link_rhs = 2 * (1 + abs(r_mid)) * p.Q**2 / p.X
    vr = gr = 0.0
    X = p.X
    for chunk, (s1, s2, V, ap1, ap2) in zip(chunks, parts):
        for i, a in enumerate(chunk.tolist()):
            (a1, q1), (a2, q2) = ap1[i], ap2[i]
            v = float(V[i])
            if v > report.sup_V:
                report.sup_V, report.argmax_alpha = v, a
            if a1 == 0 or a2 == 0:
                report.dichotomy_violations.append((a, q1, q2, "a1*a2=0"))
            elif q1 <= p.Q and q2 <= p.Q:
                report.both_small += 1
                lhs = abs(a2 * q1 * r_mid - a1 * q2)
                report.dichotomy_violations.append(
                    (a, q1, q2, f"both q<=Q, |a2 q1 l1/l2 - a1 q2|={lhs!r} rhs={link_rhs!r}"))
            if a1 != 0:
                vr = max(vr, abs(s1[i]) / vaughan_envelope(a1, q1, X))
            if a2 != 0:
                gr = max(gr, abs(s2[i]) / ghosh_envelope(a2, q2, X, p.ghosh_eps))
            report.rows.append(ScanRow(a, v, q1, q2, "X1" if q1 > p.Q else "X2"))
    report.vaughan_ratio, report.ghosh_ratio = vr, gr
    return report
