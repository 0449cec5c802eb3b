"""Circle-method parameters and the major / minor / trivial arc partition."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

from .errors import DegenerateParams, DomainError


class Arc(enum.Enum):
    MAJOR = "major"
    MINOR = "minor"
    TRIVIAL = "trivial"


@dataclass(frozen=True)
class ArcParams:
    """(X, delta, eps) and the derived P, eta, R, Q, with honest degeneracy flags.

    Defaults: P = X^(2/5)/ln X, eta = X^(-1/18+eps) (ln X)^2,
    R = eta^-2 (ln X)^2, Q = X^(2/9)/ln X.  Any of P, eta, R, Q may be
    overridden; R is recomputed from an overridden eta unless R itself is
    overridden.
    """

    X: float
    delta: float
    eps: float
    P: float
    eta: float
    R: float
    Q: float
    ghosh_eps: float
    overrides: dict = field(default_factory=dict)

    @property
    def major_edge(self) -> float:
        return self.P / self.X

    @property
    def flags(self) -> dict:
        return {
            "eta_ge_1": self.eta >= 1,
            "Q_gt_P": self.Q > self.P,
            "minor_empty": self.P / self.X >= self.R,
        }

    @property
    def degenerate(self) -> bool:
        return any(self.flags.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["flags"] = self.flags
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ArcParams":
        return arc_params(d["X"], d["eps"], d["delta"], d.get("overrides") or None,
                          ghosh_eps=d.get("ghosh_eps"))


_OVERRIDABLE = {"P", "eta", "R", "Q"}


def arc_params(X: float, eps: float = 0.05, delta: float = 0.1, overrides: dict | None = None,
               ghosh_eps: float | None = None) -> ArcParams:
    if not X > math.e:
        raise DomainError(f"X must exceed e, got {X}")
    if not 0 < eps < 1 / 18:
        raise DomainError(f"eps must lie in (0, 1/18), got {eps}")
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    ov = dict(overrides or {})
    unknown = set(ov) - _OVERRIDABLE
    if unknown:
        raise DomainError(f"unknown overrides {sorted(unknown)}")
    for k, v in ov.items():
        if not v > 0:
            raise DomainError(f"override {k} must be positive")
    L = math.log(X)
    P = ov.get("P", X**0.4 / L)
    eta = ov.get("eta", X ** (-1 / 18 + eps) * L * L)
    R = ov.get("R", L * L / (eta * eta))
    Q = ov.get("Q", X ** (2 / 9) / L)
    return ArcParams(float(X), delta, eps, P, eta, R, Q,
                     eps if ghosh_eps is None else ghosh_eps, ov)


def classify(alpha: float, params: ArcParams) -> Arc:
    """Major for |alpha| <= P/X, Minor for P/X < |alpha| < R, Trivial otherwise."""
    edge = params.major_edge
    if edge >= params.R:
        raise DegenerateParams(f"P/X = {edge} >= R = {params.R}: minor arc is empty")
    a = abs(alpha)
    if a <= edge:
        return Arc.MAJOR
    if a < params.R:
        return Arc.MINOR
    return Arc.TRIVIAL
