"""An explicit-constant bound for |I| over the trivial arc |alpha| > A.

Chain: |S2(l4 a)| <= S2(0); Cauchy twice splits the rest into
int |S1(l1 a)|^2 K and int |S2(l_j a)|^4 K (j = 2, 3); on each, K_eta(a) <= 1/(pi a)^2
and periodicity of the integer-frequency sums reduce to the period mean values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import polygamma

from ..errors import DomainError
from ..problem import ProblemSpec
from .meanvalues import mean_value_L2, mean_value_L4


@dataclass
class TailBound:
    bound: float
    A: float
    A_term: float  # one-sided bound for int_{a > A} |S1(l1 a)|^2 K
    B_terms: tuple  # same for |S2(l2 a)|^4 K and |S2(l3 a)|^4 K
    L2: float
    L4: float


def one_sided_moment(mean: float, lam: float, A: float, eta: float) -> float:
    """Upper bound for int_{a > A} |S(lam a)|^k K_eta(a) da given mean = int_0^1 |S|^k.

    With b = |lam| a the integral is |lam|^-1 int_{b > |lam| A} |S(b)|^k K(b/|lam|) db.
    Unit intervals [n-1, n] with n >= 2 carry K <= lam^2 / (pi (n-1))^2; a piece of
    [0, 1] (only when |lam| A < 1) carries K <= min(eta^2, lam^2/(pi |lam| A)^2).
    """
    lam = abs(lam)
    b0 = lam * A
    n0 = max(2, math.ceil(b0))
    total = lam / math.pi**2 * mean * float(polygamma(1, n0 - 1))
    if b0 < 1:
        total += mean * min(eta * eta, 1 / (math.pi * A) ** 2) / lam
    return total


def trivial_tail_bound(spec: ProblemSpec, A: float) -> TailBound:
    if A < spec.params.R:
        raise DomainError(f"A = {A} is below R = {spec.params.R}")
    X, d, eta = spec.X, spec.delta, spec.eta
    lams = [float(v) for v in spec.lambdas]
    L2 = mean_value_L2(X, d, spec.linear_table, quadrature=False).exact if len(spec.p1) else 0.0
    L4 = mean_value_L4(X, d, spec.square_table, quadrature=False).exact if len(spec.p_sq) else 0.0
    _, s2 = spec.sums_at_zero()
    a_term = one_sided_moment(L2, lams[0], A, eta)
    b2 = one_sided_moment(L4, lams[1], A, eta)
    b3 = one_sided_moment(L4, lams[2], A, eta)
    # both half-lines: sqrt(2 a) (2 b2)^(1/4) (2 b3)^(1/4) = 2 sqrt(a) (b2 b3)^(1/4)
    bound = 2 * s2 * math.sqrt(a_term) * (b2 * b3) ** 0.25
    return TailBound(bound, A, a_term, (b2, b3), L2, L4)
