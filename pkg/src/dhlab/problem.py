"""The problem instance shared by the analysis and search layers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arcs import ArcParams, arc_params
from .dd import dd_add, two_prod, two_sum
from .errors import DomainError
from .expsums import Kind, SumSpec, sum_terms
from .primes import PrimeTable, sieve_range
from .reals import PreciseReal, as_precise


def _table_for(spec: SumSpec) -> PrimeTable:
    lo, hi = spec.variable_bounds
    if hi < lo:
        empty = np.zeros(0, dtype=np.int64)
        return PrimeTable(lo, lo - 1, empty, np.zeros(0))
    return sieve_range(lo, hi)


@dataclass(frozen=True)
class ProblemSpec:
    """lambda_1..lambda_4, varpi, the arc parameters and both prime tables.

    ``linear_table`` holds p1 in [delta X, X]; ``square_table`` holds p with
    p^2 in [delta X, X].  The mixed-sign hypothesis is recorded in
    ``mixed_signs`` but not enforced.
    """

    lambdas: tuple
    varpi: PreciseReal
    params: ArcParams
    linear_table: PrimeTable
    square_table: PrimeTable

    @classmethod
    def build(cls, lambdas, varpi=0, X: float = 100.0, delta: float = 0.1, eps: float = 0.05,
              overrides: dict | None = None, ghosh_eps: float | None = None) -> "ProblemSpec":
        lams = tuple(as_precise(v) for v in lambdas)
        if len(lams) != 4:
            raise DomainError("exactly four coefficients are required")
        for lam in lams:
            if lam.lo <= 0 <= lam.hi:
                raise DomainError("coefficients must be nonzero")
        params = arc_params(X, eps, delta, overrides, ghosh_eps)
        lin = SumSpec(Kind.LINEAR, params.X, delta)
        sq = SumSpec(Kind.SQUARE, params.X, delta)
        return cls(lams, as_precise(varpi), params, _table_for(lin), _table_for(sq))

    def with_params(self, **overrides) -> "ProblemSpec":
        p = self.params
        ov = {**p.overrides, **overrides}
        return ProblemSpec(self.lambdas, self.varpi,
                           arc_params(p.X, p.eps, p.delta, ov, p.ghosh_eps),
                           self.linear_table, self.square_table)

    # shortcuts ------------------------------------------------------------------
    @property
    def X(self) -> float:
        return self.params.X

    @property
    def delta(self) -> float:
        return self.params.delta

    @property
    def eta(self) -> float:
        return self.params.eta

    @property
    def linear(self) -> SumSpec:
        return SumSpec(Kind.LINEAR, self.X, self.delta)

    @property
    def square(self) -> SumSpec:
        return SumSpec(Kind.SQUARE, self.X, self.delta)

    @property
    def mixed_signs(self) -> bool:
        signs = {lam.sign() for lam in self.lambdas}
        return len(signs) > 1

    @property
    def p1(self) -> np.ndarray:
        lo, hi = self.linear.variable_bounds
        return self.linear_table.between(lo, hi)[0] if hi >= lo else np.zeros(0, np.int64)

    @property
    def p_sq(self) -> np.ndarray:
        lo, hi = self.square.variable_bounds
        return self.square_table.between(lo, hi)[0] if hi >= lo else np.zeros(0, np.int64)

    def factors(self):
        """[(frequencies, weights, lambda)] for S1(l1 a), S2(l2 a), S2(l3 a), S2(l4 a)."""
        k1, w1 = sum_terms(self.linear, self.linear_table)
        k2, w2 = sum_terms(self.square, self.square_table)
        return [(k1, w1, self.lambdas[0])] + [(k2, w2, lam) for lam in self.lambdas[1:]]

    def sums_at_zero(self) -> tuple[float, float]:
        """(S1(0), S2(0)), the trivial bounds for |S1| and |S2|."""
        _, w1 = sum_terms(self.linear, self.linear_table)
        _, w2 = sum_terms(self.square, self.square_table)
        return math.fsum(w1), math.fsum(w2)

    def trivial_product(self) -> float:
        s1, s2 = self.sums_at_zero()
        return s1 * s2**3

    def bandwidth(self) -> float:
        """Largest frequency of S1 S2 S2 S2 K_eta e(varpi .): the Nyquist scale."""
        lam = [abs(float(v)) for v in self.lambdas]
        return lam[0] * self.X + sum(lam[1:]) * self.X + abs(float(self.varpi)) + self.eta

    # the linear form --------------------------------------------------------------
    def form_dd(self, p1, p2, p3, p4):
        """lambda1 p1 + lambda2 p2^2 + lambda3 p3^2 + lambda4 p4^2 + varpi in double-double.

        Also returns the sum of absolute values of the terms (the rounding scale).
        """
        ks = [np.asarray(p1, dtype=np.float64)] + [
            np.asarray(p, dtype=np.float64) ** 2 for p in (p2, p3, p4)
        ]
        hi, lo = self.varpi.dd
        hi, lo = np.float64(hi), np.float64(lo)
        mag = np.abs(hi)
        for k, lam in zip(ks, self.lambdas):
            l_hi, l_lo = lam.dd
            p, e = two_prod(k, np.float64(l_hi))
            t_hi, t_lo = two_sum(p, e + k * l_lo)
            hi, lo = dd_add(hi, lo, t_hi, t_lo)
            mag = mag + np.abs(t_hi)
        return hi, lo, mag

    def form_exact(self, p1, p2, p3, p4) -> Fraction:
        """The form with each coefficient replaced by its exact bracket midpoint."""
        ks = (p1, p2 * p2, p3 * p3, p4 * p4)
        return sum((lam.mid * int(k) for lam, k in zip(self.lambdas, ks)), self.varpi.mid)
