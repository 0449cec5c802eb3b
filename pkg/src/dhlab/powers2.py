"""Calculators for the two-primes-plus-powers-of-two variant: S'(n), C(q1, q2), s0 and L."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import DomainError

C_CONST = 10.0219168340
NU = 0.884472132


def sfrak_prime(n: int) -> Fraction:
    """prod over odd primes p | n of (p - 1)/(p - 2)."""
    if n <= 0:
        raise DomainError("n must be >= 1")
    out = Fraction(1)
    for p in sympy.primefactors(n):
        if p > 2:
            out *= Fraction(p - 1, p - 2)
    return out


def capC(q1: int, q2: int) -> float:
    if q1 < 1 or q2 < 1:
        raise DomainError("q1, q2 must be >= 1")
    a = math.log(2) + C_CONST * float(sfrak_prime(q1))
    b = math.log(2) + C_CONST * float(sfrak_prime(q2))
    if q1 == q2:
        return a  # sqrt(a) * sqrt(a), without the rounding of two square roots
    # sort so that capC(a, b) and capC(b, a) round identically
    a, b = sorted((a, b))
    return math.sqrt(a) * math.sqrt(b)


@dataclass(frozen=True)
class S0Input:
    lambda1: float
    q1: int
    q2: int
    eta: float


@dataclass
class S0Report:
    s0: int
    C: float
    numerator: float
    denominator: float
    ratio: float


def s_zero_report(inp: S0Input) -> S0Report:
    """s0 = 2 + max(0, ceil((log(C lambda1) - log eta) / -log nu))."""
    if not inp.eta > 0:
        raise DomainError("eta must be positive")
    c = capC(inp.q1, inp.q2)
    num = math.log(c * inp.lambda1) - math.log(inp.eta)
    den = -math.log(NU)
    ratio = num / den
    return S0Report(2 + max(0, math.ceil(ratio)), c, num, den, ratio)


def s_zero(inp: S0Input) -> int:
    return s_zero_report(inp).s0


def L_bound(eps: float, X: float, M: float) -> int:
    """floor(log2(eps X / (2 M)))."""
    if not eps * X > 2 * M:
        raise DomainError("need eps X > 2 M")
    r = Fraction(eps) * Fraction(X) / (2 * Fraction(M))
    # exact floor of log2 for a rational r > 1
    k = r.numerator.bit_length() - r.denominator.bit_length()
    while Fraction(2) ** k > r:
        k -= 1
    while Fraction(2) ** (k + 1) <= r:
        k += 1
    return k
