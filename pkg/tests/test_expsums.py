import math

import mpmath
import numpy as np
import pytest
import scipy.integrate
import scipy.special
import sympy
from hypothesis import given, settings, strategies as st

from dhlab.errors import DomainError, PrecisionExhausted
from dhlab.expsums import (Kind, SumSpec, dichotomy_V, geometric_U1, powers_of_two_sum,
                           prime_exp_sum, scale, smooth_approx)
from dhlab.primes import sieve_range

LIN = SumSpec(Kind.LINEAR, 100, 0.1)
SQ = SumSpec(Kind.SQUARE, 100, 0.1)


def test_values_at_zero(table):
    ref1 = math.fsum(math.log(p) for p in sympy.primerange(10, 101))
    ref2 = math.fsum(math.log(p) for p in sympy.primerange(4, 11))
    assert prime_exp_sum(LIN, 0.0, table) == pytest.approx(ref1, rel=1e-14)
    assert abs(prime_exp_sum(LIN, 0.0, table)) == pytest.approx(78.381282, abs=1e-6)
    assert prime_exp_sum(SQ, 0.0, table).real == pytest.approx(ref2, rel=1e-14)
    assert prime_exp_sum(SQ, 0.0, table).real == pytest.approx(3.5553481, abs=1e-7)


def test_unweighted_linear_vanishes_at_one_over_length():
    spec = SumSpec(Kind.LINEAR, 100, 0.1, weighted=False)  # n = 10..100, 91 terms
    assert abs(prime_exp_sum(spec, 1 / 91)) < 1e-12


@settings(max_examples=40)
@given(st.floats(-3, 3, allow_nan=False), st.integers(10, 3000), st.floats(0.01, 0.9))
def test_U1_geometric(alpha, X, delta):
    spec = SumSpec(Kind.LINEAR, X, delta, weighted=False)
    got = prime_exp_sum(spec, alpha)
    ref = geometric_U1(alpha, X, delta)
    if abs(1 - np.exp(2j * np.pi * alpha)) < 1e-6:
        return  # closed form is ill-conditioned next to integer alpha
    assert abs(got - ref) <= 1e-9 * X


def test_large_phase_accuracy():
    # p^2 sqrt2 reaches 1e8; naive float phases lose ~1e-8, dd keeps ~1e-15
    X = 1e8
    spec = SumSpec(Kind.SQUARE, X, 0.999)
    t = sieve_range(9990, 10000)
    got = prime_exp_sum(spec, scale("sqrt2", 1.0), t)
    mpmath.mp.dps = 40
    ref = mpmath.fsum(mpmath.log(p) * mpmath.expjpi(2 * p * p * mpmath.sqrt(2))
                      for p in t.between(9995, 10000)[0].tolist())
    assert abs(got - complex(ref)) < 1e-12


def test_T1_closed_form_against_quadrature():
    for alpha in (0.0, 0.013, 0.37, -1.1):
        X, d = 100.0, 0.1
        re = scipy.integrate.quad(lambda t: math.cos(2 * math.pi * alpha * t), d * X, X, limit=400)[0]
        im = scipy.integrate.quad(lambda t: math.sin(2 * math.pi * alpha * t), d * X, X, limit=400)[0]
        assert abs(smooth_approx(Kind.LINEAR, alpha, X, d) - complex(re, im)) < 1e-9
    assert smooth_approx(Kind.LINEAR, 0.0, 100, 0.1) == pytest.approx(90)
    assert abs(smooth_approx(Kind.LINEAR, 1.0, 1.0, 0.0)) < 1e-15


def _t2_fresnel(alpha, X, d):
    # int e(alpha t^2) dt over [sqrt(dX), sqrt X] via Fresnel integrals
    c = math.sqrt(4 * abs(alpha))
    S0, C0 = scipy.special.fresnel(c * math.sqrt(d * X))
    S1, C1 = scipy.special.fresnel(c * math.sqrt(X))
    return complex(C1 - C0, math.copysign(1, alpha) * (S1 - S0)) / c


@settings(max_examples=30, deadline=None)
@given(st.floats(0.001, 50), st.booleans(), st.floats(0.01, 0.5))
def test_T2_against_fresnel(alpha, neg, d):
    alpha = -alpha if neg else alpha
    got = smooth_approx(Kind.SQUARE, alpha, 400.0, d)
    assert abs(got - _t2_fresnel(alpha, 400.0, d)) < 1e-10


def test_T2_at_zero_and_domain():
    assert smooth_approx(Kind.SQUARE, 0.0, 100, 0.04).real == pytest.approx(8.0)
    with pytest.raises(DomainError):
        smooth_approx(Kind.SQUARE, 0.0, 100, 1.0)
    with pytest.raises(DomainError):
        SumSpec(Kind.LINEAR, 100, 0.0)


def test_powers_of_two():
    assert powers_of_two_sum(0, 7) == pytest.approx(7)
    assert powers_of_two_sum(0.5, 3) == pytest.approx(3)
    assert powers_of_two_sum("1/3", 4).real == pytest.approx(-2)
    assert abs(powers_of_two_sum("1/3", 4).imag) < 1e-12
    with pytest.raises(PrecisionExhausted):
        powers_of_two_sum("sqrt2", 400)


def test_dichotomy_at_zero(table):
    v = dichotomy_V(0.0, 1, -1, LIN, SQ, table, table)
    assert float(v) == pytest.approx(min(math.sqrt(78.381282), 3.5553481), rel=1e-6)
