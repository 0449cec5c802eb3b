import math

import numpy as np
import pytest

from dhlab.analysis.integrals import Interval, integral_I
from dhlab.analysis.major import _tent_cdf, constructive_bound, major_lower_J1
from dhlab.analysis.tails import one_sided_moment, trivial_tail_bound
from dhlab.errors import DomainError, SignPatternError
from dhlab.problem import ProblemSpec


def test_one_sided_moment_example():
    # |l1| A = 2: sum_{n >= 2} (n-1)^-2 = pi^2/6, times the 1/pi^2 kernel constant
    assert one_sided_moment(6.0, 1.0, 2.0, 0.5) == pytest.approx(1.0)
    assert one_sided_moment(6.0, 2.0, 1.0, 0.5) == pytest.approx(2.0)


def test_tail_bound_domain(toy):
    with pytest.raises(DomainError):
        trivial_tail_bound(toy, toy.params.R / 2)


def test_tail_bound_doubling():
    spec = ProblemSpec.build((1, -1, -1, -1), 0, 2000, 0.04, overrides={"eta": 2.0})
    R = spec.params.R
    b = [trivial_tail_bound(spec, A).bound for A in (R, 2 * R, 4 * R, 8 * R)]
    ratios = [b[i + 1] / b[i] for i in range(3)]
    assert all(0.4 < r < 0.6 for r in ratios)
    assert b == sorted(b, reverse=True)


@pytest.mark.slow
def test_tail_bound_dominates_measured_integral():
    spec = ProblemSpec.build((1, -1, -1, -1), 0, 2000, 0.04, overrides={"eta": 2.0})
    A = spec.params.R
    tb = trivial_tail_bound(spec, A)
    v = integral_I(spec, Interval(A, 10 * A)).value + integral_I(spec, Interval(-10 * A, -A)).value
    assert abs(v) <= tb.bound


def test_tent_cdf():
    x = np.array([-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0])
    assert _tent_cdf(x, 1.0).tolist() == [0.0, 0.0, 0.125, 0.5, 0.875, 1.0, 1.0]


def test_sign_pattern():
    spec = ProblemSpec.build((1, 2, 3, 4), 0, 1000, 0.1)
    with pytest.raises(SignPatternError):
        major_lower_J1(spec, 100)


def test_zero_samples_constructive_only():
    spec = ProblemSpec.build((1, 1, -1, -1), 0, 1e4, 0.1, overrides={"eta": 1.0})
    r = major_lower_J1(spec, 0)
    assert r.estimate is None and r.constructive > 0


def test_wide_eta_identity():
    # t1 in [5, 10], t_j^2 in [5, 10]: form in [-25, -5], so with eta = 30 the
    # integrand is eta + form everywhere and J1 has a closed form
    spec = ProblemSpec.build((1, -1, -1, -1), 0, 10, 0.5, overrides={"eta": 30.0})
    a, b = math.sqrt(5), math.sqrt(10)
    w = b - a
    m2 = (b**3 - a**3) / 3  # int t^2 over [a, b]
    exact = 30 * 5 * w**3 + 7.5 * 5 * w**3 - 5 * 3 * m2 * w**2
    r = major_lower_J1(spec, 20000, seed=1)
    assert abs(r.estimate - exact) <= 5 * r.stderr + 1e-12
    assert r.stderr < 1e-3 * exact
    assert r.estimate >= (30 - 25) * 5 * w**3


@pytest.mark.parametrize("lams", [(1, 1, -1, -1), (1, -1, -1, -1), (1, 1, 1, -1),
                                  (1, "-sqrt2", "-sqrt3", "-sqrt5"), (-1, "sqrt2", 1, "-e")])
def test_constructive_below_estimate(lams):
    spec = ProblemSpec.build(lams, 0, 1e4, 0.1, overrides={"eta": 1.0})
    r = major_lower_J1(spec, 50000, seed=2)
    assert r.constructive > 0
    assert r.estimate - 4 * r.stderr >= r.constructive


def _grid_oracle(spec, n=160):
    X, d, eta = spec.X, spec.delta, spec.eta
    l1, l2, l3, l4 = (float(v) for v in spec.lambdas)
    t0, t1 = math.sqrt(d * X), math.sqrt(X)
    h = (t1 - t0) / n
    t = t0 + h * (np.arange(n) + 0.5)
    tot = 0.0
    for a in t:
        g = l2 * a * a + l3 * t[:, None] ** 2 + l4 * t[None, :] ** 2 + float(spec.varpi)
        lo, hi = np.minimum(l1 * d * X + g, l1 * X + g), np.maximum(l1 * d * X + g, l1 * X + g)
        tot += ((_tent_cdf(hi, eta) - _tent_cdf(lo, eta)) / abs(l1)).sum()
    return tot * h**3


def test_mc_against_reference_runs():
    spec = ProblemSpec.build((1, 1, -1, -1), 0, 1e4, 0.1, overrides={"eta": 1.0})
    small = major_lower_J1(spec, 10**5, seed=3).estimate
    ref = major_lower_J1(spec, 10**7, seed=99).estimate
    assert small == pytest.approx(ref, rel=0.05)
    assert ref == pytest.approx(_grid_oracle(spec), rel=1e-3)


def test_mc_thread_invariance():
    spec = ProblemSpec.build((1, 1, -1, -1), 0, 1e4, 0.1, overrides={"eta": 1.0})
    assert major_lower_J1(spec, 30000, 4, threads=1) == major_lower_J1(spec, 30000, 4, threads=3)


def test_constructive_bound_is_rigorous_small_case():
    spec = ProblemSpec.build((1, -1, -1, -1), 0, 400, 0.1, overrides={"eta": 2.0})
    bound, pivot = constructive_bound(spec)
    assert 0 < bound <= _grid_oracle(spec, 200)
