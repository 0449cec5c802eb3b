import itertools
import math

import numpy as np
import pytest

from dhlab.analysis.integrals import (Interval, Major, Minor, QuadratureSpec, TrivialTruncated,
                                      circle_identity, integral_I, kernel_weighted_mean,
                                      major_arc_defect, weighted_solution_sum)
from dhlab.analysis.meanvalues import mean_value_L2
from dhlab.errors import BandwidthError, DomainError
from dhlab.kernel import fejer_hat
from dhlab.problem import ProblemSpec


def _brute_weighted(spec):
    # every quadruple, exact rational form with float hat
    tot = []
    for q in itertools.product(spec.p1.tolist(), *[spec.p_sq.tolist()] * 3):
        f = float(spec.form_exact(*q))
        h = spec.eta - abs(f)
        if h > 0:
            tot.append(math.prod(math.log(p) for p in q) * h)
    return math.fsum(tot)


def test_toy_weighted_sum(toy):
    w = weighted_solution_sum(toy)
    assert w == pytest.approx(_brute_weighted(toy), rel=1e-13)
    one = math.log(83) * math.log(3) * math.log(5) * math.log(7) * 0.5
    assert w >= one
    s1, s2 = toy.sums_at_zero()
    assert w <= toy.eta * s1 * s2**3


def test_irrational_weighted_sum_matches_brute_force():
    spec = ProblemSpec.build((1, "-sqrt2", "-sqrt3", "-sqrt5"), "pi", 300, 0.04, overrides={"eta": 3})
    assert weighted_solution_sum(spec) == pytest.approx(_brute_weighted(spec), rel=1e-12)


def test_tiny_eta_gives_zero():
    spec = ProblemSpec.build((1, "-sqrt2", "-sqrt3", "-sqrt5"), "pi", 200, 0.04, overrides={"eta": 1e-9})
    assert weighted_solution_sum(spec) == 0.0


def test_identity_toy(toy):
    rep = circle_identity(toy, 1000.0)
    assert rep.passed
    assert rep.discrepancy < 0.05
    assert abs(rep.imag_residual) <= 1e-8 * abs(rep.integral)


def test_identity_improves_with_A(toy):
    d = [circle_identity(toy, A).discrepancy for A in (250.0, 1000.0)]
    assert d[1] < d[0]


def test_bandwidth_guard(toy):
    with pytest.raises(BandwidthError):
        integral_I(toy, Interval(-1, 1), QuadratureSpec(step=1.0))


def test_region_handling(toy):
    assert integral_I(toy, Interval(0.3, 0.3)).value == 0
    with pytest.raises(DomainError):
        integral_I(toy, TrivialTruncated(toy.params.R / 2))
    with pytest.raises(DomainError):
        integral_I(toy, Interval(1, 0))


def test_small_eta_kernel_bound(toy):
    spec = toy.with_params(eta=1e-4)
    val = integral_I(spec, Interval(-0.05, 0.05)).value
    assert abs(val) <= spec.eta**2 * 0.1 * spec.trivial_product()


def test_regions_add_up(toy):
    spec = toy.with_params(eta=8.0)  # R = (ln 100)^2 / 64, minor arc nonempty
    A = 3 * spec.params.R
    parts = [integral_I(spec, r).value for r in (Major(), Minor(), TrivialTruncated(A))]
    whole = integral_I(spec, Interval(-A, A), QuadratureSpec(rule="gauss")).value
    assert abs(sum(parts) - whole) < 1e-8 * spec.trivial_product() * spec.eta


def test_kernel_weighted_mean_crude_bound(toy):
    spec = toy.with_params(eta=8.0)
    km = kernel_weighted_mean(spec, "S1sq")
    L2 = mean_value_L2(spec.X, spec.delta, spec.linear_table).exact
    periods = math.ceil(spec.params.R) + 1
    assert 0 <= km.value <= spec.eta**2 * 2 * periods * L2
    smaller = kernel_weighted_mean(spec.with_params(eta=1e-3, R=spec.params.R), "S1sq")
    assert smaller.value < 1e-4 * km.value
    with pytest.raises(DomainError):
        kernel_weighted_mean(spec, "S2fourth", j=1)


@pytest.mark.slow
def test_kernel_weighted_mean_trend():
    ratios = []
    for X in (500, 1000, 2000):
        spec = ProblemSpec.build((1, "-sqrt2", "-sqrt3", "-sqrt5"), "pi", X, 0.1)
        ratios.append(kernel_weighted_mean(spec, "S1sq").ratio)
        kernel_weighted_mean(spec, "S2fourth", j=2)
    print("S1sq ratios", ratios)
    assert max(ratios) / min(ratios) < 50


def test_major_arc_defect_is_small_relative_to_scale():
    spec = ProblemSpec.build((1, -1, -1, -1), 0, 400, 0.04, overrides={"eta": 2.0})
    md = major_arc_defect(spec)
    assert np.isfinite(md.defect.real)
    # T-integral is the smooth main term; it is real up to rounding
    assert abs(md.t_integral.imag) < 1e-8 * abs(md.t_integral.real)
