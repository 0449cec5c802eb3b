import csv
import io
import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from dhlab.analysis.integrals import weighted_solution_sum
from dhlab.errors import DomainError, OverflowGuard, ScaleError
from dhlab.problem import ProblemSpec
from dhlab.search import (CSV_COLUMNS, FixedWindow, MarginClass, TheoremThreshold,
                          brute_force_oracle, count_N, find_solutions, to_csv, to_json)


def test_toy_contains_known_solution(toy):
    recs = find_solutions(toy, FixedWindow(0.5))
    hit = [r for r in recs if r.key == (83, 3, 5, 7)]
    assert hit and hit[0].form_value == 0.0 and hit[0].max_p == 83
    assert hit[0].margin_class is MarginClass.CLEAR
    assert all(abs(r.form_value) <= r.threshold for r in recs)
    assert [abs(r.form_value) for r in recs] == sorted(abs(r.form_value) for r in recs)


def test_limit(toy):
    assert len(find_solutions(toy, FixedWindow(0.5), limit=3)) == 3
    with pytest.raises(DomainError):
        find_solutions(toy, FixedWindow(0.5), limit=0)


def test_empty_square_range():
    spec = ProblemSpec.build((1, -1, -1, -1), 0, 10, 0.95)
    assert len(spec.p_sq) == 0
    assert find_solutions(spec, FixedWindow(1.0)) == []
    assert count_N(spec, 1.0) == (0, 0.0)


def test_count_N(toy):
    n, w = count_N(toy, 0.5)
    assert n >= 1
    assert w == pytest.approx(weighted_solution_sum(toy), rel=1e-13)
    assert count_N(toy, 0.0) == (0, 0.0)


def test_count_monotone_in_eta():
    spec = ProblemSpec.build((1, "-sqrt2", "-sqrt3", "-sqrt5"), "pi", 1500, 0.04)
    counts = [count_N(spec, eta)[0] for eta in (0.01, 0.05, 0.2, 0.6, 1.5, 4.0)]
    assert counts == sorted(counts) and counts[-1] > counts[0]


SPECS = [
    ((1, -1, -1, -1), 0, 100, 0.04, FixedWindow(0.5)),
    ((1, "-sqrt2", "-sqrt3", "-sqrt5"), "pi", 2000, 0.04, TheoremThreshold(0.05)),
    (("sqrt2", -1, "e", "-sqrt3"), "1/3", 1500, 0.05, FixedWindow(0.1)),
    ((1, "-pi", "sqrt3", "-1/2"), "-e", 1200, 0.05, FixedWindow(0.3)),
    ((-2, "sqrt5", -1, "sqrt7"), 0.25, 2000, 0.02, TheoremThreshold(0.05)),
]


@pytest.mark.parametrize("lams,varpi,X,d,mode", SPECS)
def test_oracle_equivalence(lams, varpi, X, d, mode):
    spec = ProblemSpec.build(lams, varpi, X, d)
    fast = find_solutions(spec, mode)
    slow = brute_force_oracle(spec, mode)
    assert {r.key: r for r in fast} == {r.key: r for r in slow}
    assert [r.key for r in slow] == sorted(r.key for r in slow)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.sampled_from(["1", "-1", "sqrt2", "-sqrt3", "e", "-pi", "2/3", "-5/7"]),
                min_size=4, max_size=4),
       st.floats(-3, 3, allow_nan=False), st.floats(0.05, 2.0), st.integers(60, 800))
def test_oracle_equivalence_random(lams, varpi, eta, X):
    spec = ProblemSpec.build(lams, varpi, X, 0.03)
    mode = FixedWindow(eta)
    assert {r.key for r in find_solutions(spec, mode)} == {r.key for r in brute_force_oracle(spec, mode)}


def test_swap_symmetry():
    a = ProblemSpec.build((1, "-sqrt2", "-sqrt3", "-sqrt5"), "pi", 2000, 0.04)
    b = ProblemSpec.build((1, "-sqrt2", "-sqrt5", "-sqrt3"), "pi", 2000, 0.04)
    mode = FixedWindow(0.8)
    ra = {r.key: r.form_value for r in find_solutions(a, mode)}
    rb = {(r.p1, r.p2, r.p4, r.p3): r.form_value for r in find_solutions(b, mode)}
    assert ra.keys() == rb.keys() and ra
    assert all(abs(ra[k] - rb[k]) < 1e-12 for k in ra)


def test_records_reverify():
    spec = ProblemSpec.build((1, "-sqrt2", "-sqrt3", "-sqrt5"), "pi", 5000, 0.04)
    for r in find_solutions(spec, TheoremThreshold(0.05)):
        assert r.threshold == pytest.approx(r.max_p ** (-1 / 18 + 0.05))
        exact = float(spec.form_exact(r.p1, r.p2, r.p3, r.p4))
        assert abs(exact - r.form_value) < 1e-3 * r.threshold or r.margin_class is MarginClass.BORDERLINE


def test_guards():
    big = ProblemSpec.build((1, -1, -1, -1), 0, 2e4, 0.1)
    with pytest.raises(ScaleError):
        brute_force_oracle(big, FixedWindow(0.5))
    huge = ProblemSpec.build((1e13, -1, -1, -1), 0, 1000, 0.1)
    with pytest.raises(OverflowGuard):
        find_solutions(huge, FixedWindow(0.5))


def test_all_positive_runs_empty():
    spec = ProblemSpec.build((1, 1, 1, 1), 0, 500, 0.1)
    assert brute_force_oracle(spec, FixedWindow(0.5)) == []


def test_output_formats(toy):
    recs = find_solutions(toy, FixedWindow(0.5), limit=4)
    rows = list(csv.reader(io.StringIO(to_csv(recs))))
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 5
    assert float(rows[1][4]) == recs[0].form_value
    data = json.loads(to_json(recs))
    assert data[0]["margin_class"] == "clear" and data[0]["p1"] == recs[0].p1


@pytest.mark.slow
def test_irrational_spec_at_one_million():
    spec = ProblemSpec.build((1, "-sqrt2", "-sqrt3", "-sqrt5"), "pi", 1e6, 0.04)
    recs = find_solutions(spec, TheoremThreshold(0.05), limit=50)
    assert recs and all(abs(r.form_value) <= r.threshold for r in recs)
