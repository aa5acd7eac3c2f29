import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chowkit.heights import (INF, Place, PlaceWeightSystem, QParam, abs_value, check_norm_inequalities,
                             height_point, height_point_places, height_polys, product_formula_check,
                             select_weight_tuple, selection_contract_holds, twisted_height,
                             weight_grid_size_bound)
from chowkit.lognum import LogNum
from chowkit.poly import MultiPoly, parse_poly
from chowkit.suite import random_selection_input

from strategies import forms, nonzero_points

nonzero_rationals = st.builds(Fraction, st.integers(-10 ** 9, 10 ** 9), st.integers(1, 10 ** 9)).filter(bool)
places = st.sampled_from([INF, Place(2), Place(3), Place(5), Place(7)])
X = ["x0", "x1", "x2"]


def test_product_formula_examples():
    assert product_formula_check(6) == 1
    assert product_formula_check(Fraction(-5, 4)) == 1
    assert product_formula_check(1) == 1


@given(nonzero_rationals)
def test_product_formula(x):
    assert product_formula_check(x) == 1


def test_abs_values():
    assert abs_value(12, Place(2)) == Fraction(1, 4)
    assert abs_value(Fraction(1, 9), Place(3)) == 9
    assert abs_value(-7, INF) == 7
    assert abs_value(0, Place(5)) == 0


def test_height_examples():
    assert height_point([1, 0, 0]) == LogNum.zero()
    assert height_point([3, 4]).arg == 4
    assert height_point([Fraction(1, 2), 3]).arg == 6


@given(nonzero_points(3), nonzero_rationals)
def test_height_scaling_invariant(x, lam):
    assert height_point([lam * t for t in x]) == height_point(x)


@given(nonzero_points(3))
def test_height_equals_place_sum(x):
    assert height_point(x) == height_point_places(x)


def test_height_polys_examples():
    h, h1 = height_polys([parse_poly("x0 + x1", X)])
    assert h.arg == 1 and h1.arg == 2
    h, h1 = height_polys([parse_poly("2*x0^2 - 3*x1*x2", X)])
    assert h.arg == 3 and h1.arg == 5
    h, h1 = height_polys([parse_poly("x0", X)])
    assert h.arg == 1 and h1.arg == 1


@given(st.lists(nonzero_rationals, min_size=2, max_size=4), st.randoms(use_true_random=False))
def test_height_invariant_under_coefficient_permutation(cs, rnd):
    monos = [(k, 3 - k, 0) for k in range(len(cs))]
    f = MultiPoly(dict(zip(monos, cs)), 3)
    perm = list(cs)
    rnd.shuffle(perm)
    g = MultiPoly(dict(zip(monos, perm)), 3)
    assert height_polys([f])[0] == height_polys([g])[0]
    assert height_polys([f])[1] == height_polys([g])[1]


@given(forms(3, 2).filter(lambda f: not f.is_zero()), nonzero_points(3), places)
def test_norm_inequalities(f, x, v):
    rep = check_norm_inequalities([f, parse_poly("x0*x1", X)], x, v)
    assert rep.per_place_holds and rep.height_holds


def test_twisted_height_example():
    sys = PlaceWeightSystem({"inf": [1, 0]})
    assert twisted_height([3, 4], QParam(2), sys).arg == 6


@given(nonzero_points(3), st.integers(1, 50))
def test_twisted_height_zero_weights(y, base):
    sys = PlaceWeightSystem({"inf": [0, 0, 0], 2: [0, 0, 0]})
    assert twisted_height(y, QParam(base, Fraction(1, 3)), sys) == height_point(y)


def test_selection_example():
    c = select_weight_tuple([-2, -3], 4, Fraction(1, 2))
    assert selection_contract_holds([-2, -3], 4, Fraction(1, 2), c)


@st.composite
def selection_inputs(draw):
    q = draw(st.integers(1, 8))
    A = [Fraction(-draw(st.integers(0, 30)), draw(st.integers(1, 6))) for _ in range(q)]
    if not any(A):
        A[0] = Fraction(-1)
    lam = -sum(A) * Fraction(draw(st.integers(1, 10)), 10)
    theta = draw(st.sampled_from([Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]))
    return A, lam, theta


@given(selection_inputs())
def test_selection_contract(inp):
    A, lam, theta = inp
    c = select_weight_tuple(A, lam, theta)
    assert selection_contract_holds(A, lam, theta, c)


@pytest.mark.parametrize("theta", [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)])
@pytest.mark.parametrize("q", range(2, 9))
def test_selection_distinct_outputs_within_bound(q, theta):
    rng = random.Random(q * 1000 + theta.denominator)
    outputs = set()
    for _ in range(300):
        A, lam = random_selection_input(rng, q)
        outputs.add(select_weight_tuple(A, lam, theta))
    assert len(outputs) <= weight_grid_size_bound(q, theta)


def test_selection_preconditions():
    with pytest.raises(ValueError):
        select_weight_tuple([-1, 1], 1, Fraction(1, 2))
    with pytest.raises(ValueError):
        select_weight_tuple([-1, -1], 3, Fraction(1, 2))
    with pytest.raises(ValueError):
        select_weight_tuple([-1, -1], 1, Fraction(3, 4))
