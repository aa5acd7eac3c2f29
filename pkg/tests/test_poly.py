from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chowkit.poly import (GREVLEX, LEX, MultiPoly, PolySyntaxError, det, eval_poly, parse_poly,
                          render_poly, weighted_degree)

from strategies import points, polys

X = ["x0", "x1", "x2"]


def test_parse_conic_terms():
    p = parse_poly("x0*x2 - x1^2", X)
    assert p.terms == {(1, 0, 1): 1, (0, 2, 0): -1}


def test_parse_zero_is_empty():
    assert parse_poly("0", X).terms == {}
    assert parse_poly("0", X).is_zero()


def test_parse_coefficients():
    p = parse_poly("2*x0^2 - 3*x1*x2", X)
    assert sorted(p.terms.values()) == [-3, 2]


def test_parse_rationals_and_whitespace():
    p = parse_poly(" 1/2 * x0  -x1^3+ 7 ", X)
    assert p.terms == {(1, 0, 0): Fraction(1, 2), (0, 3, 0): -1, (0, 0, 0): 7}


def test_parse_reports_position():
    with pytest.raises(PolySyntaxError) as exc:
        parse_poly("x0 + * x1", X)
    assert exc.value.position == 5


def test_parse_unknown_variable():
    with pytest.raises(PolySyntaxError, match="y7"):
        parse_poly("x0 + y7", X)


def test_eval_examples():
    p = parse_poly("x0*x2 - x1^2", X)
    assert eval_poly(p, [1, 1, 1]) == 0
    assert eval_poly(p, [1, 2, 3]) == -1
    assert eval_poly(p, [0, 0, 0]) == 0


def test_weighted_degree_examples():
    assert weighted_degree((2, 1, 0), [1, 0, 0]) == 2
    assert weighted_degree((3, 1, 4), [0, 0, 0]) == 0
    assert weighted_degree((1, 0, 1), [Fraction(1, 2), 0, Fraction(1, 2)]) == 1
    with pytest.raises(ValueError):
        weighted_degree((1, 0), [1, 0, 0])


def test_det_of_linear_forms():
    a, b, c, d = (MultiPoly.var(i, 4) for i in range(4))
    assert det([[a, b], [c, d]]) == a * d - b * c


@given(polys(), polys(), polys())
def test_distributive(p, q, r):
    assert (p + q) * r == p * r + q * r


@given(polys(), polys())
def test_degree_additive(p, q):
    if p.is_zero() or q.is_zero():
        return
    assert (p * q).total_degree() == p.total_degree() + q.total_degree()


@given(polys(), polys(), points(3))
def test_eval_is_ring_homomorphism(p, q, x):
    assert eval_poly(p * q, x) == eval_poly(p, x) * eval_poly(q, x)
    assert eval_poly(p + q, x) == eval_poly(p, x) + eval_poly(q, x)


@given(st.lists(polys(max_terms=5), min_size=100, max_size=100))
def test_parse_render_round_trip_corpus(corpus):
    for p in corpus:
        assert parse_poly(render_poly(p, X), X) == p


@given(polys())
def test_render_is_canonical(p):
    shuffled = MultiPoly(dict(reversed(list(p.terms.items()))), 3)
    assert render_poly(shuffled, X) == render_poly(p, X)


@given(polys())
def test_leading_monomial_is_maximal(p):
    if p.is_zero():
        return
    for order in (GREVLEX, LEX):
        lm = p.leading_monomial(order)
        assert all(order.key(m) <= order.key(lm) for m in p.terms)
