from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chowkit.ideal import (NotHomogeneousError, Variety, eliminate, empty_intersection_check,
                           groebner_basis, intersection_dimension, normal_form)
from chowkit.poly import GREVLEX, LEX, MultiPoly, parse_poly

from strategies import polys

Y = ["y0", "y1", "y2"]
T = ["y0", "y1", "y2", "y3"]


def P(text, names=Y):
    return parse_poly(text, names)


def test_principal_ideal_basis_is_itself():
    f = P("y0*y2 - y1^2")
    assert groebner_basis([f]) == [f.monic()]


def test_monomial_ideal_basis():
    x0, x1 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
    assert sorted(groebner_basis([x0, x1]), key=str) == sorted([x0, x1], key=str)


def test_twisted_cubic_basis_has_three_elements(twisted_cubic):
    assert len(twisted_cubic.groebner(GREVLEX)) == 3


def test_reduced_basis_independent_of_presentation(twisted_cubic):
    g = [P(t, T) for t in ("y0*y2 - y1^2", "y1*y3 - y2^2", "y0*y3 - y1*y2")]
    alt = [g[0] + g[1], g[1], g[2] - g[0] * 0 + g[1] * 2]
    assert sorted(map(str, groebner_basis(g))) == sorted(map(str, groebner_basis(alt)))
    assert sorted(map(str, groebner_basis(g, LEX))) == sorted(map(str, groebner_basis(alt, LEX)))


def test_normal_form_one_step():
    basis = groebner_basis([P("y0*y2 - y1^2")], LEX)
    # under lex with y0 > y1 > y2 the leading term is y0*y2, so reduce that
    assert normal_form(P("y0*y2"), basis, LEX) == P("y1^2")
    basis = groebner_basis([P("y0*y2 - y1^2")], GREVLEX)
    assert normal_form(P("y1^2"), basis, GREVLEX) == P("y0*y2") or \
        normal_form(P("y0*y2"), basis, GREVLEX) == P("y1^2")


@given(polys(4, max_terms=5))
def test_normal_form_idempotent(p):
    basis = groebner_basis([P(t, T) for t in ("y0*y2 - y1^2", "y1*y3 - y2^2", "y0*y3 - y1*y2")])
    nf = normal_form(p, basis)
    assert normal_form(nf, basis) == nf


@pytest.mark.parametrize("nvars", [2, 3, 4])
def test_hilbert_function_of_projective_space(nvars):
    X = Variety([], [f"x{i}" for i in range(nvars)])
    for u in range(7):
        assert X.hilbert_function(u) == comb(nvars - 1 + u, u)


def test_hilbert_examples(p1, conic, twisted_cubic):
    assert p1.hilbert_function(3) == 4
    assert conic.hilbert_function(2) == 5
    assert twisted_cubic.hilbert_function(1) == 4
    assert [conic.hilbert_function(u) for u in range(6)] == [2 * u + 1 for u in range(6)]
    assert [twisted_cubic.hilbert_function(u) for u in range(6)] == [3 * u + 1 for u in range(6)]


def test_dim_degree_examples(conic, twisted_cubic):
    assert conic.dim_degree() == (1, 2)
    assert twisted_cubic.dim_degree() == (1, 3)
    assert Variety([], Y).dim_degree() == (2, 1)
    assert Variety([P("y0"), P("y1"), P("y2")], Y).dim_degree() == (-1, 0)


@given(st.integers(1, 4), st.integers(2, 4))
def test_hypersurface_dim_degree(D, nvars):
    names = [f"x{i}" for i in range(nvars)]
    f = MultiPoly.var(0, nvars) ** D + MultiPoly.var(nvars - 1, nvars) ** D
    assert Variety([f], names).dim_degree() == (nvars - 2, D)


def test_eliminate_veronese():
    names = ["s", "t", "y0", "y1", "y2"]
    gens = [parse_poly(t, names) for t in ("y0 - s^2", "y1 - s*t", "y2 - t^2")]
    basis, kept = eliminate(gens, [0, 1])
    assert list(kept) == [2, 3, 4]
    assert len(basis) == 1
    f = basis[0]
    assert {m for m in f.terms} == {(1, 0, 1), (0, 2, 0)}
    st_ = ["s", "t"]
    assert f.substitute([parse_poly(t, st_) for t in ("s^2", "s*t", "t^2")]).is_zero()


def test_eliminate_nothing_and_everything():
    x0, x1 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
    basis, _ = eliminate([x0 - x1], [])
    assert basis == groebner_basis([x0 - x1])
    basis, _ = eliminate([x0 - x1], [0])
    assert basis == []


def test_emptiness_examples(conic):
    y = [MultiPoly.var(i, 3) for i in range(3)]
    assert empty_intersection_check(conic, [y[0], y[2]])
    assert not empty_intersection_check(conic, [y[0], y[1]])
    assert empty_intersection_check(conic, y)
    assert intersection_dimension(conic, [y[0]]) == 0
    assert intersection_dimension(Variety([], Y), [y[0]]) == 1
    assert intersection_dimension(conic, [y[0], y[2]]) == -1


@given(st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=1, max_size=3))
def test_emptiness_iff_dimension_minus_one(conic, rows):
    hs = [MultiPoly({(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c}, 3) for a, b, c in rows]
    hs = [h for h in hs if not h.is_zero()]
    if not hs:
        return
    assert empty_intersection_check(conic, hs) == (intersection_dimension(conic, hs) == -1)


def test_non_homogeneous_generator_rejected():
    with pytest.raises(NotHomogeneousError):
        Variety([P("y0^2 + y1")], Y)
