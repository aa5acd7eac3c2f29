from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chowkit.heights import PlaceWeightSystem
from chowkit.hilbert_weight import (PlacePreconditionError, hilbert_weight, hilbert_weight_exhaustive,
                                    normalized_chow_weight, verify_E_lower_bound, verify_ef_inequality)

from strategies import nonneg_fracs


def test_p1_examples(p1):
    assert hilbert_weight(p1, 2, [1, 0])[0] == 3
    assert hilbert_weight(p1, 2, [0, 0])[0] == 0


def test_conic_degree_one(conic):
    c = [Fraction(1, 3), 2, 5]
    assert hilbert_weight(conic, 1, c)[0] == sum(c)


@given(st.lists(nonneg_fracs, min_size=3, max_size=3), st.integers(1, 2))
def test_greedy_equals_exhaustive_conic(conic, c, u):
    S, basis = hilbert_weight(conic, u, c)
    assert S == hilbert_weight_exhaustive(conic, u, c)
    assert basis.is_valid() and basis.size == conic.hilbert_function(u)


@given(st.lists(nonneg_fracs, min_size=4, max_size=4))
def test_greedy_equals_exhaustive_twisted_cubic(twisted_cubic, c):
    assert hilbert_weight(twisted_cubic, 1, c)[0] == hilbert_weight_exhaustive(twisted_cubic, 1, c)


@given(st.lists(st.integers(0, 3).map(Fraction), min_size=3, max_size=3))
def test_tie_break_independence(conic, c):
    vals = {hilbert_weight(conic, 3, c, tie=t)[0] for t in ("grevlex", "grlex", "lex")}
    assert len(vals) == 1


@given(st.lists(nonneg_fracs, min_size=3, max_size=3), nonneg_fracs)
def test_homogeneous_in_weights(conic, c, lam):
    assert hilbert_weight(conic, 3, [lam * x for x in c])[0] == lam * hilbert_weight(conic, 3, c)[0]


@given(st.lists(nonneg_fracs, min_size=3, max_size=3), st.integers(0, 2), nonneg_fracs)
def test_monotone_in_weights(conic, c, j, bump):
    c2 = list(c)
    c2[j] += bump
    assert hilbert_weight(conic, 3, c2)[0] >= hilbert_weight(conic, 3, c)[0]


def test_ef_examples(p1, conic):
    rep = verify_ef_inequality(p1, 2, [1, 0])
    assert rep.lhs == Fraction(1, 2) and rep.holds
    rep = verify_ef_inequality(conic, 3, [1, 0, 0])
    assert rep.S == 9 and rep.lhs == Fraction(3, 7) and rep.holds


@given(st.lists(nonneg_fracs, min_size=4, max_size=4), st.integers(4, 6))
def test_ef_defect_within_error_term(twisted_cubic, c, u):
    rep = verify_ef_inequality(twisted_cubic, u, c)
    assert rep.holds
    assert rep.defect <= rep.err


def test_ef_requires_u_above_degree(conic):
    with pytest.raises(ValueError):
        verify_ef_inequality(conic, 2, [1, 0, 0])


def test_normalized_chow_weight(conic):
    one = PlaceWeightSystem({"inf": [Fraction(1, 2), 0, Fraction(1, 2)]})
    two = PlaceWeightSystem({"inf": [Fraction(1, 2), 0, Fraction(1, 2)], 2: [Fraction(1, 2), 0, Fraction(1, 2)]})
    assert normalized_chow_weight(conic, one) == Fraction(1, 2)
    assert normalized_chow_weight(conic, PlaceWeightSystem({})) == 0
    assert normalized_chow_weight(conic, two) == 2 * normalized_chow_weight(conic, one)


def test_E_lower_bound(conic):
    rep = verify_E_lower_bound(conic, PlaceWeightSystem({"inf": [Fraction(1, 2), 0, Fraction(1, 2)]}),
                               {"inf": [0, 2]}, 1)
    assert rep.E == rep.bound == Fraction(1, 2) and rep.holds
    rep = verify_E_lower_bound(conic, PlaceWeightSystem({"inf": [1, 0, 0]}), {"inf": [0, 2]}, 1)
    assert rep.holds


def test_E_lower_bound_rejects_weights_off_index_set(conic):
    with pytest.raises(PlacePreconditionError):
        verify_E_lower_bound(conic, PlaceWeightSystem({"inf": [Fraction(1, 2), Fraction(1, 2), 0]}),
                             {"inf": [0, 2]}, 1)
