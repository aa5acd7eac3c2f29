from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from chowkit.linalg import IncrementalEchelon, det, nullspace, rank

from strategies import small_fracs


def matrices(rows=4, cols=4):
    return st.lists(st.lists(small_fracs, min_size=cols, max_size=cols), min_size=1, max_size=rows)


@given(matrices())
def test_rank_matches_sympy(m):
    assert rank(m) == sympy.Matrix(m).rank()


@given(matrices(3, 3).filter(lambda m: len(m) == 3))
def test_det_matches_sympy(m):
    assert det(m) == Fraction(str(sympy.Matrix(m).det()))


@given(matrices(3, 5))
def test_nullspace_vectors_are_killed(m):
    basis = nullspace(m, 5)
    assert len(basis) == 5 - rank(m)
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


@given(matrices(6, 4))
def test_incremental_rank(m):
    ech = IncrementalEchelon()
    accepted = sum(ech.add({j: x for j, x in enumerate(row) if x}) for row in m)
    assert accepted == ech.rank == rank(m)
