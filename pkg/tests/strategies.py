"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from chowkit.poly import MultiPoly

small_fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonneg_fracs = st.builds(Fraction, st.integers(0, 6), st.integers(1, 4))


def monomials(nvars, max_deg=3):
    return st.lists(st.integers(0, max_deg), min_size=nvars, max_size=nvars).map(tuple)


def polys(nvars=3, max_terms=4, max_deg=3):
    return st.dictionaries(monomials(nvars, max_deg), small_fracs, max_size=max_terms).map(
        lambda d: MultiPoly(d, nvars))


def forms(nvars, degree, max_terms=4):
    """Homogeneous polynomials of a fixed degree (possibly zero)."""
    from chowkit.ideal import monomials_of_degree
    monos = list(monomials_of_degree(nvars, degree))
    return st.dictionaries(st.sampled_from(monos), small_fracs, max_size=max_terms).map(
        lambda d: MultiPoly(d, nvars))


def points(nvars):
    return st.lists(small_fracs, min_size=nvars, max_size=nvars)


def nonzero_points(nvars):
    return points(nvars).filter(any)
