from fractions import Fraction

import mpmath
from hypothesis import given
from hypothesis import strategies as st

from chowkit.lognum import LogNum

bases = st.builds(Fraction, st.integers(1, 50), st.integers(1, 50))
coeffs = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))
lognums = st.dictionaries(bases, coeffs, max_size=4).map(LogNum)


@given(lognums)
def test_sign_matches_high_precision(x):
    v = x.mp(120)
    if abs(v) > mpmath.mpf(10) ** -60:
        assert x.sign() == (1 if v > 0 else -1)
    else:
        assert x.sign() == 0


@given(lognums, lognums)
def test_order_is_consistent_with_subtraction(a, b):
    assert (a < b) == ((a - b).sign() < 0)
    assert (a == b) == ((a - b).sign() == 0)


def test_equal_values_with_different_terms():
    assert LogNum.log(4) == LogNum.log(2, 2)
    assert LogNum.log(6) == LogNum.log(2) + LogNum.log(3)
    assert LogNum.log(Fraction(1, 2)) == -LogNum.log(2)


def test_ratio():
    assert LogNum.log(8).ratio(LogNum.log(4)) == Fraction(3, 2)
    assert LogNum.log(3).ratio(LogNum.log(2)) is None


def test_arg_and_render():
    assert (LogNum.log(2) + LogNum.log(3)).arg == 6
    assert LogNum.log(2, Fraction(1, 2)).arg is None
    assert LogNum.zero().render() == "0"
    assert float(LogNum.zero()) == 0.0
