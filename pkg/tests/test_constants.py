import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chowkit.constants import (LogValue, _lv_log, ParamSet, constants_A, constants_B, fundamental_estimates,
                               identity_checks, log_compare, log_T, substituted_B, sweep_params)

params = st.builds(lambda n, dm, d, Dl, dl: ParamSet(n=n, m=n + dm, d=d, Delta=Dl, delta=dl),
                   st.integers(1, 3), st.integers(0, 3), st.integers(1, 2), st.integers(1, 2),
                   st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(1, 3)]))


def unit():
    return ParamSet(n=1, m=1, d=1, Delta=1, delta=1)


def test_A2_at_unit_parameters():
    assert constants_A(unit())["A2"] == 126


def test_A3_at_unit_parameters():
    with mpmath.workdps(40):
        assert abs(constants_A(unit())["logA3"].mp / (2 ** 26 * mpmath.log(2)) - 1) < mpmath.mpf(10) ** -30


def test_B_examples():
    assert constants_B(1, 2, 1, 1)["B2"] == 14
    with mpmath.workdps(40):
        lb3 = constants_B(1, 1, 1, 1)["logB3"].mp
        assert abs(lb3 - 2 ** 9 * mpmath.log(4)) < mpmath.mpf(10) ** -30


@given(params)
def test_A2_B2_linear_in_inverse_delta(p):
    half = ParamSet(n=p.n, m=p.m, d=p.d, Delta=p.Delta, delta=p.delta / 2)
    assert constants_A(half)["A2"] == 2 * constants_A(p)["A2"]
    assert constants_B(p.n, 2, 3, p.delta / 2)["B2"] == 2 * constants_B(p.n, 2, 3, p.delta)["B2"]


@given(params)
def test_substituted_B2_against_A2(p):
    lhs = substituted_B(p)["B2"] * p.Delta
    A2 = constants_A(p)["A2"]
    # equal exactly when (m-n+1)(n+1) + 1 = n + 2, i.e. m = n; otherwise off by ((alpha+1)/(n+2))^2
    assert lhs == A2 * Fraction(p.alpha + 1, p.n + 2) ** 2
    assert (lhs == A2) == (p.m == p.n)


@given(params)
def test_B1_T_below_A1(p):
    A = constants_A(p)
    logBT = substituted_B(p)["logB1"] + log_T(p)
    assert log_compare(logBT, A["logA1_derived"])[0]
    assert log_compare(logBT, A["logA1_printed"])[0]


def test_estimate_two_fails_only_for_small_products():
    fails = set()
    for p in sweep_params():
        for chk in fundamental_estimates(p):
            if not chk.holds:
                fails.add((chk.name, (p.m + 1) * p.s))
    assert fails == {("estimate2", 2), ("estimate2", 3), ("estimate3.link1", 2), ("estimate3.link1", 3)}


def test_estimate_two_small_case_is_false_numerically():
    # log 8 versus sqrt(2) log 4
    assert math.log(8) > math.sqrt(2) * math.log(4)


def test_identity_check_names():
    names = [c.name for c in identity_checks(unit())]
    assert "B2'*Delta == A2" in names
    assert "log(B1'*T) <= log A1 [derived]" in names
    assert "log(B1'*T) <= log A1 [printed]" in names
    assert sum(n.startswith("estimate") for n in names) == 7


def test_sweep_size():
    assert len(sweep_params()) == 96


def test_logvalue_arithmetic():
    a = _lv_log(Fraction(8))
    b = _lv_log(Fraction(2)).scaled(3)
    assert LogValue(Fraction(3)).scaled(2).exact == 6
    assert log_compare(a, b)[0] and log_compare(b, a)[0]


def test_paramset_validation():
    with pytest.raises(ValueError):
        ParamSet(n=2, m=1, d=1, Delta=1, delta=1)
    with pytest.raises(ValueError):
        ParamSet(n=1, m=1, d=1, Delta=1, delta=2)
