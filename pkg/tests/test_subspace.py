from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chowkit.ideal import Variety
from chowkit.poly import parse_poly
from chowkit.subspace import (InstanceError, SubspaceInstance, embed_phi, subspace_lhs,
                              verify_height_bounds, verify_lemma_3_30)

from strategies import nonzero_points

X = ["x0", "x1"]
P1 = Variety([], X)


def veronese(places=("inf",), scale=1):
    sys = [parse_poly(t, X) for t in ("x0^2", "x0*x1", "x1^2")]
    systems = {}
    for v in places:
        systems[v] = [sys[0].scale(scale)] + sys[1:]
    return SubspaceInstance(P1, systems, Fraction(1, 2))


def test_embedding():
    inst = veronese()
    emb = embed_phi(inst)
    assert emb.R == 2 and emb.D == 2
    assert emb.dim_ok and emb.degree_ok and emb.R_ok
    assert len(emb.Y.generators) == 1


def test_mixed_degrees_lift_to_common_degree():
    inst = SubspaceInstance(P1, {"inf": [parse_poly("x0", X), parse_poly("x1^2", X)]}, 1)
    emb = embed_phi(inst)
    assert inst.Delta == 2 and emb.D == 1 and emb.Y.dim == 1


def test_height_bounds():
    inst = veronese()
    rep = verify_height_bounds(inst, embed_phi(inst))
    assert rep.h1_holds and rep.hY_holds


def test_lhs_at_simple_points():
    inst = veronese()
    rep = subspace_lhs(inst, [1, 1])
    assert rep.lhs == rep.rhs and rep.is_solution and not rep.height_gate
    assert not subspace_lhs(inst, [1, 10 ** 6]).is_solution


@given(nonzero_points(2).filter(all), st.builds(Fraction, st.integers(1, 99), st.integers(1, 99)))
def test_lhs_invariant_under_point_scaling(x, lam):
    inst = veronese(("inf", 2, 3))
    a = subspace_lhs(inst, x)
    b = subspace_lhs(inst, [lam * t for t in x])
    assert a.lhs == b.lhs


@given(nonzero_points(2).filter(all), st.integers(-3, 3), st.integers(-3, 3))
def test_lhs_invariant_under_polynomial_scaling(x, i, j):
    lam = Fraction(2) ** i * Fraction(3) ** j
    a = subspace_lhs(veronese(("inf", 2, 3)), x)
    b = subspace_lhs(veronese(("inf", 2, 3), scale=lam), x)
    assert a.lhs == b.lhs


def test_R_bound_for_several_places():
    inst = veronese(("inf", 2, 5))
    emb = embed_phi(inst)
    assert emb.R + 1 <= (inst.m + 1) * inst.s


def test_lemma_at_small_point():
    rep = verify_lemma_3_30(veronese(), [1, 2])
    assert rep.conditions_hold
    assert rep.holds_bound
    assert rep.E == Fraction(1, 3)
    assert not rep.gate
    assert not rep.holds_conclusion


def test_lemma_hypotheses_unmet():
    with pytest.raises(InstanceError):
        verify_lemma_3_30(veronese(), [1, 3])


def test_point_must_lie_on_variety():
    conic = Variety.from_strings(["y0", "y1", "y2"], ["y0*y2 - y1^2"])
    inst = SubspaceInstance(conic, {"inf": [parse_poly(t, ["y0", "y1", "y2"]) for t in ("y0", "y2")]}, 1)
    with pytest.raises(InstanceError):
        subspace_lhs(inst, [1, 2, 3])
