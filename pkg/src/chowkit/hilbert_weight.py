"""Hilbert weights, their maximizing monomial bases, the comparison with the
Chow weight, and the place-summed normalized Chow weight E_Y(c)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .chow import ChowForm, chow_form, chow_weight, verify_lower_bound
from .heights import Place, PlaceWeightSystem
from .ideal import Variety, empty_intersection_check, monomials_of_degree
from .linalg import IncrementalEchelon, rank
from .poly import GREVLEX, GRLEX, LEX, MonomialOrder, MultiPoly, as_fraction, weighted_degree

TIE_ORDERS = {"grevlex": GREVLEX, "grlex": GRLEX, "lex": LEX}


@dataclass
class HilbertBasis:
    monomials: list  # exponent tuples, in acceptance order
    weight: Fraction
    reference: list  # standard monomials v_0..v_{H-1}
    expressors: list  # row i: coordinates of y^{a_i} mod I in the reference basis

    @property
    def size(self) -> int:
        return len(self.monomials)

    def is_valid(self) -> bool:
        H = len(self.reference)
        return (len(self.expressors) == H and all(len(r) == H for r in self.expressors)
                and rank(self.expressors) == H)


def residue_vector(X: Variety, mono: tuple, index: Mapping) -> dict:
    """Normal form of a monomial as a sparse vector over the standard monomials."""
    nf = X.normal_form(MultiPoly.monomial(mono))
    return {index[m]: c for m, c in nf.terms.items()}


def hilbert_weight(X: Variety, u: int, c: Sequence, tie: str = "grevlex") -> tuple:
    """S_X(u, c) and a maximizing monomial basis of (R/I)_u.

    Greedy on the linear matroid of residues: scan degree-u monomials by
    decreasing c-weight and keep each one independent of those kept.
    """
    if u < 0:
        raise ValueError("u must be nonnegative")
    c = [as_fraction(x) for x in c]
    if len(c) != X.nvars:
        raise ValueError(f"weight vector has length {len(c)}, expected {X.nvars}")
    order: MonomialOrder = TIE_ORDERS[tie]
    ref = X.standard_monomials(u)
    H = len(ref)
    index = {m: i for i, m in enumerate(ref)}
    cands = sorted(monomials_of_degree(X.nvars, u),
                   key=lambda m: (weighted_degree(m, c), order.key(m)), reverse=True)
    ech = IncrementalEchelon()
    chosen, rows = [], []
    for m in cands:
        if ech.rank == H:
            break
        vec = residue_vector(X, m, index)
        if ech.add(vec):
            chosen.append(m)
            rows.append([vec.get(i, Fraction(0)) for i in range(H)])
    S = sum((weighted_degree(m, c) for m in chosen), Fraction(0))
    return S, HilbertBasis(chosen, S, ref, rows)


def hilbert_weight_exhaustive(X: Variety, u: int, c: Sequence) -> Fraction:
    """Max of sum a.c over every monomial basis of (R/I)_u (brute force)."""
    c = [as_fraction(x) for x in c]
    ref = X.standard_monomials(u)
    H = len(ref)
    index = {m: i for i, m in enumerate(ref)}
    monos = list(monomials_of_degree(X.nvars, u))
    vecs = {m: residue_vector(X, m, index) for m in monos}
    best = None
    for combo in itertools.combinations(monos, H):
        mat = [[vecs[m].get(i, Fraction(0)) for i in range(H)] for m in combo]
        if rank(mat) != H:
            continue
        w = sum((weighted_degree(m, c) for m in combo), Fraction(0))
        if best is None or w > best:
            best = w
    return best if best is not None else Fraction(0)


@dataclass
class EFReport:
    u: int
    S: Fraction
    H: int
    e: Fraction
    lhs: Fraction
    rhs: Fraction
    holds: bool
    err: Fraction  # (2N+1) D max(c) / u

    @property
    def defect(self) -> Fraction:
        """e/((N+1)D) - S/(uH)."""
        return self.rhs + self.err - self.lhs


def verify_ef_inequality(X: Variety, u: int, c: Sequence, F: ChowForm | None = None) -> EFReport:
    """S/(uH) >= e/((N+1)D) - (2N+1) D max(c) / u, with N the ambient dimension."""
    n, D = X.dim_degree()
    if u <= D:
        raise ValueError(f"need u > D = {D}")
    c = [as_fraction(x) for x in c]
    if any(x < 0 for x in c):
        raise ValueError("weights must be nonnegative")
    N = X.nvars - 1
    if F is None:
        F = chow_form(X)
    e = chow_weight(F, c)
    S, basis = hilbert_weight(X, u, c)
    H = basis.size
    lhs = S / (u * H)
    err = Fraction((2 * N + 1) * D) * max(c) / u
    rhs = e / ((N + 1) * D) - err
    return EFReport(u, S, H, e, lhs, rhs, lhs >= rhs, err)


def normalized_chow_weight(Y: Variety, system: PlaceWeightSystem, F: ChowForm | None = None) -> Fraction:
    """E_Y(c) = sum_v e_Y(c_v) / ((n+1) D)."""
    n, D = Y.dim_degree()
    if not system.weights:
        return Fraction(0)
    if F is None:
        F = chow_form(Y)
    total = sum((chow_weight(F, cv) for cv in system.weights.values()), Fraction(0))
    return total / ((n + 1) * D)


class PlacePreconditionError(ValueError):
    def __init__(self, place: Place, message: str):
        super().__init__(f"place {place}: {message}")
        self.place = place


@dataclass
class ELowerBoundReport:
    E: Fraction
    bound: Fraction
    holds: bool
    per_place: dict  # Place -> LowerBoundReport


def verify_E_lower_bound(Y: Variety, system: PlaceWeightSystem, index_sets: Mapping,
                         m: int, F: ChowForm | None = None) -> ELowerBoundReport:
    """E_Y(c) >= 1/((m-n+1)(n+1)) given sum_v sum_{i in I_v} c_iv = 1."""
    n, D = Y.dim_degree()
    sets = {Place.parse(v): sorted(I) for v, I in index_sets.items()}
    total = Fraction(0)
    for v, cv in system.weights.items():
        I = sets.get(v, [])
        stray = [i for i, x in enumerate(cv) if x and i not in I]
        if stray:
            raise PlacePreconditionError(v, f"weights at indices {stray} lie outside I_v")
        total += sum(cv[i] for i in I)
    if total != 1:
        raise ValueError(f"weights on the index sets sum to {total}, not 1")
    if F is None:
        F = chow_form(Y)
    coords = [MultiPoly.var(i, Y.nvars) for i in range(Y.nvars)]
    per = {}
    for v, I in sets.items():
        if len(I) - 1 > m:
            raise PlacePreconditionError(v, f"|I_v| = {len(I)} exceeds m+1 = {m + 1}")
        if not empty_intersection_check(Y, [coords[i] for i in I]):
            raise PlacePreconditionError(v, f"Y meets {{y_i = 0 : i in {I}}}")
        per[v] = verify_lower_bound(Y, system.at(v, Y.nvars), I, F=F)
    E = normalized_chow_weight(Y, system, F=F)
    bound = Fraction(1, (m - n + 1) * (n + 1))
    return ELowerBoundReport(E, bound, E >= bound, per)
