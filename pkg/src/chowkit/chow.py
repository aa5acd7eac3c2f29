"""Chow forms, Chow weights and the coordinate-replacement lower bound.

A Chow form of an n-dimensional variety X in P^R is stored as a polynomial
in (n+1)*(R+1) variables ``u{i}_{j}`` (block i, coordinate j), block-major.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .ideal import (
    ResourceLimitError,
    Variety,
    eliminate,
    empty_intersection_check,
    intersection_dimension,
)
from .linalg import det as fdet
from .linalg import nullspace, rank
from .poly import MultiPoly, as_fraction, det, render_poly


class ChowFormError(ValueError):
    """The Chow form cannot be produced for this input."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class ChowForm:
    poly: MultiPoly
    blocks: int
    width: int
    degree: int

    @property
    def names(self) -> list:
        return u_names(self.blocks, self.width)

    def block_degrees(self) -> set:
        """Set of (block, degree) pairs seen across all monomials."""
        out = set()
        for m in self.poly.terms:
            for i in range(self.blocks):
                out.add((i, sum(m[i * self.width:(i + 1) * self.width])))
        return out

    def is_block_homogeneous(self) -> bool:
        return self.block_degrees() == {(i, self.degree) for i in range(self.blocks)}

    def evaluate(self, hyperplanes: Sequence[Sequence]) -> Fraction:
        flat = [as_fraction(x) for row in hyperplanes for x in row]
        return self.poly.eval(flat)

    def render(self) -> str:
        return render_poly(self.poly, self.names)

    def normalized(self) -> "ChowForm":
        return ChowForm(self.poly.primitive(), self.blocks, self.width, self.degree)

    def proportional_to(self, other: "ChowForm") -> bool:
        """True if the two forms agree up to a nonzero rational scalar."""
        if (self.blocks, self.width) != (other.blocks, other.width):
            return False
        if set(self.poly.terms) != set(other.poly.terms) or not self.poly.terms:
            return False
        m0 = next(iter(self.poly.terms))
        ratio = self.poly.terms[m0] / other.poly.terms[m0]
        return all(self.poly.terms[m] == ratio * other.poly.terms[m] for m in self.poly.terms)


def u_names(blocks: int, width: int) -> list:
    return [f"u{i}_{j}" for i in range(blocks) for j in range(width)]


def _u_var(i: int, j: int, blocks: int, width: int) -> MultiPoly:
    return MultiPoly.var(i * width + j, blocks * width)


# ---------------------------------------------------------------------------
# constructors


def chow_form_point(p: Sequence) -> ChowForm:
    """Chow form sum_j u_{0j} p_j of the point p."""
    p = [as_fraction(x) for x in p]
    if not any(p):
        raise ChowFormError("the zero vector is not a projective point")
    width = len(p)
    poly = MultiPoly.zero(width)
    for j, x in enumerate(p):
        poly = poly + _u_var(0, j, 1, width).scale(x)
    return ChowForm(poly, 1, width, 1)


def chow_form_linear(basis: Sequence[Sequence]) -> ChowForm:
    """Chow form det(u_i . b_k) of the linear space spanned by the points ``basis``."""
    basis = [[as_fraction(x) for x in b] for b in basis]
    k = len(basis)
    if rank(basis) != k:
        raise ChowFormError("basis points are linearly dependent")
    width = len(basis[0])
    blocks = k
    nv = blocks * width
    entries = []
    for i in range(blocks):
        row = []
        for b in basis:
            e = MultiPoly.zero(nv)
            for j, x in enumerate(b):
                if x:
                    e = e + MultiPoly.var(i * width + j, nv).scale(x)
            row.append(e)
        entries.append(row)
    return ChowForm(det(entries), blocks, width, 1)


def cramer_point(width: int, blocks: int) -> list:
    """Signed maximal minors p_0..p_N of the (blocks x width) matrix of u-variables."""
    nv = blocks * width
    out = []
    for j in range(width):
        cols = [c for c in range(width) if c != j]
        mat = [[MultiPoly.var(i * width + c, nv) for c in cols] for i in range(blocks)]
        d = det(mat)
        out.append(-d if j % 2 else d)
    return out


def chow_form_hypersurface(f: MultiPoly) -> ChowForm:
    """F = f(p_0, ..., p_N) with p the Cramer point of N generic hyperplanes."""
    if f.is_zero() or not f.is_homogeneous():
        raise ChowFormError("hypersurface equation must be a nonzero homogeneous polynomial")
    width = f.nvars
    blocks = width - 1
    if blocks < 1:
        raise ChowFormError("need at least two coordinates")
    p = cramer_point(width, blocks)
    return ChowForm(f.substitute(p), blocks, width, f.total_degree())


def chow_form_rational_curve(param: Sequence[MultiPoly]) -> ChowForm:
    """Chow form of the image of a birational map P^1 -> P^R given by binary forms.

    F(u_0, u_1) is the Sylvester resultant of the two binary forms
    sum_j u_{ij} param_j(s, t).
    """
    k = param[0].total_degree()
    if any(p.nvars != 2 or not p.is_homogeneous() or p.total_degree() != k for p in param if p):
        raise ChowFormError("parametrization must be binary forms of one common degree")
    width = len(param)
    nv = 2 * width
    # coefficient of s^(k-a) t^a in sum_j u_ij param_j
    def coeffs(i):
        out = []
        for a in range(k + 1):
            c = MultiPoly.zero(nv)
            for j, p in enumerate(param):
                v = p.terms.get((k - a, a))
                if v:
                    c = c + MultiPoly.var(i * width + j, nv).scale(v)
            out.append(c)
        return out

    A, B = coeffs(0), coeffs(1)
    size = 2 * k
    zero = MultiPoly.zero(nv)
    rows = []
    for r in range(k):
        rows.append([zero] * r + A + [zero] * (k - 1 - r))
    for r in range(k):
        rows.append([zero] * r + B + [zero] * (k - 1 - r))
    assert all(len(r) == size for r in rows)
    F = det(rows)
    if F.is_zero():
        raise ChowFormError("parametrization is degenerate (resultant vanishes identically)")
    return ChowForm(F, 2, width, k)


def chow_form_eliminate(X: Variety, max_pairs: int = 4000) -> ChowForm:
    """Chow form as the generator of the eliminated incidence ideal.

    Works in an affine chart x_k = 1 where x_k does not vanish on X; the
    chart incidence ideal is prime, so its elimination ideal is principal.
    """
    n, D = X.dim_degree()
    if n < 0:
        raise ChowFormError("empty variety has no Chow form")
    width = X.nvars
    blocks = n + 1
    nu = blocks * width
    total = width + nu
    chart = next((k for k in range(width)
                  if not X.contains_poly(MultiPoly.var(k, width))), None)
    if chart is None:
        raise ChowFormError("every coordinate vanishes on X")
    xs = list(range(width))
    gens = [g.embed(total, xs) for g in X.generators]
    gens.append(MultiPoly.var(chart, total) - 1)
    for i in range(blocks):
        h = MultiPoly.zero(total)
        for j in range(width):
            h = h + MultiPoly.var(width + i * width + j, total) * MultiPoly.var(j, total)
        gens.append(h)
    try:
        basis, kept = eliminate(gens, xs, max_pairs=max_pairs)
    except ResourceLimitError as exc:
        raise ChowFormError(f"Chow form too large for elimination: {exc}") from exc
    if len(basis) != 1:
        raise ChowFormError(f"elimination ideal is not principal ({len(basis)} generators)")
    F = ChowForm(basis[0], blocks, width, D).normalized()
    if not F.is_block_homogeneous():
        raise ChowFormError("eliminated form is not block homogeneous; is the ideal prime?")
    return F


def linear_basis(X: Variety) -> list | None:
    """Spanning points of X if its ideal is generated by linear forms, else None."""
    gb = X.groebner()
    if any(g.total_degree() != 1 for g in gb):
        return None
    rows = []
    for g in gb:
        row = [Fraction(0)] * X.nvars
        for m, c in g.terms.items():
            row[m.index(1)] = c
        rows.append(row)
    return nullspace(rows, X.nvars)


def chow_form(X: Variety, allow_elimination: bool = True) -> ChowForm:
    """Chow form of X by the cheapest applicable constructor, normalized."""
    n, D = X.dim_degree()
    if n < 0:
        raise ChowFormError(f"variety {X.name!r} is empty")
    basis = linear_basis(X)
    if basis is not None:
        if len(basis) == 1:
            return chow_form_point(basis[0]).normalized()
        return chow_form_linear(basis).normalized()
    gb = X.groebner()
    if n == X.nvars - 2 and len(gb) == 1:
        return chow_form_hypersurface(gb[0]).normalized()
    if X.param is not None and n == 1:
        F = chow_form_rational_curve(X.param)
        if F.degree != D:
            raise ChowFormError(
                f"parametrization has degree {F.degree} but the variety has degree {D}; "
                "the map is not birational")
        return F.normalized()
    if allow_elimination:
        return chow_form_eliminate(X)
    raise ChowFormError(f"no constructor applies to {X.name!r}")


# ---------------------------------------------------------------------------
# Chow weight


def chow_weight(F: ChowForm, c: Sequence) -> Fraction:
    """e_X(c): the largest c-weight of a monomial of F.

    Substituting t^{c_j} u_{ij} multiplies each monomial by t^{weight}; equal
    weights never merge distinct monomials, so the top exponent is this max.
    """
    if len(c) != F.width:
        raise ValueError(f"weight vector has length {len(c)}, Chow form block width is {F.width}")
    c = [as_fraction(x) for x in c]
    w = F.width
    best = None
    for m in F.poly.terms:
        val = sum((e * c[k % w] for k, e in enumerate(m) if e), Fraction(0))
        if best is None or val > best:
            best = val
    return best if best is not None else Fraction(0)


def _monomials(nvars: int, degree: int) -> list:
    if nvars == 1:
        return [(degree,)]
    return [(a,) + rest for a in range(degree, -1, -1) for rest in _monomials(nvars - 1, degree - a)]


def macaulay_resultant(forms: Sequence[MultiPoly]) -> Fraction:
    """Resultant of n+1 forms of one degree k in n+1 variables, by Macaulay's
    quotient det(M)/det(M') with M the matrix of multiples in degree (n+1)(k-1)+1.

    Raises ZeroDivisionError when the extraneous minor vanishes at these
    coefficients; perturbing the input avoids it.
    """
    nv = len(forms)
    k = forms[0].total_degree()
    if any(f.nvars != nv or not f.is_homogeneous() or f.total_degree() != k for f in forms):
        raise ValueError("need n+1 forms of one common degree in n+1 variables")
    mons = _monomials(nv, nv * (k - 1) + 1)
    col = {m: j for j, m in enumerate(mons)}
    rows = []
    for a in mons:
        i = next(j for j in range(nv) if a[j] >= k)
        shift = list(a)
        shift[i] -= k
        row = [Fraction(0)] * len(mons)
        for m, cf in forms[i].terms.items():
            row[col[tuple(x + y for x, y in zip(m, shift))]] = cf
        rows.append(row)
    extra = [j for j, a in enumerate(mons) if sum(x >= k for x in a) >= 2]
    den = fdet([[rows[i][j] for j in extra] for i in extra]) if extra else Fraction(1)
    if den == 0:
        raise ZeroDivisionError("extraneous Macaulay minor vanishes")
    return fdet(rows) / den


def _interpolated_degree(points: Sequence[tuple]) -> int:
    """Degree of the polynomial through the (x, y) pairs (Newton divided differences)."""
    xs = [p[0] for p in points]
    coef = [p[1] for p in points]
    n = len(points)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # Newton coefficients: the degree is the last nonzero index
    return max((i for i, v in enumerate(coef) if v), default=-1)


def chow_weight_parametrized(X: Variety, c: Sequence, seed: int = 0, trials: int = 2) -> Fraction:
    """e_X(c) for X with a birational, base-point-free parametrization by forms
    of degree k on P^n, without building the Chow form.

    The Chow form is then a scalar multiple of the resultant of the forms
    sum_j u_ij phi_j, so e_X(c) is the t-degree of that resultant with
    u_ij replaced by t^{c_j} u_ij, read off at random integer u.
    """
    if X.param is None:
        raise ChowFormError("variety has no parametrization")
    n, D = X.dim_degree()
    phi = list(X.param)
    k = phi[0].total_degree()
    ns = phi[0].nvars
    if ns != n + 1 or len(phi) != X.nvars:
        raise ChowFormError("parametrization must map P^n onto X in its ambient space")
    if k ** n != D:
        raise ChowFormError(f"parametrization has degree {k}^{n} but X has degree {D}; not birational")
    if not empty_intersection_check(Variety([], [f"s{i}" for i in range(ns)]), phi):
        raise ChowFormError("parametrization has base points")
    c = [as_fraction(x) for x in c]
    if len(c) != X.nvars:
        raise ValueError("weight vector length must equal the number of coordinates")
    shift = min(c)
    L = math.lcm(*(x.denominator for x in c))
    ci = [int((x - shift) * L) for x in c]
    bound = (n + 1) * D * max(ci)
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        u = [[rng.randint(-60, 60) or 1 for _ in range(X.nvars)] for _ in range(n + 1)]
        pts = []
        t = 1
        while len(pts) < bound + 1:
            t += 1
            forms = []
            for i in range(n + 1):
                f = MultiPoly.zero(ns)
                for j, p in enumerate(phi):
                    f = f + p.scale(u[i][j] * Fraction(t) ** ci[j])
                forms.append(f)
            try:
                pts.append((Fraction(t), macaulay_resultant(forms)))
            except ZeroDivisionError:
                continue
        best = max(best, _interpolated_degree(pts))
    return Fraction(best, L) + (n + 1) * D * shift


# ---------------------------------------------------------------------------
# replacing coordinates


@dataclass
class CoordinateReplacement:
    indices: tuple
    c_matrix: list  # (n+1) x (R+1) rows of Fractions
    dims: list = field(default_factory=list)  # dim Y cap {y'_0 = .. = y'_t = 0}

    def forms(self, nvars: int) -> list:
        out = []
        for row in self.c_matrix:
            p = MultiPoly.zero(nvars)
            for j, x in enumerate(row):
                if x:
                    p = p + MultiPoly.var(j, nvars).scale(x)
            out.append(p)
        return out


def _tuples(length: int, bound: int):
    """Nonzero tuples in {0..bound}^length, ordered by max entry then lexicographically."""
    for top in range(1, bound + 1):
        for t in itertools.product(range(top + 1), repeat=length):
            if max(t) == top:
                yield t


def replace_coordinates(Y: Variety, indices: Sequence[int], max_bound: int = 64) -> CoordinateReplacement:
    """Build y'_0 = y_{i_0} and combinations y'_t of y_{i_1}..y_{i_{m-n+t}}.

    Each y'_t is the first small-integer combination (search bound doubling)
    for which dim(Y cap {y'_0 = ... = y'_t = 0}) <= n - t - 1.
    """
    n = Y.dim
    m = len(indices) - 1
    R = Y.nvars - 1
    idx = list(indices)
    if n < 1:
        raise PreconditionError("variety must have dimension >= 1")
    if m < n:
        raise PreconditionError(f"need m >= n, got m={m}, n={n}")
    if len(set(idx)) != len(idx) or any(not 0 <= i <= R for i in idx):
        raise PreconditionError(f"bad index set {idx}")
    coord = [MultiPoly.var(i, Y.nvars) for i in range(Y.nvars)]
    if not empty_intersection_check(Y, [coord[i] for i in idx]):
        d = intersection_dimension(Y, [coord[i] for i in idx])
        raise PreconditionError(
            f"Y meets {{y_i = 0 : i in {idx}}} in a set of dimension {d}")

    row0 = [Fraction(0)] * (R + 1)
    row0[idx[0]] = Fraction(1)
    rows = [row0]
    chosen = [coord[idx[0]]]
    dims = [intersection_dimension(Y, chosen)]
    for t in range(1, n + 1):
        pool = idx[1:m - n + t + 1]
        found = None
        bound = 1
        while found is None and bound <= max_bound:
            for tup in _tuples(len(pool), bound):
                form = MultiPoly.zero(Y.nvars)
                for i, a in zip(pool, tup):
                    if a:
                        form = form + coord[i].scale(a)
                d = intersection_dimension(Y, chosen + [form])
                if d <= n - t - 1:
                    found = (tup, form, d)
                    break
            bound *= 2
        if found is None:
            raise RuntimeError(f"no replacement form found at step {t} within bound {max_bound}")
        tup, form, d = found
        row = [Fraction(0)] * (R + 1)
        for i, a in zip(pool, tup):
            row[i] = Fraction(a)
        rows.append(row)
        chosen.append(form)
        dims.append(d)
    return CoordinateReplacement(tuple(idx), rows, dims)


@dataclass
class LowerBoundReport:
    e: Fraction
    bound: Fraction
    holds: bool
    replacement: CoordinateReplacement
    degree: int
    dim: int
    m: int

    @property
    def margin(self) -> Fraction:
        return self.e - self.bound


def verify_lower_bound(Y: Variety, c: Sequence, indices: Sequence[int],
                       F: ChowForm | None = None) -> LowerBoundReport:
    """Check e_Y(c) >= D/(m-n+1) * sum_k c_{i_k} exactly.

    Indices are first sorted by descending weight, as the construction
    assumes c_{i_0} >= ... >= c_{i_m}.
    """
    c = [as_fraction(x) for x in c]
    if len(c) != Y.nvars:
        raise ValueError("weight vector length must equal the number of coordinates")
    if any(x < 0 for x in c):
        raise ValueError("weights must be nonnegative")
    order = sorted(indices, key=lambda i: (-c[i], i))
    rep = replace_coordinates(Y, order)
    n, D = Y.dim_degree()
    m = len(order) - 1
    if F is None and Y.param is not None and n >= 2:
        # elimination in (n+1)(R+1) auxiliary variables is out of reach here
        e = chow_weight_parametrized(Y, c)
    else:
        e = chow_weight(F if F is not None else chow_form(Y), c)
    bound = Fraction(D, m - n + 1) * sum(c[i] for i in order)
    return LowerBoundReport(e, bound, e >= bound, rep, D, n, m)
