"""Nevanlinna functionals of rational curves C -> P^N and the inequalities
relating them, evaluated by circle quadrature.

Curves are tuples of polynomials in one variable z with rational
coefficients.  Circle means use the periodic trapezoid rule, which converges
geometrically for the smooth integrands met here.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from .ideal import Variety, intersection_dimension
from .linalg import rank
from .poly import MultiPoly, parse_poly

Z = sympy.Symbol("z")
DEFAULT_NODES = 4096
NUDGE = 2.0 ** -30


def default_nodes() -> int:
    """Quadrature node count, overridable through CHOWKIT_NODES."""
    raw = os.environ.get("CHOWKIT_NODES")
    return int(raw) if raw else DEFAULT_NODES


class DegenerateCurveError(ValueError):
    pass


def _to_sympy(p: MultiPoly) -> sympy.Poly:
    if p.nvars != 1:
        raise ValueError("expected a polynomial in one variable")
    expr = sum((sympy.Rational(c.numerator, c.denominator) * Z ** m[0] for m, c in p.terms.items()),
               sympy.Integer(0))
    return sympy.Poly(expr, Z, domain="QQ")


def _from_sympy(p: sympy.Poly) -> MultiPoly:
    terms = {}
    for (k,), c in p.terms():
        terms[(k,)] = Fraction(int(c.p), int(c.q))
    return MultiPoly(terms, 1)


class RationalCurve:
    """z -> (f_0(z) : ... : f_N(z)) with coprime polynomial components."""

    def __init__(self, components: Sequence[MultiPoly]):
        comps = [_to_sympy(c) for c in components]
        if len(comps) < 2:
            raise ValueError("a curve into P^N needs at least two components")
        if all(c.is_zero for c in comps):
            raise ValueError("all components vanish")
        g = comps[0]
        for c in comps[1:]:
            g = sympy.gcd(g, c)
        if g.degree() > 0:
            raise ValueError(f"components share the factor {g.as_expr()}")
        if all(c.degree() <= 0 for c in comps):
            raise ValueError("curve is constant")
        self.components = comps
        self.mpolys = [_from_sympy(c) for c in comps]
        self._coeffs = [np.array([complex(float(c)) for c in reversed(p.all_coeffs())]) for p in comps]

    @classmethod
    def parse(cls, text: str) -> "RationalCurve":
        """Components separated by ';', e.g. ``"1; z; z^2"``."""
        parts = [t.strip() for t in text.split(";") if t.strip()]
        return cls([parse_poly(t, ["z"]) for t in parts])

    @property
    def N(self) -> int:
        return len(self.components) - 1

    @property
    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    def values(self, zs: np.ndarray) -> np.ndarray:
        return np.array([np.polynomial.polynomial.polyval(zs, c) for c in self._coeffs])

    def norm(self, zs: np.ndarray) -> np.ndarray:
        v = self.values(zs)
        return np.sqrt(np.sum(np.abs(v) ** 2, axis=0))

    def compose(self, Q: MultiPoly) -> sympy.Poly:
        if Q.nvars != len(self.components):
            raise ValueError(f"form has {Q.nvars} variables, curve has {len(self.components)} components")
        return _to_sympy(Q.substitute(self.mpolys))

    def render(self) -> str:
        return "; ".join(str(c.as_expr()).replace("**", "^") for c in self.components)


def _poly_coeffs(p: sympy.Poly) -> np.ndarray:
    return np.array([complex(float(c)) for c in reversed(p.all_coeffs())])


def _circle(r: float, nodes: int, shift: float = 0.0) -> np.ndarray:
    th = 2 * np.pi * (np.arange(nodes) + shift) / nodes
    return r * np.exp(1j * th)


def circle_mean(fn, r: float, nodes: int) -> tuple:
    """Mean of fn over the circle |z| = r; shifts nodes by half a step if fn blows up.

    Returns (mean, shifted).
    """
    zs = _circle(r, nodes)
    v = fn(zs)
    if np.all(np.isfinite(v)):
        return float(np.mean(v)), False
    zs = _circle(r, nodes, 0.5)
    v = fn(zs)
    if not np.all(np.isfinite(v)):
        raise ArithmeticError(f"integrand singular at quadrature nodes on |z| = {r}")
    return float(np.mean(v)), True


# ---------------------------------------------------------------------------
# roots with exact multiplicities


@dataclass
class RootData:
    order_at_zero: int
    roots: list  # (complex root, multiplicity), nonzero roots only
    lowest_coeff: Fraction


def roots_with_multiplicity(P: sympy.Poly) -> RootData:
    """Nonzero roots of P by companion-matrix eigenvalues of its squarefree parts."""
    if P.is_zero:
        raise DegenerateCurveError("curve lies in the divisor")
    coeffs = list(reversed(P.all_coeffs()))
    k = next(i for i, c in enumerate(coeffs) if c != 0)
    low = coeffs[k]
    Pt = sympy.Poly(sympy.cancel(P.as_expr() / Z ** k), Z, domain="QQ")
    out = []
    _, factors = sympy.sqf_list(Pt)
    for g, mult in factors:
        if g.degree() <= 0:
            continue
        for a in np.roots([complex(float(c)) for c in g.all_coeffs()]):
            out.append((complex(a), mult))
    return RootData(k, out, Fraction(int(low.p), int(low.q)))


def _safe_radius(r: float, roots: Sequence) -> tuple:
    """Nudge r off any root modulus; returns (radius, nudged)."""
    nudged = False
    for a, _ in roots:
        if abs(abs(a) - r) <= 1e-9 * r:
            r *= 1 + NUDGE
            nudged = True
    return r, nudged


# ---------------------------------------------------------------------------
# the three functionals


def characteristic(f: RationalCurve, r: float, nodes: int | None = None) -> float:
    """T_f(r): circle mean of log||f|| at r minus the same at 1."""
    nodes = nodes or default_nodes()
    a, _ = circle_mean(lambda z: np.log(f.norm(z)), r, nodes)
    b, _ = circle_mean(lambda z: np.log(f.norm(z)), 1.0, nodes)
    return a - b


@dataclass
class CountingValue:
    value: float
    radius: float
    nudged: bool
    inside: int  # zeros in |z| < r with multiplicity, including z = 0


def counting(f: RationalCurve, Q: MultiPoly, r: float) -> CountingValue:
    """N(r) = sum over nonzero roots a, |a| < r, of log(r/|a|), plus ord_0 log r."""
    P = f.compose(Q)
    rd = roots_with_multiplicity(P)
    r, nudged = _safe_radius(r, rd.roots)
    val = rd.order_at_zero * math.log(r)
    inside = rd.order_at_zero
    for a, mult in rd.roots:
        if abs(a) < r:
            val += mult * math.log(r / abs(a))
            inside += mult
    return CountingValue(val, r, nudged, inside)


@dataclass
class CountingOracle:
    value: float
    winding: int


def counting_oracle(f: RationalCurve, Q: MultiPoly, r: float, nodes: int | None = None) -> CountingOracle:
    """N(r) from Jensen's formula (circle mean of log|P| minus log of the lowest
    coefficient) and the zero count from the winding number of P on |z| = r."""
    nodes = nodes or default_nodes()
    P = f.compose(Q)
    if P.is_zero:
        raise DegenerateCurveError("curve lies in the divisor")
    c = _poly_coeffs(P)
    coeffs = list(reversed(P.all_coeffs()))
    low = next(x for x in coeffs if x != 0)
    mean, _ = circle_mean(lambda z: np.log(np.abs(np.polynomial.polynomial.polyval(z, c))), r, nodes)
    zs = _circle(r, nodes)
    w = np.polynomial.polynomial.polyval(zs, c)
    dphi = np.angle(np.roll(w, -1) / w)
    winding = int(round(float(np.sum(dphi)) / (2 * np.pi)))
    return CountingOracle(mean - math.log(abs(float(low))), winding)


def _q_norm(Q: MultiPoly) -> float:
    return float(max(abs(c) for c in Q.terms.values()))


def proximity(f: RationalCurve, Q: MultiPoly, r: float, nodes: int | None = None) -> tuple:
    """m_f(r, Q) = mean of log(||f||^Delta/|Q(f)|) at r minus at 1; returns (value, shifted)."""
    nodes = nodes or default_nodes()
    Delta = Q.total_degree()
    P = f.compose(Q)
    c = _poly_coeffs(P)
    roots = roots_with_multiplicity(P).roots

    def mean_at(rad):
        # zeros within a few node spacings of the circle spoil the trapezoid rule;
        # their log|z - a| terms are integrated exactly (mean = log max(rad, |a|))
        near = [(a, k) for a, k in roots if abs(abs(a) - rad) < 8 * 2 * np.pi * rad / nodes]

        def g(z):
            with np.errstate(divide="ignore"):
                v = Delta * np.log(f.norm(z)) - np.log(np.abs(np.polynomial.polynomial.polyval(z, c)))
                for a, k in near:
                    v = v + k * np.log(np.abs(z - a))
            return v

        mean, shifted = circle_mean(g, rad, nodes)
        return mean - sum(k * math.log(max(rad, abs(a))) for a, k in near), shifted

    a, s1 = mean_at(r)
    b, s2 = mean_at(1.0)
    return a - b, s1 or s2


@dataclass
class FMTReport:
    radii: list
    T: list
    N: list
    m: list
    residual: list  # Delta T - N - m
    spread: float
    flags: list = field(default_factory=list)

    @property
    def constant(self) -> float:
        return self.residual[0]


def fmt_check(f: RationalCurve, Q: MultiPoly, radii: Sequence[float], nodes: int | None = None) -> FMTReport:
    Delta = Q.total_degree()
    Ts, Ns, ms, res, flags = [], [], [], [], []
    for r in radii:
        cv = counting(f, Q, r)
        r2 = cv.radius
        T = characteristic(f, r2, nodes)
        m, shifted = proximity(f, Q, r2, nodes)
        if cv.nudged:
            flags.append(f"radius {r} nudged to {r2!r}")
        if shifted:
            flags.append(f"nodes shifted at radius {r}")
        Ts.append(T)
        Ns.append(cv.value)
        ms.append(m)
        res.append(Delta * T - cv.value - m)
    spread = max(res) - min(res) if res else 0.0
    return FMTReport(list(radii), Ts, Ns, ms, res, spread, flags)


# ---------------------------------------------------------------------------
# general-form second main theorem


def admissible_subsets(V: Variety, Qs: Sequence[MultiPoly], m: int) -> list:
    """Subsets K (as sorted index tuples) with dim(V cap Q_K) <= m - |K|, |K| <= m+1."""
    out = [()]
    for size in range(1, min(m + 1, len(Qs)) + 1):
        for K in itertools.combinations(range(len(Qs)), size):
            if intersection_dimension(V, [Qs[j] for j in K]) <= m - size:
                out.append(K)
    return out


def _log_ratios(f: RationalCurve, Qs: Sequence[MultiPoly], zs: np.ndarray) -> np.ndarray:
    """Row j: log(||f||^Delta ||Q_j|| / |Q_j(f)|) at the points zs."""
    nf = np.log(f.norm(zs))
    rows = []
    for Q in Qs:
        c = _poly_coeffs(f.compose(Q))
        with np.errstate(divide="ignore"):
            rows.append(Q.total_degree() * nf + math.log(_q_norm(Q))
                        - np.log(np.abs(np.polynomial.polynomial.polyval(zs, c))))
    return np.array(rows)


def max_over_subsets(ratios: np.ndarray, subsets: Sequence[tuple]) -> np.ndarray:
    best = None
    for K in subsets:
        s = np.sum(ratios[list(K)], axis=0) if K else np.zeros(ratios.shape[1])
        best = s if best is None else np.maximum(best, s)
    return best


def smt_integrand(f: RationalCurve, Qs: Sequence[MultiPoly], subsets: Sequence[tuple], r: float,
                  nodes: int | None = None) -> tuple:
    """Circle mean at r minus at 1 of max_K sum_{j in K} log(||f||^Delta ||Q_j|| / |Q_j(f)|).

    Returns (value, shifted).
    """
    nodes = nodes or default_nodes()
    if not subsets:
        raise ValueError("empty family of subsets")

    def g(z):
        return max_over_subsets(_log_ratios(f, Qs, z), subsets)

    a, s1 = circle_mean(g, r, nodes)
    b, s2 = circle_mean(g, 1.0, nodes)
    return a - b, s1 or s2


def curve_on_variety(f: RationalCurve, V: Variety) -> bool:
    return all(f.compose(g).is_zero for g in V.generators)


def algebraic_degeneracy_degree(f: RationalCurve, V: Variety, max_degree: int) -> int | None:
    """Smallest k <= max_degree such that a degree-k form outside I(V) vanishes on f, else None."""
    for k in range(1, max_degree + 1):
        std = V.standard_monomials(k)
        images = []
        for mono in std:
            P = f.compose(MultiPoly.monomial(mono))
            images.append({d: Fraction(int(c.p), int(c.q)) for (d,), c in P.terms()})
        width = 1 + max((max(im) for im in images if im), default=0)
        mat = [[im.get(d, Fraction(0)) for d in range(width)] for im in images]
        if rank(mat) < len(std):
            return k
    return None


@dataclass
class SMTRow:
    r: float
    T: float
    lhs: float
    lhs_top_only: float  # max over |K| = m+1 only
    rhs: float
    holds: bool
    N_sum: float  # sum_j N_{Q_j(f)}(r) / deg Q_j
    cor_lhs: float  # (q - (m-n+1)(n+1) - eps) T
    cor_holds: bool


@dataclass
class SMTReport:
    n: int
    m: int
    Delta: int
    eps: float
    subsets: list
    rows: list
    flags: list

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.rows)

    @property
    def corollary_holds(self) -> bool:
        return all(r.cor_holds for r in self.rows)


def smt_check(V: Variety, f: RationalCurve, Qs: Sequence[MultiPoly], m: int, eps: float,
              radii: Sequence[float], nodes: int | None = None, r0: float = 2.0,
              degeneracy_degree: int | None = None) -> SMTReport:
    """lhs(r) <= (Delta (m-n+1)(n+1) + eps) T_f(r) at each grid radius r >= r0."""
    n = V.dim
    if n < 1:
        raise ValueError("V must have dimension >= 1")
    if m < n:
        raise ValueError("need m >= n")
    degs = {Q.total_degree() for Q in Qs}
    if len(degs) != 1:
        raise ValueError("all hypersurfaces must share one degree")
    Delta = degs.pop()
    if not curve_on_variety(f, V):
        raise DegenerateCurveError("curve does not lie on V")
    k = algebraic_degeneracy_degree(f, V, degeneracy_degree or Delta)
    if k is not None:
        raise DegenerateCurveError(f"curve satisfies a degree-{k} relation not implied by V")
    for j, Q in enumerate(Qs):
        if f.compose(Q).is_zero:
            raise DegenerateCurveError(f"curve lies in hypersurface {j}")
    subsets = admissible_subsets(V, Qs, m)
    top = [K for K in subsets if len(K) == m + 1] or [()]
    coef = Delta * (m - n + 1) * (n + 1)
    rows, flags = [], []
    for r in radii:
        if r < r0:
            continue
        roots = []
        for Q in Qs:
            roots.extend(roots_with_multiplicity(f.compose(Q)).roots)
        r2, nudged = _safe_radius(float(r), roots)
        if nudged:
            flags.append(f"radius {r} nudged to {r2!r}")
        T = characteristic(f, r2, nodes)
        lhs, sh = smt_integrand(f, Qs, subsets, r2, nodes)
        lhs_top, _ = smt_integrand(f, Qs, top, r2, nodes)
        if sh:
            flags.append(f"nodes shifted at radius {r}")
        rhs = (coef + eps) * T
        Nsum = sum(counting(f, Q, r2).value / Q.total_degree() for Q in Qs)
        cor_lhs = (len(Qs) - (m - n + 1) * (n + 1) - eps) * T
        rows.append(SMTRow(r2, T, lhs, lhs_top, rhs, lhs <= rhs, Nsum, cor_lhs, cor_lhs <= Nsum))
    return SMTReport(n, m, Delta, eps, subsets, rows, flags)


# ---------------------------------------------------------------------------
# Wronskian form


def wronskian(f: RationalCurve) -> sympy.Poly:
    exprs = [c.as_expr() for c in f.components]
    return sympy.Poly(sympy.expand(sympy.wronskian(exprs, Z)), Z, domain="QQ")


def independent_subsets(Hs: Sequence[MultiPoly]) -> list:
    """Nonempty subsets of hyperplanes with linearly independent coefficient vectors."""
    vecs = []
    for H in Hs:
        if H.total_degree() != 1 or not H.is_homogeneous():
            raise ValueError("hyperplanes must be linear forms")
        row = [Fraction(0)] * H.nvars
        for mono, c in H.terms.items():
            row[mono.index(1)] = c
        vecs.append(row)
    out = []
    for size in range(1, len(Hs) + 1):
        for K in itertools.combinations(range(len(Hs)), size):
            if rank([vecs[j] for j in K]) == size:
                out.append(K)
    return out


@dataclass
class TheoremBReport:
    radii: list
    lhs: list
    T: list
    N_W: list
    residual: list  # lhs - (N+1) T + N_W
    kappa: float
    const: float
    fit_error: float  # max |residual - (kappa log r + const)|
    bound_const: float  # smallest c with residual <= kappa log r + c on the grid
    wronskian: str


def theorem_b_check(f: RationalCurve, Hs: Sequence[MultiPoly], radii: Sequence[float],
                    nodes: int | None = None) -> TheoremBReport:
    """Residual of the Wronskian-form inequality with S_f fitted as kappa log r + c."""
    W = wronskian(f)
    if W.is_zero:
        raise DegenerateCurveError("linearly degenerate: the Wronskian vanishes")
    subsets = independent_subsets(Hs)
    wroots = roots_with_multiplicity(W) if W.degree() > 0 else RootData(0, [], Fraction(1))
    lhs, Ts, NWs, res, rs = [], [], [], [], []
    for r in radii:
        roots = list(wroots.roots)
        for H in Hs:
            roots.extend(roots_with_multiplicity(f.compose(H)).roots)
        r2, _ = _safe_radius(float(r), roots)
        val, _ = smt_integrand(f, Hs, subsets, r2, nodes)
        T = characteristic(f, r2, nodes)
        nw = wroots.order_at_zero * math.log(r2) + sum(
            k * math.log(r2 / abs(a)) for a, k in wroots.roots if abs(a) < r2)
        lhs.append(val)
        Ts.append(T)
        NWs.append(nw)
        res.append(val - (f.N + 1) * T + nw)
        rs.append(r2)
    x = np.log(np.array(rs))
    y = np.array(res)
    if len(rs) >= 2:
        kappa, const = np.polyfit(x, y, 1)
    else:
        kappa, const = 0.0, float(y[0]) if len(y) else 0.0
    fit = kappa * x + const
    err = float(np.max(np.abs(y - fit))) if len(y) else 0.0
    bound_c = float(np.max(y - kappa * x)) if len(y) else 0.0
    return TheoremBReport(list(rs), lhs, Ts, NWs, res, float(kappa), float(const), err, bound_c,
                          str(W.as_expr()))
