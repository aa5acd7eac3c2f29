"""Subspace-theorem instances: the embedding by powered system polynomials,
height bounds for the image, the left side of the main inequality, and the
twisted-height lemma checked at concrete points."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .chow import chow_form
from .constants import DPS, ParamSet, constants_A
from .heights import (
    Place,
    PlaceWeightSystem,
    QParam,
    abs_value,
    height_point,
    height_polys,
    norm_v1,
    primitive_integer_vector,
    select_weight_tuple,
    twisted_height,
)
from .hilbert_weight import normalized_chow_weight
from .ideal import Variety, eliminate, empty_intersection_check
from .lognum import LogNum
from .poly import MultiPoly, as_fraction


class InstanceError(ValueError):
    pass


@dataclass
class SubspaceInstance:
    X: Variety
    systems: dict  # Place -> list of m+1 homogeneous MultiPoly
    delta: Fraction
    C: int = 1

    def __post_init__(self):
        self.delta = as_fraction(self.delta)
        self.systems = {Place.parse(v): list(fs) for v, fs in sorted(
            self.systems.items(), key=lambda kv: Place.parse(kv[0]))}
        sizes = {len(fs) for fs in self.systems.values()}
        if len(sizes) != 1:
            raise InstanceError("every place needs a system of the same size m+1")
        for v, fs in self.systems.items():
            for f in fs:
                if f.nvars != self.X.nvars or f.is_zero() or not f.is_homogeneous():
                    raise InstanceError(f"place {v}: system polynomials must be nonzero forms on X's ambient space")

    @property
    def places(self) -> list:
        return list(self.systems)

    @property
    def s(self) -> int:
        return len(self.systems)

    @property
    def m(self) -> int:
        return len(next(iter(self.systems.values()))) - 1

    @property
    def n(self) -> int:
        return self.X.dim

    @property
    def d(self) -> int:
        return self.X.degree

    @property
    def N(self) -> int:
        return self.X.nvars - 1

    @property
    def Delta(self) -> int:
        out = 1
        for fs in self.systems.values():
            for f in fs:
                k = f.total_degree()
                out = out * k // math.gcd(out, k)
        return out

    @property
    def alpha(self) -> int:
        return (self.m - self.n + 1) * (self.n + 1)

    def check_disjoint(self) -> dict:
        """Per place: is X cap {f_0 = ... = f_m = 0} empty?"""
        return {v: empty_intersection_check(self.X, fs) for v, fs in self.systems.items()}

    def heights(self) -> tuple:
        """(h(X), max_{v,i} h(1, f_i)) with h(X) the height of the Chow form."""
        hX = height_polys([chow_form(self.X).poly])[0]
        one = MultiPoly.constant(1, self.X.nvars)
        best = None
        for fs in self.systems.values():
            for f in fs:
                h = height_polys([one, f])[0]
                if best is None or h > best:
                    best = h
        return hX, best

    def params(self) -> ParamSet:
        hX, hf = self.heights()
        return ParamSet(n=self.n, m=self.m, d=self.d, Delta=self.Delta, delta=self.delta,
                        s=self.s, C=self.C, N=self.N, h_X=hX, max_h_f=hf)


def image_variety(X: Variety, gs: Sequence[MultiPoly], names: Sequence[str] | None = None,
                  max_pairs: int | None = 20000) -> Variety:
    """Closure of the image of X under x -> (g_0(x) : ... : g_R(x))."""
    nx = X.nvars
    ny = len(gs)
    total = nx + ny
    xs = list(range(nx))
    gens = [g.embed(total, xs) for g in X.generators]
    for j, g in enumerate(gs):
        gens.append(MultiPoly.var(nx + j, total) - g.embed(total, xs))
    basis, _ = eliminate(gens, xs, max_pairs=max_pairs)
    names = names or [f"y{j}" for j in range(ny)]
    return Variety(basis, names, name="phi(X)")


@dataclass
class Embedding:
    fs: list  # distinct system polynomials f_0..f_R
    gs: list  # g_i = f_i^(Delta/deg f_i)
    Y: Variety
    index_sets: dict  # Place -> sorted indices of its system inside fs
    R: int
    D: int
    dim_ok: bool
    degree_ok: bool
    R_ok: bool


def embed_phi(inst: SubspaceInstance) -> Embedding:
    """Build phi = (g_0, ..., g_R) and Y = phi(X); check dim, degree and R."""
    bad = [str(v) for v, ok in inst.check_disjoint().items() if not ok]
    if bad:
        raise InstanceError(f"X meets the common zero set of the system at places {bad}")
    fs: list = []
    index_sets = {}
    for v, sys_v in inst.systems.items():
        idx = []
        for f in sys_v:
            if f not in fs:
                fs.append(f)
            idx.append(fs.index(f))
        index_sets[v] = sorted(set(idx))
    Dl = inst.Delta
    gs = [f ** (Dl // f.total_degree()) for f in fs]
    Y = image_variety(inst.X, gs)
    n, D = Y.dim_degree()
    R = len(gs) - 1
    return Embedding(fs, gs, Y, index_sets, R, D,
                     n == inst.n, D <= inst.d * Dl ** inst.n,
                     R + 1 <= inst.C * (inst.m + 1) * inst.s)


@dataclass
class HeightBoundReport:
    h1_g: LogNum
    h_Y: LogNum
    H: LogNum
    bound_h1: LogNum
    bound_hY: LogNum
    h1_holds: bool
    hY_holds: bool


def verify_height_bounds(inst: SubspaceInstance, emb: Embedding) -> HeightBoundReport:
    """h1(1, g) <= 6 Delta^2 C n s H and h(Y) <= 25 n^2 d Delta^(n+2) C s H."""
    one = MultiPoly.constant(1, inst.X.nvars)
    h1 = height_polys([one] + emb.gs)[1]
    hY = height_polys([chow_form(emb.Y).poly])[0]
    p = inst.params()
    H = constants_A(p)["H"]
    n, d, Dl, C, s = p.n, p.d, p.Delta, p.C, p.s
    b1 = H.scale(6 * Dl ** 2 * C * n * s)
    b2 = H.scale(25 * n ** 2 * d * Dl ** (n + 2) * C * s)
    return HeightBoundReport(h1, hY, H, b1, b2, h1 <= b1, hY <= b2)


def _place_norm(x: Sequence[Fraction], v: Place) -> Fraction:
    return max(abs_value(t, v) for t in x)


@dataclass
class SubspaceLHS:
    lhs: LogNum | None  # None when some term is -infinity
    rhs: LogNum
    is_solution: bool
    height_gate: bool
    h_x: LogNum
    zero_terms: list  # (place, index) with f_i(x) = 0
    terms: dict = field(default_factory=dict)


def subspace_lhs(inst: SubspaceInstance, x: Sequence, all_indices: bool = False,
                 params: ParamSet | None = None) -> SubspaceLHS:
    """Left and right sides of the main inequality at x, plus the height gate.

    Each place contributes sum_i log(|f_i(x)|_v^(1/deg f_i) / ||x||_v), over
    i = 0..n by default or i = 0..m with ``all_indices``.
    """
    x = [as_fraction(t) for t in x]
    if not inst.X.contains_point(x):
        raise InstanceError("point is not on X")
    top = inst.m if all_indices else inst.n
    total = LogNum.zero()
    zeros = []
    terms = {}
    for v, fs in inst.systems.items():
        xn = _place_norm(x, v)
        for i in range(top + 1):
            f = fs[i]
            val = abs_value(f.eval(x), v)
            if val == 0:
                zeros.append((str(v), i))
                continue
            t = LogNum.log(val, Fraction(1, f.total_degree())) - LogNum.log(xn)
            terms[(str(v), i)] = t
            total = total + t
    hx = height_point(x)
    rhs = -hx.scale(inst.alpha + inst.delta)
    lhs = None if zeros else total
    is_sol = True if zeros else total <= rhs  # a -infinity term satisfies the inequality
    gate = height_gate(inst, hx, params)
    return SubspaceLHS(lhs, rhs, is_sol, gate, hx, zeros, terms)


def height_gate(inst: SubspaceInstance, hx: LogNum, params: ParamSet | None = None) -> bool:
    """h(x) >= A_3 H, compared in log space."""
    if not hx.terms:
        return False
    p = params or inst.params()
    A = constants_A(p)
    H = float(A["H"])
    if H <= 0:
        return True
    with mpmath.workdps(DPS):
        return bool(mpmath.log(hx.mp()) >= A["logA3"].mp + mpmath.log(A["H"].mp()))


# ---------------------------------------------------------------------------
# the twisted-height lemma at a point


@dataclass
class LemmaInputs:
    A: dict  # (Place, i) -> LogNum, i ranging over the place's index set
    Lam: LogNum  # (alpha + delta) Delta h(x)
    K: LogNum  # (alpha + delta/2) Delta h(x)
    theta: Fraction
    h_x: LogNum
    G: dict  # Place -> ||1, g_0..g_R||_{v,1}


def lemma_inputs(inst: SubspaceInstance, emb: Embedding, x: Sequence) -> LemmaInputs:
    x = [as_fraction(t) for t in x]
    one = MultiPoly.constant(1, inst.X.nvars)
    hx = height_point(x)
    Dl, a, dl = inst.Delta, inst.alpha, inst.delta
    A, G = {}, {}
    for v, I in emb.index_sets.items():
        Gv = norm_v1([one] + emb.gs, v)
        G[v] = Gv
        xn = _place_norm(x, v)
        for i in I:
            val = abs_value(emb.gs[i].eval(x), v)
            if val == 0:
                raise InstanceError(f"place {v}: g_{i}(x) = 0, the log term is -infinity")
            A[(v, i)] = LogNum.log(val / (Gv * xn ** Dl))
    return LemmaInputs(A, hx.scale((a + dl) * Dl), hx.scale((a + dl / 2) * Dl),
                       dl / (2 * (a + dl)), hx, G)


def pipeline_weight_tuple(inst: SubspaceInstance, emb: Embedding, x: Sequence,
                          li: LemmaInputs | None = None) -> PlaceWeightSystem:
    """Weights from the selection lemma with q = (m+1)s, theta = delta/(2(alpha+delta)).

    Exact when every A and Lambda are rational multiples of one logarithm;
    otherwise A is rounded up and Lambda rounded up at 60 digits, which keeps
    the selection contract valid for the true values.
    """
    li = li or lemma_inputs(inst, emb, x)
    keys = list(li.A)
    total = LogNum.zero()
    for k in keys:
        total = total + li.A[k]
    if not total <= -li.Lam:
        raise InstanceError("x does not satisfy sum of log terms <= -(alpha+delta) Delta h(x); "
                            "the selection lemma does not apply")
    ratios = [li.A[k].ratio(li.Lam) if li.Lam.terms else None for k in keys]
    if all(r is not None for r in ratios):
        c = select_weight_tuple(ratios, 1, li.theta)
    else:
        with mpmath.workdps(DPS):
            A_up = []
            for k in keys:
                v = li.A[k].mp(DPS)
                r = Fraction(mpmath.nstr(v, 45)).limit_denominator(10 ** 15) + Fraction(1, 10 ** 14)
                A_up.append(min(r, Fraction(0)))
            lv = li.Lam.mp(DPS)
            L_up = Fraction(mpmath.nstr(lv, 45)).limit_denominator(10 ** 15) + Fraction(1, 10 ** 14)
        if sum(A_up) > -L_up:
            raise InstanceError("inequality too tight to certify a weight tuple with rational rounding")
        c = select_weight_tuple(A_up, L_up, li.theta)
    width = emb.R + 1
    weights = {}
    for k, ck in zip(keys, c):
        v, i = k
        row = list(weights.get(v, [Fraction(0)] * width))
        row[i] += ck
        weights[v] = row
    return PlaceWeightSystem(weights)


@dataclass
class LemmaReport:
    point: list
    y: list
    system: PlaceWeightSystem
    conditions_hold: bool
    violations: list
    log_twisted: LogNum
    rhs_bound: LogNum
    holds_bound: bool
    E: Fraction
    exponent_conclusion: Fraction
    rhs_conclusion: LogNum
    holds_conclusion: bool
    gate: bool
    log_Q: LogNum


def verify_lemma_3_30(inst: SubspaceInstance, x: Sequence, emb: Embedding | None = None,
                      system: PlaceWeightSystem | None = None, strict: bool = True,
                      params: ParamSet | None = None) -> LemmaReport:
    """Twisted-height bounds at y = phi(x) with Q = exp((alpha + delta/2) Delta h(x)).

    Checks H_{Q,c}(y) <= exp(h1(1,g)) Q^(1/(alpha+delta/2)) and the conclusion
    H_{Q,c}(y) <= Q^(E_Y(c) - delta/(2(alpha+1)^2)); the height gate is reported.
    """
    emb = emb or embed_phi(inst)
    x = [as_fraction(t) for t in x]
    li = lemma_inputs(inst, emb, x)
    if system is None:
        system = pipeline_weight_tuple(inst, emb, x, li)
    violations = []
    for (v, i), Ai in li.A.items():
        c = system.at(v, emb.R + 1)[i]
        if not Ai <= -li.K.scale(c):
            violations.append((str(v), i))
    for v, cv in system.weights.items():
        stray = [i for i, t in enumerate(cv) if t and i not in emb.index_sets.get(v, [])]
        if stray:
            violations.append((str(v), tuple(stray)))
    if violations and strict:
        raise InstanceError(f"per-place conditions fail at (place, index) {violations}")
    y = [g.eval(x) for g in emb.gs]
    B = max(abs(t) for t in primitive_integer_vector(x))
    Dl, a, dl = inst.Delta, inst.alpha, inst.delta
    Q = QParam(B, (a + dl / 2) * Dl)
    lhs = twisted_height(y, Q, system)
    one = MultiPoly.constant(1, inst.X.nvars)
    h1 = height_polys([one] + emb.gs)[1]
    rhs_b = h1 + Q.log.scale(1 / (a + dl / 2))
    E = normalized_chow_weight(emb.Y, system)
    expo = E - dl / (2 * (a + 1) ** 2)
    rhs_c = Q.log.scale(expo)
    gate = height_gate(inst, li.h_x, params)
    return LemmaReport(x, y, system, not violations, violations, lhs, rhs_b, lhs <= rhs_b,
                       E, expo, rhs_c, lhs <= rhs_c, gate, Q.log)
