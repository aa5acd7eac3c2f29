"""Groebner bases, normal forms, Hilbert functions and projective dimension/degree."""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

from .poly import GREVLEX, MonomialOrder, MultiPoly, monomial_divides, monomial_lcm, parse_poly


class ResourceLimitError(RuntimeError):
    """Raised when a computation exceeds its configured size cap."""


class NotHomogeneousError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Buchberger


class _KeyCache(dict):
    def __init__(self, order: MonomialOrder):
        super().__init__()
        self.order = order

    def __missing__(self, m):
        k = self.order.key(m)
        self[m] = k
        return k


def _reduce(p: dict, basis: list, key: _KeyCache, full: bool = True) -> dict:
    """Divide ``p`` by ``basis`` (list of (terms, lm, lc)); return the remainder."""
    p = dict(p)
    rem = {}
    while p:
        m = max(p, key=key.__getitem__)
        c = p[m]
        for g, lm, lc in basis:
            if monomial_divides(lm, m):
                q = tuple(a - b for a, b in zip(m, lm))
                f = c / lc
                for gm, gc in g.items():
                    mm = tuple(a + b for a, b in zip(gm, q))
                    s = p.get(mm, 0) - f * gc
                    if s:
                        p[mm] = s
                    else:
                        p.pop(mm, None)
                break
        else:
            if not full:
                rem.update(p)
                return rem
            rem[m] = c
            del p[m]
    return rem


def _spoly(f, g) -> dict:
    ft, flm, flc = f
    gt, glm, glc = g
    lcm_ = monomial_lcm(flm, glm)
    qf = tuple(a - b for a, b in zip(lcm_, flm))
    qg = tuple(a - b for a, b in zip(lcm_, glm))
    out: dict = {}
    for m, c in ft.items():
        mm = tuple(a + b for a, b in zip(m, qf))
        out[mm] = out.get(mm, 0) + c / flc
    for m, c in gt.items():
        mm = tuple(a + b for a, b in zip(m, qg))
        s = out.get(mm, 0) - c / glc
        if s:
            out[mm] = s
        else:
            out.pop(mm, None)
    return {m: c for m, c in out.items() if c}


def groebner_basis(gens: Sequence[MultiPoly], order: MonomialOrder = GREVLEX,
                   max_pairs: int | None = None) -> list:
    """Reduced Groebner basis (monic, sorted by leading monomial descending).

    Buchberger's algorithm with the sugar selection strategy and the
    Gebauer-Moeller pair criteria.  ``max_pairs`` caps the number of
    S-pair reductions; exceeding it raises :class:`ResourceLimitError`.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    nv = gens[0].nvars
    key = _KeyCache(order)

    G: list = []  # (terms, lm, lc)
    sugar: list = []
    pairs: list = []  # heap of (sugar, key(lcm), i, j)
    alive: list = []

    def lm_of(t):
        return max(t, key=key.__getitem__)

    def add(h: dict, s: int):
        nonlocal pairs
        lm = lm_of(h)
        lc = h[lm]
        h = {m: c / lc for m, c in h.items()}
        new = len(G)
        # Gebauer-Moeller: drop old pairs whose lcm is strictly divisible by lm
        keep = []
        for item in pairs:
            _, _, i, j = item
            L = monomial_lcm(G[i][1], G[j][1])
            if (monomial_divides(lm, L) and L != monomial_lcm(G[i][1], lm)
                    and L != monomial_lcm(G[j][1], lm)):
                continue
            keep.append(item)
        pairs = keep
        heapq.heapify(pairs)
        cands: dict = {}
        for i in range(new):
            if not alive[i]:
                continue
            cands.setdefault(monomial_lcm(G[i][1], lm), []).append(i)
        chosen = []
        for L in sorted(cands, key=key.__getitem__):
            if any(monomial_divides(L2, L) for L2 in chosen):
                continue
            chosen.append(L)
        G.append((h, lm, Fraction(1)))
        sugar.append(s)
        alive.append(True)
        for L in chosen:
            idx = cands[L]
            # product criterion: coprime leading monomials reduce to zero
            if any(monomial_lcm(G[i][1], lm) == tuple(a + b for a, b in zip(G[i][1], lm)) for i in idx):
                continue
            i = min(idx)
            deg = sum(L)
            sg = max(sugar[i] + deg - sum(G[i][1]), s + deg - sum(lm))
            heapq.heappush(pairs, (sg, key[L], i, new))
        for i in range(new):
            if alive[i] and monomial_divides(lm, G[i][1]):
                alive[i] = False

    basis_view = lambda: [G[i] for i in range(len(G)) if alive[i]]

    for g in sorted(gens, key=lambda p: key[lm_of(p.terms)]):
        h = _reduce(g.terms, basis_view(), key)
        if h:
            add(h, g.total_degree())

    done = 0
    while pairs:
        sg, _, i, j = heapq.heappop(pairs)
        done += 1
        if max_pairs is not None and done > max_pairs:
            raise ResourceLimitError(f"Groebner basis exceeded {max_pairs} S-pair reductions")
        s = _spoly(G[i], G[j])
        if not s:
            continue
        h = _reduce(s, basis_view(), key)
        if h:
            add(h, sg)

    # minimalize + interreduce
    live = [G[i] for i in range(len(G)) if alive[i]]
    live.sort(key=lambda t: key[t[1]])
    minimal = []
    for t in live:
        if not any(monomial_divides(u[1], t[1]) for u in minimal):
            minimal.append(t)
    reduced = []
    for idx, t in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r = _reduce(t[0], others, key)
        lm = lm_of(r)
        lc = r[lm]
        reduced.append(MultiPoly({m: c / lc for m, c in r.items()}, nv))
    reduced.sort(key=lambda p: key[p.leading_monomial(order)], reverse=True)
    return reduced


def normal_form(p: MultiPoly, basis: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> MultiPoly:
    """Remainder of ``p`` on division by ``basis`` (unique when ``basis`` is Groebner)."""
    if not basis:
        return p
    key = _KeyCache(order)
    b = []
    for g in basis:
        lm = g.leading_monomial(order)
        b.append((g.terms, lm, g.terms[lm]))
    return MultiPoly(_reduce(p.terms, b, key), p.nvars)


def eliminate(gens: Sequence[MultiPoly], drop: Iterable[int], max_pairs: int | None = None) -> tuple:
    """Generators of the elimination ideal omitting the variables ``drop``.

    Returns ``(basis, kept)`` where ``kept`` lists the surviving original
    variable indices and ``basis`` lives in the ring on those variables
    (reduced Groebner basis for graded reverse lex).
    """
    gens = list(gens)
    if not gens:
        return [], []
    nv = gens[0].nvars
    drop = sorted(set(drop))
    kept = [i for i in range(nv) if i not in drop]
    if not drop:
        return groebner_basis(gens, GREVLEX, max_pairs), kept
    perm = drop + kept  # new position -> old index
    pos = {old: new for new, old in enumerate(perm)}
    moved = [g.embed(nv, [pos[i] for i in range(nv)]) for g in gens]
    order = MonomialOrder("elim", nblock=len(drop))
    gb = groebner_basis(moved, order, max_pairs)
    k = len(drop)
    out = []
    for g in gb:
        if all(all(e == 0 for e in m[:k]) for m in g.terms):
            out.append(MultiPoly({m[k:]: c for m, c in g.terms.items()}, nv - k))
    return out, kept


# ---------------------------------------------------------------------------
# Hilbert functions of monomial ideals


def _minimalize(monos: Iterable[tuple]) -> tuple:
    out: list = []
    for m in sorted(set(monos), key=sum):
        if not any(monomial_divides(g, m) for g in out):
            out.append(m)
    return tuple(sorted(out))


def hilbert_numerator(monos: Sequence[tuple], nvars: int) -> dict:
    """Numerator N(t) of the Hilbert series N(t)/(1-t)^nvars of k[x]/(monos)."""
    memo: dict = {}

    def rec(gens: tuple) -> dict:
        if gens in memo:
            return memo[gens]
        if not gens:
            return {0: 1}
        # pure-power and pairwise-coprime generators factor directly
        supports = [frozenset(i for i, e in enumerate(m) if e) for m in gens]
        if all(a.isdisjoint(b) for i, a in enumerate(supports) for b in supports[i + 1:]):
            res = {0: 1}
            for m in gens:
                d = sum(m)
                nxt: dict = {}
                for k, v in res.items():
                    nxt[k] = nxt.get(k, 0) + v
                    nxt[k + d] = nxt.get(k + d, 0) - v
                res = {k: v for k, v in nxt.items() if v}
            memo[gens] = res
            return res
        last = max(gens, key=lambda m: (sum(m), m))
        rest = tuple(g for g in gens if g != last)
        colon = _minimalize(tuple(max(a - b, 0) for a, b in zip(g, last)) for g in rest)
        a = rec(rest)
        b = rec(colon)
        d = sum(last)
        res = dict(a)
        for k, v in b.items():
            res[k + d] = res.get(k + d, 0) - v
        res = {k: v for k, v in res.items() if v}
        memo[gens] = res
        return res

    return rec(_minimalize(monos))


def hilbert_from_numerator(num: dict, nvars: int, u: int) -> int:
    total = 0
    for k, v in num.items():
        if u - k >= 0:
            total += v * comb(u - k + nvars - 1, nvars - 1)
    return total


def count_standard_monomials(leading: Sequence[tuple], nvars: int, u: int) -> int:
    """Brute-force count of degree-u monomials outside the monomial ideal (test oracle)."""
    return sum(1 for m in monomials_of_degree(nvars, u)
               if not any(monomial_divides(l, m) for l in leading))


def monomials_of_degree(nvars: int, u: int):
    """All exponent tuples of total degree ``u``, lexicographically descending."""
    if nvars == 0:
        if u == 0:
            yield ()
        return
    if nvars == 1:
        yield (u,)
        return
    for first in range(u, -1, -1):
        for rest in monomials_of_degree(nvars - 1, u - first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# varieties


class Variety:
    """A projective variety given by a homogeneous ideal, with cached invariants.

    ``param`` optionally records binary forms (in ``param_names``) giving a
    birational parametrization of a rational curve; it enables the
    resultant-based Chow form constructor.  ``points`` are known rational
    points, used only for sampling checks.
    """

    def __init__(self, generators: Sequence[MultiPoly], names: Sequence[str], name: str = "",
                 param: Sequence[MultiPoly] | None = None, param_names: Sequence[str] = ("s", "t"),
                 points: Sequence[Sequence] | None = None):
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.name = name
        gens = []
        for g in generators:
            if g.nvars != self.nvars:
                raise ValueError(f"generator has {g.nvars} variables, expected {self.nvars}")
            if not g.is_homogeneous():
                raise NotHomogeneousError(f"generator {g.render(self.names)} is not homogeneous")
            if not g.is_zero():
                gens.append(g)
        self.generators = tuple(gens)
        self.param = tuple(param) if param is not None else None
        self.param_names = tuple(param_names)
        self.points = [tuple(Fraction(x) for x in p) for p in (points or [])]
        self._gb: dict = {}
        self._hilb: dict = {}
        self._numerator = None
        self._dimdeg = None
        self._hpoly = None

    @classmethod
    def from_strings(cls, names, generators, name="", param=None, param_names=("s", "t"), points=None):
        gens = [parse_poly(g, names) for g in generators]
        par = [parse_poly(p, param_names) for p in param] if param else None
        return cls(gens, names, name=name, param=par, param_names=param_names, points=points)

    @classmethod
    def from_parametrization(cls, param: Sequence[MultiPoly], names: Sequence[str], name: str = "",
                             param_names: Sequence[str] = ("s", "t"), points=None):
        """Implicitize the image of the map given by forms ``param`` (same degree)."""
        k = param[0].nvars
        nv = len(names)
        total = k + nv
        gens = []
        for j, f in enumerate(param):
            y = MultiPoly.var(k + j, total)
            gens.append(y - f.embed(total, list(range(k))))
        basis, _ = eliminate(gens, range(k))
        return cls(basis, names, name=name, param=param, param_names=param_names, points=points)

    @property
    def ambient_dim(self) -> int:
        return self.nvars - 1

    def groebner(self, order: MonomialOrder = GREVLEX) -> list:
        if order not in self._gb:
            self._gb[order] = groebner_basis(self.generators, order)
        return self._gb[order]

    def normal_form(self, p: MultiPoly, order: MonomialOrder = GREVLEX) -> MultiPoly:
        return normal_form(p, self.groebner(order), order)

    def contains_poly(self, p: MultiPoly) -> bool:
        return self.normal_form(p).is_zero()

    def contains_point(self, point: Sequence) -> bool:
        return all(g.eval(list(point)) == 0 for g in self.generators)

    def leading_monomials(self) -> list:
        return [g.leading_monomial(GREVLEX) for g in self.groebner()]

    def hilbert_numerator(self) -> dict:
        if self._numerator is None:
            self._numerator = hilbert_numerator(self.leading_monomials(), self.nvars)
        return self._numerator

    def hilbert_function(self, u: int) -> int:
        if u < 0:
            return 0
        if u not in self._hilb:
            self._hilb[u] = hilbert_from_numerator(self.hilbert_numerator(), self.nvars, u)
        return self._hilb[u]

    def standard_monomials(self, u: int) -> list:
        lead = self.leading_monomials()
        return [m for m in monomials_of_degree(self.nvars, u)
                if not any(monomial_divides(l, m) for l in lead)]

    def dim_degree(self) -> tuple:
        """(n, D): projective dimension and degree, (-1, 0) for the empty variety."""
        if self._dimdeg is None:
            self._dimdeg = _dim_degree_from_hilbert(self)
        return self._dimdeg

    @property
    def dim(self) -> int:
        return self.dim_degree()[0]

    @property
    def degree(self) -> int:
        return self.dim_degree()[1]

    def hilbert_polynomial(self) -> list:
        """Coefficients (constant term first) of the Hilbert polynomial."""
        self.dim_degree()
        return self._hpoly

    def with_polys(self, polys: Sequence[MultiPoly], name: str = "") -> "Variety":
        return Variety(list(self.generators) + list(polys), self.names, name=name)

    def __repr__(self):
        return f"Variety({self.name or '?'}, vars={list(self.names)}, gens={len(self.generators)})"


def _dim_degree_from_hilbert(X: Variety) -> tuple:
    num = X.hilbert_numerator()
    nv = X.nvars
    if not num:
        X._hpoly = []
        return (-1, 0)
    # H agrees with its polynomial from here on
    start = max(0, max(num) - nv + 1)
    window = nv + 3
    vals = [X.hilbert_function(start + i) for i in range(window + 1)]
    # first j such that the j-th finite difference vanishes at 3 consecutive points
    diffs = vals
    order = 0
    while True:
        if all(d == 0 for d in diffs[:3]):
            break
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        order += 1
        if len(diffs) < 3:
            raise RuntimeError("Hilbert polynomial did not stabilize")
    n = order - 1
    if n < 0:
        X._hpoly = []
        return (-1, 0)
    # Newton forward-difference interpolation around ``start``
    table = [vals]
    for _ in range(n):
        prev = table[-1]
        table.append([b - a for a, b in zip(prev, prev[1:])])
    D = table[n][0]
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        # table[k][0] * binom(u - start, k) expanded in powers of u
        poly = [Fraction(1)]
        for i in range(k):
            shift = -(start + i)
            poly = [Fraction(0)] + poly
            for idx in range(len(poly) - 1):
                poly[idx] += shift * poly[idx + 1]
        fk = Fraction(table[k][0], factorial(k))
        for idx, c in enumerate(poly):
            coeffs[idx] += fk * c
    X._hpoly = coeffs
    return (n, int(D))


def variety_dim_degree(X: Variety) -> tuple:
    return X.dim_degree()


def hilbert_function(X: Variety, u: int) -> int:
    return X.hilbert_function(u)


def intersection_dimension(X: Variety, polys: Sequence[MultiPoly]) -> int:
    """Projective dimension of X cut by ``polys`` (-1 when empty)."""
    for p in polys:
        if not p.is_homogeneous():
            raise NotHomogeneousError("intersection polynomials must be homogeneous")
    if not polys:
        return X.dim
    return X.with_polys(polys).dim


def empty_intersection_check(X: Variety, polys: Sequence[MultiPoly]) -> bool:
    """True iff X has no projective point where all ``polys`` vanish."""
    if not polys:
        return X.dim == -1
    Z = X.with_polys(polys)
    if Z.dim != -1:
        return False
    # homogeneous Nullstellensatz witness: a power of each variable lies in the ideal
    lead = Z.leading_monomials()
    for i in range(Z.nvars):
        if not any(all(e == 0 for j, e in enumerate(l) if j != i) for l in lead):
            raise AssertionError("dimension -1 but no pure power leading term")
    return True
