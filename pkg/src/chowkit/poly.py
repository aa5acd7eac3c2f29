"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[int, ...], one exponent per variable


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact coefficients")
    return Fraction(x)


# ---------------------------------------------------------------------------
# monomial orders


class MonomialOrder:
    """A total order on exponent tuples, exposed as a sort key (larger = bigger).

    ``kind`` is one of ``lex``, ``grlex``, ``grevlex``, ``weight`` or
    ``elim``.  ``weight`` refines the weight vector ``weights`` by the
    ``tie`` order; ``elim`` compares the leading ``nblock`` variables first
    (graded reverse lex inside each block), which makes it an elimination
    order for those variables.
    """

    def __init__(self, kind: str = "grevlex", weights=None, tie: str = "grevlex", nblock: int = 0):
        if kind not in ("lex", "grlex", "grevlex", "weight", "elim"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.weights = tuple(as_fraction(w) for w in weights) if weights is not None else None
        self.tie = tie
        self.nblock = nblock
        if kind == "weight" and self.weights is None:
            raise ValueError("weight order needs a weight vector")

    def key(self, m: Monomial):
        k = self.kind
        if k == "grevlex":
            return (sum(m), tuple(-e for e in reversed(m)))
        if k == "lex":
            return m
        if k == "grlex":
            return (sum(m), m)
        if k == "weight":
            w = sum(c * e for c, e in zip(self.weights, m))
            return (w, MonomialOrder(self.tie).key(m))
        a, b = m[: self.nblock], m[self.nblock:]
        return (sum(a), tuple(-e for e in reversed(a)), sum(b), tuple(-e for e in reversed(b)))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def _ident(self):
        return (self.kind, self.weights, self.tie, self.nblock)

    def __repr__(self):
        return f"MonomialOrder({self.kind!r})"


GREVLEX = MonomialOrder("grevlex")
GRLEX = MonomialOrder("grlex")
LEX = MonomialOrder("lex")


def weighted_degree(m: Sequence[int], c: Sequence) -> Fraction:
    """Return sum_j m[j] * c[j]."""
    if len(m) != len(c):
        raise ValueError(f"length mismatch: monomial has {len(m)} entries, weights {len(c)}")
    return sum((e * as_fraction(w) for e, w in zip(m, c)), Fraction(0))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# polynomials


class MultiPoly:
    """Immutable sparse polynomial: a map from exponent tuples to nonzero Fractions."""

    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, nvars: int = 0):
        clean = {}
        if terms:
            for m, c in terms.items():
                m = tuple(int(e) for e in m)
                if len(m) != nvars:
                    raise ValueError(f"monomial {m} does not have {nvars} exponents")
                if any(e < 0 for e in m):
                    raise ValueError(f"negative exponent in {m}")
                c = as_fraction(c)
                if c:
                    clean[m] = c
        self.terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "MultiPoly":
        p = cls.__new__(cls)
        p.terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    # constructors
    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "MultiPoly":
        c = as_fraction(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "MultiPoly":
        m = [0] * nvars
        m[i] = 1
        return cls._raw({tuple(m): Fraction(1)}, nvars)

    @classmethod
    def monomial(cls, m: Monomial, c=1) -> "MultiPoly":
        return cls({tuple(m): c}, len(m))

    # basic predicates
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def degree_in(self, indices: Iterable[int]) -> set:
        """Set of partial degrees in the variables ``indices`` over all terms."""
        idx = list(indices)
        return {sum(m[i] for i in idx) for m in self.terms}

    def coefficients(self) -> list:
        return list(self.terms.values())

    # arithmetic
    def _check(self, other):
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return MultiPoly._raw(t, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = as_fraction(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw({m: v * c for m, v in self.terms.items()}, self.nvars)

    def mul_term(self, mono: Monomial, c) -> "MultiPoly":
        return MultiPoly._raw(
            {tuple(a + b for a, b in zip(m, mono)): v * c for m, v in self.terms.items()}, self.nvars
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        return MultiPoly._raw({m: c for m, c in t.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # orders
    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = GREVLEX) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(1 / self.leading_coefficient(order))

    def sorted_terms(self, order: MonomialOrder = GRLEX) -> list:
        return sorted(self.terms.items(), key=lambda mc: order.key(mc[0]), reverse=True)

    def primitive(self) -> "MultiPoly":
        """Scale to coprime integer coefficients with a positive lex-leading coefficient."""
        if not self.terms:
            return self
        den = reduce(lcm, (c.denominator for c in self.terms.values()), 1)
        num = reduce(gcd, (abs(c.numerator * (den // c.denominator)) for c in self.terms.values()), 0)
        p = self.scale(Fraction(den, num))
        if p.terms[max(p.terms)] < 0:
            p = -p
        return p

    # evaluation and substitution
    def __call__(self, point: Sequence):
        return self.eval(point)

    def eval(self, point: Sequence):
        """Evaluate at ``point``; exact for Fraction/int input, works for any ring element."""
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * x**e
            total = total + v
        return total

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace variable i by ``images[i]`` (all in a common ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not images:
            return self
        n = images[0].nvars
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        out = MultiPoly.zero(n)
        for m, c in self.terms.items():
            t = MultiPoly.constant(c, n)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            out = out + t
        return out

    def embed(self, nvars: int, positions: Sequence[int]) -> "MultiPoly":
        """Re-index into a ring with ``nvars`` variables; variable i goes to ``positions[i]``."""
        t = {}
        for m, c in self.terms.items():
            new = [0] * nvars
            for i, e in enumerate(m):
                new[positions[i]] += e
            t[tuple(new)] = c
        return MultiPoly._raw(t, nvars)

    def diff(self, i: int) -> "MultiPoly":
        t = {}
        for m, c in self.terms.items():
            if m[i]:
                new = list(m)
                new[i] -= 1
                t[tuple(new)] = c * m[i]
        return MultiPoly._raw(t, self.nvars)

    def render(self, names: Sequence[str], order: MonomialOrder = GRLEX) -> str:
        return render_poly(self, names, order)

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return f"MultiPoly({render_poly(self, names)!r})"


def det(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant by Laplace expansion along rows, memoized on column subsets."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    nv = matrix[0][0].nvars
    memo: dict = {}

    def minor(row: int, cols: tuple) -> MultiPoly:
        if row == n:
            return MultiPoly.constant(1, nv)
        if cols in memo:
            return memo[cols]
        total = MultiPoly.zero(nv)
        for pos, j in enumerate(cols):
            entry = matrix[row][j]
            if entry.is_zero():
                continue
            rest = cols[:pos] + cols[pos + 1:]
            term = entry * minor(row + 1, rest)
            total = total - term if pos % 2 else total + term
        memo[cols] = total
        return total

    return minor(0, tuple(range(n)))


# ---------------------------------------------------------------------------
# text format

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|([+-])|(\()|(\)))")


class PolySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def parse_poly(text: str, names: Sequence[str]) -> MultiPoly:
    """Parse ``text`` (e.g. ``"2*x0^2 - 3/4*x1*x2"``) over the ordered variables ``names``.

    Grammar: terms joined by ``+``/``-``; a term is an optional coefficient
    (integer or ``a/b``) followed by ``*``-joined factors ``var`` or
    ``var^k``.  Parenthesized sub-expressions are also accepted.
    """
    index = {n: i for i, n in enumerate(names)}
    nv = len(names)
    tokens = []
    pos = 0
    text_s = text.rstrip()
    while pos < len(text_s):
        mt = _TOKEN.match(text_s, pos)
        if not mt or mt.end() == pos:
            raise PolySyntaxError(f"unexpected character {text_s[pos]!r}", pos)
        start = mt.start() + (len(mt.group(0)) - len(mt.group(0).lstrip()))
        kinds = ("num", "name", "pow", "mul", "sign", "lpar", "rpar")
        for k, g in zip(kinds, mt.groups()):
            if g is not None:
                tokens.append((k, g, start))
                break
        pos = mt.end()
    tokens.append(("end", "", len(text_s)))
    state = {"i": 0}

    def peek():
        return tokens[state["i"]]

    def take():
        tok = tokens[state["i"]]
        state["i"] += 1
        return tok

    def expr() -> MultiPoly:
        total = MultiPoly.zero(nv)
        first = True
        while True:
            sign = 1
            if peek()[0] == "sign":
                sign = -1 if take()[1] == "-" else 1
            elif not first:
                break
            total = total + term().scale(sign)
            first = False
            if peek()[0] != "sign":
                break
        return total

    def term() -> MultiPoly:
        p = factor()
        while peek()[0] == "mul":
            take()
            p = p * factor()
        return p

    def factor() -> MultiPoly:
        kind, val, at = take()
        if kind == "num":
            base = MultiPoly.constant(Fraction(val), nv)
        elif kind == "name":
            if val not in index:
                raise PolySyntaxError(f"unknown variable {val!r}", at)
            base = MultiPoly.var(index[val], nv)
        elif kind == "lpar":
            base = expr()
            k2, _, at2 = take()
            if k2 != "rpar":
                raise PolySyntaxError("expected ')'", at2)
        else:
            raise PolySyntaxError(f"unexpected {val or 'end of input'!r}", at)
        if peek()[0] == "pow":
            take()
            k3, v3, at3 = take()
            if k3 != "num" or "/" in v3:
                raise PolySyntaxError("exponent must be a nonnegative integer", at3)
            base = base ** int(v3)
        return base

    if peek()[0] == "end":
        raise PolySyntaxError("empty polynomial", 0)
    result = expr()
    kind, val, at = peek()
    if kind != "end":
        raise PolySyntaxError(f"unexpected {val!r}", at)
    return result


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_poly(p: MultiPoly, names: Sequence[str], order: MonomialOrder = GRLEX) -> str:
    """Canonical text form; ``parse_poly(render_poly(p, v), v) == p``."""
    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.sorted_terms(order):
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _fmt_coeff(mag) + "*" + "*".join(factors)
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, body in parts[1:]:
        out += f" {s} {body}"
    return out


def eval_poly(p: MultiPoly, point: Sequence) -> Fraction:
    return p.eval([as_fraction(x) if isinstance(x, (int, str)) else x for x in point])
