"""Places of Q, absolute values, heights of points and polynomial systems,
twisted heights and the weight-tuple selection used before the twisted-height
argument.

Every logarithmic quantity is a ``LogNum`` so inequality checks are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import factorint

from .lognum import LogNum
from .poly import MultiPoly, as_fraction


@dataclass(frozen=True, order=True)
class Place:
    """The archimedean place (p = 0) or the p-adic place for a prime p."""

    p: int = 0

    def __post_init__(self):
        if self.p and (self.p < 2 or len(factorint(self.p)) != 1 or factorint(self.p)[self.p] != 1):
            raise ValueError(f"{self.p} is not prime")

    @property
    def archimedean(self) -> bool:
        return self.p == 0

    @property
    def n_v(self) -> int:
        return 1

    @classmethod
    def parse(cls, value) -> "Place":
        if isinstance(value, Place):
            return value
        if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        return cls(int(value))

    def __str__(self):
        return "inf" if self.archimedean else str(self.p)


INF = Place(0)


def ord_p(x: Fraction, p: int) -> int:
    x = as_fraction(x)
    if x == 0:
        raise ValueError("ord of zero")
    k = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        k += 1
    while b % p == 0:
        b //= p
        k -= 1
    return k


def abs_value(x, v: Place) -> Fraction:
    """|x|_v, exactly rational for rational x."""
    x = as_fraction(x)
    if x == 0:
        return Fraction(0)
    if v.archimedean:
        return abs(x)
    return Fraction(v.p) ** (-ord_p(x, v.p))


def primes_of(values: Iterable) -> list:
    """Primes dividing some numerator or denominator of the nonzero values."""
    ps = set()
    for x in values:
        x = as_fraction(x)
        if x:
            ps.update(factorint(x.numerator).keys())
            ps.update(factorint(x.denominator).keys())
    ps.discard(1)
    ps.discard(-1)
    return sorted(ps)


def relevant_places(values: Iterable) -> list:
    return [INF] + [Place(p) for p in primes_of(values)]


def product_formula_check(x) -> Fraction:
    """prod_v |x|_v over the places where |x|_v != 1; equals 1 for x != 0."""
    x = as_fraction(x)
    if x == 0:
        raise ValueError("product formula needs a nonzero rational")
    out = Fraction(1)
    for v in relevant_places([x]):
        out *= abs_value(x, v)
    return out


def primitive_integer_vector(x: Sequence) -> list:
    """Scale a nonzero rational vector to coprime integers."""
    x = [as_fraction(t) for t in x]
    if not any(x):
        raise ValueError("the zero vector is not a projective point")
    den = 1
    for t in x:
        den = den * t.denominator // math.gcd(den, t.denominator)
    ints = [int(t * den) for t in x]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    return [a // g for a in ints]


def height_point(x: Sequence) -> LogNum:
    """h(x) = log max|x_i| after scaling x to coprime integers."""
    ints = primitive_integer_vector(x)
    return LogNum.log(max(abs(a) for a in ints))


def height_point_places(x: Sequence) -> LogNum:
    """h(x) as the literal sum over places of log max_i |x_i|_v (oracle)."""
    x = [as_fraction(t) for t in x]
    if not any(x):
        raise ValueError("the zero vector is not a projective point")
    total = LogNum.zero()
    for v in relevant_places(x):
        total = total + LogNum.log(max(abs_value(t, v) for t in x))
    return total


def _coeffs(fs: Sequence[MultiPoly]) -> list:
    return [c for f in fs for c in f.terms.values()]


def norm_v(fs: Sequence[MultiPoly], v: Place) -> Fraction:
    """Max of |coefficient|_v over the system."""
    return max(abs_value(c, v) for c in _coeffs(fs))


def norm_v1(fs: Sequence[MultiPoly], v: Place) -> Fraction:
    """The 1-norm at the archimedean place, the max norm elsewhere."""
    if v.archimedean:
        return sum((abs(c) for c in _coeffs(fs)), Fraction(0))
    return norm_v(fs, v)


def height_polys(fs: Sequence[MultiPoly]) -> tuple:
    """(h, h1) of a polynomial system with rational coefficients."""
    coeffs = _coeffs(fs)
    if not any(coeffs):
        raise ValueError("system has no nonzero coefficient")
    h = LogNum.zero()
    h1 = LogNum.zero()
    for v in relevant_places(coeffs):
        h = h + LogNum.log(norm_v(fs, v))
        h1 = h1 + LogNum.log(norm_v1(fs, v))
    return h, h1


@dataclass
class NormReport:
    place: Place
    value: Fraction  # |f(x)|_v
    bound: Fraction  # ||f||_{v,1} ||x||_v^D
    per_place_holds: bool
    height_lhs: LogNum | None  # h(f_0(x), ..., f_r(x)) when defined
    height_rhs: LogNum
    height_holds: bool


def check_norm_inequalities(fs: Sequence[MultiPoly] | MultiPoly, x: Sequence, v: Place) -> NormReport:
    """Check |f(x)|_v <= ||f||_{v,1} ||x||_v^D (for the first form) and
    h(f_0(x), ..., f_r(x)) <= D h(x) + h1(f_0, ..., f_r)."""
    if isinstance(fs, MultiPoly):
        fs = [fs]
    fs = list(fs)
    D = fs[0].total_degree()
    if any(not f.is_homogeneous() or f.total_degree() != D for f in fs if f):
        raise ValueError("system must be homogeneous of one degree")
    x = [as_fraction(t) for t in x]
    xn = max(abs_value(t, v) for t in x)
    f0 = fs[0]
    val = abs_value(f0.eval(x), v)
    bound = norm_v1([f0], v) * xn ** D
    values = [f.eval(x) for f in fs]
    rhs = height_point(x).scale(D) + height_polys(fs)[1]
    if any(values):
        lhs = height_point(values)
        hold = lhs <= rhs
    else:
        lhs, hold = None, True
    return NormReport(v, val, bound, val <= bound, lhs, rhs, hold)


# ---------------------------------------------------------------------------
# weight systems and twisted heights


@dataclass
class PlaceWeightSystem:
    """Weight vectors c_v indexed by finitely many places (zero elsewhere)."""

    weights: dict = field(default_factory=dict)  # Place -> tuple of Fractions

    def __post_init__(self):
        clean = {}
        width = None
        for v, c in self.weights.items():
            v = Place.parse(v)
            c = tuple(as_fraction(t) for t in c)
            if any(t < 0 for t in c):
                raise ValueError(f"negative weight at place {v}")
            if width is not None and len(c) != width:
                raise ValueError("weight vectors have different lengths")
            width = len(c)
            clean[v] = c
        self.weights = dict(sorted(clean.items()))

    @property
    def width(self) -> int | None:
        return len(next(iter(self.weights.values()))) if self.weights else None

    def at(self, v: Place, width: int) -> tuple:
        return self.weights.get(v, (Fraction(0),) * width)

    def sum_of_maxima(self) -> Fraction:
        return sum((max(c) for c in self.weights.values() if c), Fraction(0))

    def satisfies_budget(self) -> bool:
        """sum_v max_i c_{iv} <= 1."""
        return self.sum_of_maxima() <= 1

    def scaled(self, r) -> "PlaceWeightSystem":
        r = as_fraction(r)
        return PlaceWeightSystem({v: tuple(r * t for t in c) for v, c in self.weights.items()})


@dataclass(frozen=True)
class QParam:
    """Q = base^exponent with rational base >= 1 and rational exponent >= 0."""

    base: Fraction
    exponent: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "base", as_fraction(self.base))
        object.__setattr__(self, "exponent", as_fraction(self.exponent))
        if self.base < 1 or self.exponent < 0:
            raise ValueError("need Q >= 1")

    @property
    def log(self) -> LogNum:
        return LogNum.log(self.base, self.exponent)


def twisted_height(y: Sequence, Q: QParam, system: PlaceWeightSystem) -> LogNum:
    """log H_{Q,c}(y) = sum_v log max_i |y_i|_v Q^{c_iv}, exactly."""
    y = [as_fraction(t) for t in y]
    if not any(y):
        raise ValueError("the zero vector is not a projective point")
    w = len(y)
    if system.width not in (None, w):
        raise ValueError("weight width differs from the point length")
    places = set(relevant_places(y)) | set(system.weights)
    total = LogNum.zero()
    for v in sorted(places):
        c = system.at(v, w)
        best = None
        for t, ci in zip(y, c):
            a = abs_value(t, v)
            if a == 0:
                continue
            cand = LogNum.log(a) + Q.log.scale(ci)
            if best is None or cand > best:
                best = cand
        total = total + best
    return total


# ---------------------------------------------------------------------------
# weight-tuple selection


def select_weight_tuple(A: Sequence, Lam, theta) -> tuple:
    """Return c >= 0 with sum 1 and A_j <= -c_j (1 - theta) Lam for every j.

    Outputs lie on the grid {k / M : k in N^q, |k| = M} with
    M = ceil((q-1)/theta).  Starting from k_j = floor(a_j M), where
    a_j = A_j / sum(A), the missing mass is added to coordinates with the
    largest fractional parts, never pushing k_j / M above a_j / (1 - theta).
    """
    A = [as_fraction(t) for t in A]
    Lam = as_fraction(Lam)
    theta = as_fraction(theta)
    q = len(A)
    if q == 0:
        raise ValueError("empty tuple")
    if any(t > 0 for t in A):
        raise ValueError("all A_j must be <= 0")
    if Lam <= 0:
        raise ValueError("Lambda must be positive")
    if sum(A) > -Lam:
        raise ValueError("need sum(A) <= -Lambda")
    if not 0 < theta <= Fraction(1, 2):
        raise ValueError("theta must lie in (0, 1/2]")
    if q == 1:
        return (Fraction(1),)
    S = sum(A)
    a = [t / S for t in A]
    M = -(-(q - 1) * theta.denominator // theta.numerator)  # ceil((q-1)/theta)
    k = [math.floor(x * M) for x in a]
    cap = [math.floor(x * M / (1 - theta)) for x in a]
    short = M - sum(k)
    order = sorted(range(q), key=lambda j: (-(a[j] * M - k[j]), j))
    while short:
        moved = False
        for j in order:
            if short and k[j] < cap[j]:
                k[j] += 1
                short -= 1
                moved = True
        if not moved:
            raise AssertionError("selection grid infeasible; this contradicts the cap count")
    return tuple(Fraction(x, M) for x in k)


def weight_grid_size_bound(q: int, theta) -> float:
    """(e / theta)^(q - 1)."""
    return (math.e / float(theta)) ** (q - 1)


def selection_contract_holds(A: Sequence, Lam, theta, c: Sequence) -> bool:
    A = [as_fraction(t) for t in A]
    Lam, theta = as_fraction(Lam), as_fraction(theta)
    return (sum(c) == 1 and all(x >= 0 for x in c)
            and all(Aj <= -cj * (1 - theta) * Lam for Aj, cj in zip(A, c)))
