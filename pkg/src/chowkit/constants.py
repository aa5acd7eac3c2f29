"""The explicit constant towers A_1..A_3, H, B_1..B_3, their substituted
variants, and the identity/estimate checks linking them.

Quantities such as exp(2^{12n+16} ...) only exist in log space.  Their
exponent arguments are exact rationals, so a ``LogValue`` keeps that exact
part separate from the (small) transcendental remainder.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import mpmath

from .lognum import LogNum
from .poly import as_fraction

DPS = 60
REL_TOL = 1e-9


def _mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class LogValue:
    """log of a positive quantity: ``exact + rest`` with ``exact`` rational."""

    exact: Fraction
    rest: object = mpmath.mpf(0)  # mpmath.mpf, computed at DPS digits

    @property
    def mp(self):
        with mpmath.workdps(DPS):
            return _mpf(self.exact) + self.rest

    def __float__(self):
        return float(self.mp)

    def __add__(self, other: "LogValue") -> "LogValue":
        with mpmath.workdps(DPS):
            return LogValue(self.exact + other.exact, self.rest + other.rest)

    def __sub__(self, other: "LogValue") -> "LogValue":
        with mpmath.workdps(DPS):
            return LogValue(self.exact - other.exact, self.rest - other.rest)

    def scaled(self, k) -> "LogValue":
        k = as_fraction(k)
        with mpmath.workdps(DPS):
            return LogValue(self.exact * k, self.rest * _mpf(k))

    def render(self) -> str:
        return mpmath.nstr(self.mp, 20)


def _lv_log(x) -> LogValue:
    """LogValue for log(x), x a positive rational or mpf."""
    with mpmath.workdps(DPS):
        if isinstance(x, (int, Fraction)):
            x = as_fraction(x)
            return LogValue(Fraction(0), mpmath.log(x.numerator) - mpmath.log(x.denominator))
        return LogValue(Fraction(0), mpmath.log(x))


def _lv_loglog(x) -> LogValue:
    with mpmath.workdps(DPS):
        x = as_fraction(x)
        inner = mpmath.log(x.numerator) - mpmath.log(x.denominator)
        if inner <= 0:
            raise ValueError(f"log log {x} undefined")
        return LogValue(Fraction(0), mpmath.log(inner))


def log_compare(lhs, rhs, rel_tol: float = REL_TOL) -> tuple:
    """(holds, margin) for lhs <= rhs in log space with relative tolerance."""
    with mpmath.workdps(DPS):
        a = lhs.mp if isinstance(lhs, LogValue) else mpmath.mpf(lhs)
        b = rhs.mp if isinstance(rhs, LogValue) else mpmath.mpf(rhs)
        margin = b - a
        scale = max(abs(a), abs(b), mpmath.mpf(1))
        return bool(margin >= -rel_tol * scale), margin


@dataclass
class ParamSet:
    n: int
    m: int
    d: int
    Delta: int
    delta: Fraction
    s: int = 1
    C: int = 1
    N: int = 1
    h_X: LogNum = field(default_factory=LogNum.zero)
    max_h_f: LogNum = field(default_factory=LogNum.zero)

    def __post_init__(self):
        self.delta = as_fraction(self.delta)
        if not 0 < self.delta <= 1:
            raise ValueError("need 0 < delta <= 1")
        if not self.m >= self.n >= 1:
            raise ValueError("need m >= n >= 1")
        if min(self.d, self.Delta, self.s, self.C, self.N) < 1:
            raise ValueError("d, Delta, s, C, N must be positive")

    @property
    def alpha(self) -> int:
        return (self.m - self.n + 1) * (self.n + 1)

    @property
    def alpha_printed_alt(self) -> int:
        """The (m+n-1)(n+1) variant that appears in some displays."""
        return (self.m + self.n - 1) * (self.n + 1)

    def as_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "d": self.d, "Delta": self.Delta,
                "delta": str(self.delta), "s": self.s, "C": self.C, "N": self.N}


def constants_A(p: ParamSet) -> dict:
    """A_1 (both readings), A_2, A_3 and H."""
    n, m, d, Dl, dl, s, C = p.n, p.m, p.d, p.Delta, p.delta, p.s, p.C
    mn1 = m - n + 1
    big = Fraction(2 ** (12 * n + 16) * mn1 ** (4 * n) * n ** (4 * n) * d ** (2 * n + 2)
                   * Dl ** (n * (2 * n + 2))) / dl ** (2 * n)
    tail = _lv_log(4 * C)
    loglog = _lv_loglog(4 * C)
    # printed: (18 n / delta) (n+1) s * exp(...) * log(4C) log log(4C)
    A1_printed = (LogValue(big) + _lv_log(Fraction(18 * n) / dl * (n + 1) * s) + tail + loglog)
    # derived: (18 (m-n+1) n / delta)^{(m+1)s-1} * exp(...) * log(4C) log log(4C)
    base = Fraction(18 * mn1 * n) / dl
    A1_derived = (LogValue(big) + _lv_log(base).scaled((m + 1) * s - 1) + tail + loglog)
    A2 = Fraction((8 * n + 6) * (n + 2) ** 2 * d * Dl ** (n + 1)) / dl
    A3_arg = Fraction(2 ** (6 * n + 20) * n ** (2 * n + 3) * d ** (n + 2) * Dl ** (n * (n + 2))) / dl ** (n + 1)
    with mpmath.workdps(DPS):
        logA3 = LogValue(Fraction(0), _mpf(A3_arg) * mpmath.log(2 * C * s))
        H = LogNum.log(2 * p.N) + p.h_X + p.max_h_f
    return {"logA1_printed": A1_printed, "logA1_derived": A1_derived, "A2": A2,
            "logA3": logA3, "H": H}


def constants_B(n: int, D, R: int, delta) -> dict:
    """B_1, B_2, B_3 for a variety of dimension n and degree D in P^R."""
    D = as_fraction(D)
    delta = as_fraction(delta)
    if R < n or n < 1 or D < 1:
        raise ValueError("need R >= n >= 1 and D >= 1")
    arg1 = Fraction(2 ** (10 * n + 4)) * D ** (2 * n + 2) / delta ** (2 * n)
    logB1 = LogValue(arg1) + _lv_log(4 * R) + _lv_loglog(4 * R)
    B2 = (4 * n + 3) * D / delta
    arg3 = Fraction(2 ** (5 * n + 4)) * D ** (n + 2) / delta ** (n + 1)
    with mpmath.workdps(DPS):
        logB3 = LogValue(Fraction(0), _mpf(arg3) * mpmath.log(4 * R))
    return {"logB1": logB1, "B2": B2, "logB3": logB3}


def substituted_B(p: ParamSet) -> dict:
    """B'_k: delta -> delta/(2(alpha+1)^2), R -> C(m+1)s - 1, D -> d Delta^n."""
    dprime = p.delta / (2 * (p.alpha + 1) ** 2)
    R = p.C * (p.m + 1) * p.s - 1
    D = p.d * p.Delta ** p.n
    out = constants_B(p.n, D, R, dprime)
    out["delta'"] = dprime
    out["R'"] = R
    out["D'"] = D
    return out


def log_T(p: ParamSet, factor: int | None = None) -> LogValue:
    """log T with T = (17 factor n / delta)^{(m+1)s-1}, factor = m-n+1 by default."""
    factor = p.m - p.n + 1 if factor is None else factor
    return _lv_log(Fraction(17 * factor * p.n) / p.delta).scaled((p.m + 1) * p.s - 1)


@dataclass
class Check:
    name: str
    holds: bool
    lhs: str
    rhs: str
    margin: str
    note: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "lhs": self.lhs, "rhs": self.rhs,
                "margin": self.margin, "note": self.note}


def _s(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, LogValue):
        return x.render()
    with mpmath.workdps(DPS):
        return mpmath.nstr(mpmath.mpf(x), 20)


def fundamental_estimates(p: ParamSet) -> list:
    """The four auxiliary estimates, each link checked separately."""
    n, m, s, C = p.n, p.m, p.s, p.C
    mn1 = m - n + 1
    k = (m + 1) * s
    out = []
    # 1: ((m-n+1)(n+1)+1)^{4n} <= (m-n+1)^{4n}(n+2)^{4n} <= ... e^8 ... <= 2^12 (m-n+1)^{4n} n^{4n}
    a = (mn1 * (n + 1) + 1) ** (4 * n)
    b = mn1 ** (4 * n) * (n + 2) ** (4 * n)
    out.append(Check("estimate1.link1", a <= b, str(a), str(b), str(b - a)))
    with mpmath.workdps(DPS):
        lhs = mpmath.mpf(1 + mpmath.mpf(2) / n) ** (4 * n)
        ok, mg = log_compare(mpmath.log(lhs), 8)
        out.append(Check("estimate1.link2", ok, _s(lhs), "exp(8)", _s(mg), "(1+2/n)^{4n} <= e^8, log space"))
        ok, mg = log_compare(8, 12 * mpmath.log(2))
        out.append(Check("estimate1.link3", ok, "exp(8)", "2^12", _s(mg), "log space"))
        # 2: log(4(m+1)Cs) <= sqrt((m+1)s) log(4C)
        l2 = mpmath.log(4 * k * C)
        r2 = mpmath.sqrt(k) * mpmath.log(4 * C)
        r_int = math.isqrt(k)
        if r_int * r_int == k:
            exact = LogNum.log(4 * k * C) <= LogNum.log(4 * C, r_int)
            ok2, mg2 = exact, r2 - l2
        else:
            ok2, mg2 = log_compare(l2, r2)
        out.append(Check("estimate2", ok2, _s(l2), _s(r2), _s(mg2),
                         f"log(4(m+1)Cs) <= sqrt((m+1)s) log(4C) at (m+1)s={k}, C={C}"))
        # 3: loglog(4(m+1)Cs) <= log(sqrt((m+1)s) log(4C)) <= 2 sqrt((m+1)s) loglog(4C)
        l3 = mpmath.log(l2)
        mid = mpmath.log(r2)
        ok, mg = log_compare(l3, mid)
        out.append(Check("estimate3.link1", ok, _s(l3), _s(mid), _s(mg)))
        r3 = 2 * mpmath.sqrt(k) * mpmath.log(mpmath.log(4 * C))
        ok, mg = log_compare(mid, r3)
        out.append(Check("estimate3.link2", ok, _s(mid), _s(r3), _s(mg)))
    # 4: 2(x+1) <= 18^{x+1}/17^x at x = (m+1)s - 1
    x = k - 1
    lhs4 = Fraction(2 * (x + 1))
    rhs4 = Fraction(18 ** (x + 1), 17 ** x)
    out.append(Check("estimate4", lhs4 <= rhs4, str(lhs4), str(rhs4), _s(rhs4 - lhs4), f"x={x}"))
    return out


def identity_checks(p: ParamSet) -> list:
    """B'_2 Delta = A_2, log(B'_1 T) <= log A_1, and the four estimates."""
    A = constants_A(p)
    Bp = substituted_B(p)
    out = []
    lhs = Bp["B2"] * p.Delta
    out.append(Check("B2'*Delta == A2", lhs == A["A2"], str(lhs), str(A["A2"]),
                     str(A["A2"] - lhs),
                     f"alpha={p.alpha}; equality needs (alpha+1) = n+2, i.e. m = n"))
    A2_alpha = Fraction((8 * p.n + 6) * (p.alpha + 1) ** 2 * p.d * p.Delta ** (p.n + 1)) / p.delta
    out.append(Check("B2'*Delta == A2 with (alpha+1)^2 in place of (n+2)^2 [info]",
                     lhs == A2_alpha, str(lhs), str(A2_alpha), str(A2_alpha - lhs)))
    logBT = Bp["logB1"] + log_T(p)
    for label, key in (("derived", "logA1_derived"), ("printed", "logA1_printed")):
        ok, mg = log_compare(logBT, A[key])
        out.append(Check(f"log(B1'*T) <= log A1 [{label}]", ok, logBT.render(), A[key].render(), _s(mg)))
    alt = p.m + p.n - 1
    if alt >= 1:
        logBT_alt = Bp["logB1"] + log_T(p, factor=alt)
        ok, mg = log_compare(logBT_alt, A["logA1_derived"])
        out.append(Check("log(B1'*T) <= log A1 with (m+n-1) in T [info]", ok,
                         logBT_alt.render(), A["logA1_derived"].render(), _s(mg)))
    out.extend(fundamental_estimates(p))
    return out


def is_mandatory(check: Check) -> bool:
    """Checks whose failure fails a suite; printed-reading and [info] rows are reported only."""
    return (check.name in ("B2'*Delta == A2", "log(B1'*T) <= log A1 [derived]")
            or check.name.startswith("estimate"))


def sweep_params(ns: Iterable[int] = (1, 2, 3), extra_m: int = 3, ds=(1, 2), Deltas=(1, 2),
                 deltas=(Fraction(1), Fraction(1, 2)), s: int = 1, C: int = 1) -> list:
    out = []
    for n in ns:
        for m, d, Dl, dl in itertools.product(range(n, n + extra_m + 1), ds, Deltas, deltas):
            out.append(ParamSet(n=n, m=m, d=d, Delta=Dl, delta=dl, s=s, C=C))
    return out
