"""Exact linear combinations of logarithms of positive rationals.

A ``LogNum`` is sum_i q_i * log(b_i) with rational q_i and positive rational
b_i.  Sign tests reduce to comparing integer powers, which is exact; when the
powers would be astronomically large we fall back to high-precision mpmath.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

import mpmath
from sympy import factorint

from .poly import as_fraction

# exponent-bit budget for exact sign decisions
_EXACT_BITS = 1 << 20
_FALLBACK_DPS = 80


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def log_fraction(x: Fraction) -> float:
    """Natural log of a positive Fraction without float overflow."""
    return math.log(x.numerator) - math.log(x.denominator)


class LogNum:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        t = {}
        for b, q in (terms or {}).items():
            b = as_fraction(b)
            q = as_fraction(q)
            if b <= 0:
                raise ValueError("logarithm of a non-positive number")
            if b == 1 or q == 0:
                continue
            t[b] = t.get(b, Fraction(0)) + q
            if t[b] == 0:
                del t[b]
        self.terms = t

    @classmethod
    def log(cls, x, coeff=1) -> "LogNum":
        return cls({as_fraction(x): coeff})

    @classmethod
    def zero(cls) -> "LogNum":
        return cls()

    def __add__(self, other: "LogNum") -> "LogNum":
        t = dict(self.terms)
        for b, q in other.terms.items():
            t[b] = t.get(b, Fraction(0)) + q
        return LogNum(t)

    def __neg__(self) -> "LogNum":
        return LogNum({b: -q for b, q in self.terms.items()})

    def __sub__(self, other: "LogNum") -> "LogNum":
        return self + (-other)

    def scale(self, r) -> "LogNum":
        r = as_fraction(r)
        return LogNum({b: q * r for b, q in self.terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def prime_coordinates(self) -> dict:
        """Coefficients over log p for primes p; a canonical form of the value."""
        out: dict = {}
        for b, q in self.terms.items():
            for part, sign in ((b.numerator, 1), (b.denominator, -1)):
                for p, e in factorint(part).items():
                    out[p] = out.get(p, Fraction(0)) + sign * e * q
        return {p: q for p, q in out.items() if q}

    def ratio(self, other: "LogNum") -> Fraction | None:
        """self / other when it is rational (parallel prime coordinates), else None."""
        a, b = self.prime_coordinates(), other.prime_coordinates()
        if not b:
            raise ZeroDivisionError("ratio by a zero LogNum")
        if set(a) - set(b):
            return None
        p0 = next(iter(b))
        r = a.get(p0, Fraction(0)) / b[p0]
        return r if all(a.get(p, Fraction(0)) == r * q for p, q in b.items()) else None

    @property
    def arg(self) -> Fraction | None:
        """exp(self) when it is rational (all coefficients integral), else None."""
        out = Fraction(1)
        for b, q in self.terms.items():
            if q.denominator != 1:
                return None
            out *= b ** q.numerator
        return out

    def __float__(self) -> float:
        return float(sum(float(q) * log_fraction(b) for b, q in self.terms.items()))

    def mp(self, dps: int = _FALLBACK_DPS):
        with mpmath.workdps(dps):
            return mpmath.fsum(mpmath.mpf(q.numerator) / q.denominator
                               * (mpmath.log(b.numerator) - mpmath.log(b.denominator))
                               for b, q in self.terms.items())

    def sign(self) -> int:
        if not self.terms:
            return 0
        den = 1
        for q in self.terms.values():
            den = _lcm(den, q.denominator)
        bits = sum(abs(q.numerator * (den // q.denominator))
                   * (b.numerator.bit_length() + b.denominator.bit_length())
                   for b, q in self.terms.items())
        if bits <= _EXACT_BITS:
            num, dnm = 1, 1
            for b, q in self.terms.items():
                e = q.numerator * (den // q.denominator)
                if e > 0:
                    num *= b.numerator ** e
                    dnm *= b.denominator ** e
                else:
                    num *= b.denominator ** -e
                    dnm *= b.numerator ** -e
            return (num > dnm) - (num < dnm)
        v = self.mp()
        if abs(v) < mpmath.mpf(10) ** (-_FALLBACK_DPS // 2):
            raise ArithmeticError("log-combination too close to zero for the float fallback")
        return 1 if v > 0 else -1

    def __eq__(self, other):
        if isinstance(other, LogNum):
            return (self - other).sign() == 0
        return NotImplemented

    # equal values can have different term maps (log 4 = 2 log 2)
    __hash__ = None

    def __lt__(self, other: "LogNum"):
        return (self - other).sign() < 0

    def __le__(self, other: "LogNum"):
        return (self - other).sign() <= 0

    def __gt__(self, other: "LogNum"):
        return (self - other).sign() > 0

    def __ge__(self, other: "LogNum"):
        return (self - other).sign() >= 0

    def render(self) -> str:
        if not self.terms:
            return "0"
        a = self.arg
        if a is not None:
            return f"log({a})"
        parts = []
        for b, q in sorted(self.terms.items()):
            parts.append(f"{q}*log({b})")
        return " + ".join(parts)

    def __repr__(self):
        return f"LogNum({self.render()} ~ {float(self):.12g})"
