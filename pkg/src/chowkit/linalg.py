"""Exact linear algebra over the rationals (row echelon, rank, kernels)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class IncrementalEchelon:
    """Grow a row space one vector at a time and answer independence queries.

    Vectors are sparse dicts ``column -> Fraction``.  Pivot rows are kept
    fully reduced against each other's pivots so membership is a single
    reduction pass.
    """

    def __init__(self):
        self.rows: dict = {}  # pivot column -> normalized row (pivot entry 1)

    def reduce(self, vec: dict) -> dict:
        v = {k: Fraction(x) for k, x in vec.items() if x}
        for piv, row in self.rows.items():
            c = v.get(piv)
            if c:
                for k, x in row.items():
                    s = v.get(k, 0) - c * x
                    if s:
                        v[k] = s
                    else:
                        v.pop(k, None)
        return v

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return False (and leave state unchanged) if dependent."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v)
        inv = 1 / v[piv]
        v = {k: x * inv for k, x in v.items()}
        for p, row in self.rows.items():
            c = row.get(piv)
            if c:
                for k, x in v.items():
                    s = row.get(k, 0) - c * x
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
        self.rows[piv] = v
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(matrix: Sequence[Sequence]) -> int:
    ech = IncrementalEchelon()
    for row in matrix:
        ech.add({j: x for j, x in enumerate(row) if x})
    return ech.rank


def rref(matrix: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in matrix]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for col in range(ncols):
        sel = next((i for i in range(r, len(a)) if a[i][col]), None)
        if sel is None:
            continue
        a[r], a[sel] = a[sel], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(matrix: Sequence[Sequence], ncols: int | None = None) -> list:
    """Basis of {x : A x = 0} as a list of Fraction vectors."""
    if not matrix:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows, pivots = rref(matrix)
    n = len(matrix[0])
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def det(matrix: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    d = Fraction(1)
    for col in range(n):
        sel = next((i for i in range(col, n) if a[i][col]), None)
        if sel is None:
            return Fraction(0)
        if sel != col:
            a[col], a[sel] = a[sel], a[col]
            d = -d
        d *= a[col][col]
        for i in range(col + 1, n):
            if a[i][col]:
                f = a[i][col] / a[col][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return d
