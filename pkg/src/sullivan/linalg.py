"""Exact linear algebra over the rationals.

Everything here works on :class:`fractions.Fraction` entries and never
touches floating point.  Row reduction is plain rational Gauss-Jordan
elimination: the pivot of each column is the first row (in row order) with a
nonzero entry, the pivot row is scaled to 1 and the column is cleared above
and below.  Rows are stored sparsely as ``{column: value}`` dicts while
reducing, which keeps the systems coming from graded algebras cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError

Vector = tuple  # tuple of Fraction


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise InputError("floating point entries are not accepted; use Fraction or str")
    return Fraction(x)


def as_vector(values: Iterable) -> Vector:
    return tuple(_frac(v) for v in values)


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix of exact rationals."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise InputError(f"entries do not match declared shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        rows = [as_vector(r) for r in rows]
        if cols is None:
            if not rows:
                raise InputError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RationalMatrix":
        columns = [as_vector(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise InputError("column length does not match row count")
        entries = tuple(tuple(c[i] for c in columns) for i in range(rows))
        return cls(rows, len(columns), entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        z = Fraction(0)
        return cls(rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, tuple(self.columns()))

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise InputError(f"vector of length {len(v)} does not fit {self.rows}x{self.cols} matrix")
        v = as_vector(v)
        return tuple(sum((a * b for a, b in zip(row, v) if a and b), Fraction(0)) for row in self.entries)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise InputError("inner dimensions differ")
            cols = other.columns()
            return RationalMatrix.from_columns([self.apply(c) for c in cols], self.rows)
        return self.apply(other)

    def rank(self) -> int:
        return len(rref(self)[1])

    def tolist(self) -> list:
        return [list(r) for r in self.entries]


def _sparse_rows(m: RationalMatrix) -> list:
    return [{j: x for j, x in enumerate(row) if x} for row in m.entries]


def _reduce(rows: list, ncols: int):
    """Gauss-Jordan on sparse rows in place; returns (nonzero rows, pivot columns)."""
    pivots = []
    reduced = []
    remaining = [r for r in rows if r]
    for col in range(ncols):
        idx = next((i for i, r in enumerate(remaining) if col in r), None)
        if idx is None:
            continue
        prow = remaining.pop(idx)
        inv = 1 / prow[col]
        prow = {j: x * inv for j, x in prow.items()}
        for target in (reduced, remaining):
            for i, r in enumerate(target):
                f = r.get(col)
                if f:
                    new = dict(r)
                    for j, x in prow.items():
                        y = new.get(j, 0) - f * x
                        if y:
                            new[j] = y
                        else:
                            new.pop(j, None)
                    target[i] = new
        remaining = [r for r in remaining if r]
        reduced.append(prow)
        pivots.append(col)
    return reduced, pivots


def rref(m: RationalMatrix):
    """Reduced row echelon form.

    Returns ``(rows, pivots)`` where ``rows`` are the nonzero rows of the RREF
    as dense tuples and ``pivots`` their pivot columns.
    """
    reduced, pivots = _reduce(_sparse_rows(m), m.cols)
    zero = Fraction(0)
    dense = [tuple(r.get(j, zero) for j in range(m.cols)) for r in reduced]
    return dense, pivots


def kernel_basis(m: RationalMatrix) -> list:
    """Basis of ``{v : m v = 0}``, one vector per free column, in column order."""
    reduced, pivots = _reduce(_sparse_rows(m), m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            c = row.get(free)
            if c:
                v[p] = -c
        basis.append(tuple(v))
    return basis


def image_basis(m: RationalMatrix) -> list:
    """Columns of ``m`` at pivot positions; they span the column space."""
    _, pivots = _reduce(_sparse_rows(m), m.cols)
    return [m.column(j) for j in pivots]


@dataclass(frozen=True)
class Solution:
    particular: Vector
    kernel: list


def solve(m: RationalMatrix, b: Sequence):
    """Solve ``m x = b`` exactly.

    Returns a :class:`Solution` (particular solution with free variables set
    to zero, plus a kernel basis) or ``None`` when the system is inconsistent.
    """
    if len(b) != m.rows:
        raise InputError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
    b = as_vector(b)
    rows = _sparse_rows(m)
    n = m.cols
    for r, bi in zip(rows, b):
        if bi:
            r[n] = bi
    reduced, pivots = _reduce(rows, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(reduced, pivots):
        x[p] = row.get(n, Fraction(0))
    return Solution(tuple(x), kernel_basis(m))


def is_in_span(vectors: Sequence, v: Sequence) -> bool:
    if not vectors:
        return not any(v)
    return solve(RationalMatrix.from_columns(vectors, len(v)), v) is not None


def coordinates(vectors: Sequence, v: Sequence):
    """Coefficients expressing ``v`` in the linearly independent ``vectors``, or None."""
    if not vectors:
        return () if not any(v) else None
    sol = solve(RationalMatrix.from_columns(vectors, len(v)), v)
    return None if sol is None else sol.particular


def rank_of(vectors: Sequence, length: int) -> int:
    if not vectors:
        return 0
    return RationalMatrix.from_rows(vectors, length).rank()


def quotient_basis(sub: Sequence, ambient: Sequence) -> list:
    """Vectors of ``ambient`` completing ``sub`` to a basis of ``span(ambient)``.

    Candidates are taken greedily in the given order, so the choice is
    deterministic.  Raises :class:`InputError` if ``sub`` is not contained in
    ``span(ambient)``.
    """
    sub = [as_vector(s) for s in sub]
    ambient = [as_vector(a) for a in ambient]
    if not ambient:
        if any(any(s) for s in sub):
            raise InputError("sub is not contained in span(ambient)")
        return []
    length = len(ambient[0])
    for s in sub:
        if not is_in_span(ambient, s):
            raise InputError("sub is not contained in span(ambient)")
    rows = [{j: x for j, x in enumerate(s) if x} for s in sub]
    reduced, pivots = _reduce(rows, length)
    chosen = []
    for a in ambient:
        trial = reduced + [{j: x for j, x in enumerate(a) if x}]
        red2, piv2 = _reduce(trial, length)
        if len(piv2) > len(pivots):
            chosen.append(a)
            reduced, pivots = red2, piv2
    return chosen
