"""Exact rational linear algebra.

Vectors are tuples of :class:`fractions.Fraction`; matrices are tuples of
row tuples.  Elimination works on sparse ``{column: value}`` rows, which is
what keeps the large equivariance systems of the form calculus tractable.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

Vector = tuple  # tuple[Fraction, ...]
SparseRow = dict  # dict[int, Fraction]


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


def to_scalar(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and fractions to a reduced Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact scalars")
    return Fraction(x)


def vector(entries: Iterable) -> Vector:
    return tuple(to_scalar(x) for x in entries)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def is_zero(v: Iterable) -> bool:
    return all(x == 0 for x in v)


def sparse(v: Sequence) -> SparseRow:
    return {i: x for i, x in enumerate(v) if x}


def dense(row: Mapping[int, Fraction], n: int) -> Vector:
    out = [ZERO] * n
    for i, x in row.items():
        out[i] = x
    return tuple(out)


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major tuple of row tuples

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError("entry count must equal rows x cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = tuple(vector(r) for r in rows)
        if cols is None:
            if not rows:
                raise DimensionError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    def __matmul__(self, v):
        if isinstance(v, Matrix):
            if self.cols != v.rows:
                raise DimensionError(f"{self.rows}x{self.cols} @ {v.rows}x{v.cols}")
            cols = list(zip(*v.entries)) if v.rows else [()] * v.cols
            return Matrix(self.rows, v.cols, tuple(
                tuple(sum((a * b for a, b in zip(r, c)), ZERO) for c in cols) for r in self.entries))
        if len(v) != self.cols:
            raise DimensionError(f"matrix has {self.cols} columns, vector has length {len(v)}")
        return tuple(sum((a * b for a, b in zip(r, v) if a), ZERO) for r in self.entries)

    def transpose(self) -> "Matrix":
        if self.rows == 0:
            return Matrix(self.cols, 0, ((),) * self.cols)
        return Matrix(self.cols, self.rows, tuple(zip(*self.entries)))

    def sparse_rows(self) -> list[SparseRow]:
        return [sparse(r) for r in self.entries]


# ---------------------------------------------------------------- elimination


def _axpy(target: SparseRow, coef: Fraction, src: Mapping[int, Fraction]) -> None:
    """target += coef * src, dropping zeros."""
    for c, x in src.items():
        y = target.get(c, ZERO) + coef * x
        if y:
            target[c] = y
        else:
            target.pop(c, None)


class Echelon:
    """Incrementally built row-echelon basis of a span of sparse rows.

    Pivot rows are normalized (pivot entry 1) and zero below/left of their
    pivot in the sense that no row has a nonzero entry at an earlier pivot
    column.  :meth:`rref` back-substitutes to the reduced form.
    """

    def __init__(self, ncols: int, track: int = 0):
        self.ncols = ncols
        self.pivots: dict[int, SparseRow] = {}
        # optional augmented bookkeeping (right-hand sides / combinations)
        self.track = track
        self.aux: dict[int, SparseRow] = {}

    def reduce(self, row: Mapping[int, Fraction], aux: Mapping[int, Fraction] | None = None):
        """Reduce ``row`` against the pivots; returns (remainder, aux remainder)."""
        row = dict(row)
        aux = dict(aux) if aux is not None else {}
        heap = [c for c in row if c in self.pivots]
        heapq.heapify(heap)
        seen = set()
        while heap:
            c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            coef = row.get(c)
            if not coef:
                continue
            prow = self.pivots[c]
            for c2 in prow:
                if c2 not in row and c2 in self.pivots and c2 not in seen:
                    heapq.heappush(heap, c2)
            _axpy(row, -coef, prow)
            if self.track:
                _axpy(aux, -coef, self.aux[c])
        return row, aux

    def add(self, row: Mapping[int, Fraction], aux: Mapping[int, Fraction] | None = None) -> bool:
        """Insert a row; returns False when it was already in the span."""
        row, aux = self.reduce(row, aux)
        if not row:
            return False
        c = min(row)
        inv = ONE / row[c]
        self.pivots[c] = {k: v * inv for k, v in row.items()}
        if self.track:
            self.aux[c] = {k: v * inv for k, v in aux.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rref(self) -> list[tuple[int, SparseRow]]:
        """Fully reduced rows sorted by pivot column (mutates internal rows)."""
        order = sorted(self.pivots)
        for c in reversed(order):
            prow = self.pivots[c]
            for c2 in order:
                if c2 >= c:
                    break
                other = self.pivots[c2]
                coef = other.get(c)
                if coef:
                    _axpy(other, -coef, prow)
                    if self.track:
                        _axpy(self.aux[c2], -coef, self.aux[c])
        return [(c, self.pivots[c]) for c in order]


def rref(rows: Iterable[Sequence], ncols: int) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Reduced row-echelon form of the span of ``rows`` (zero rows dropped)."""
    ech = Echelon(ncols)
    for r in rows:
        if len(r) != ncols:
            raise DimensionError(f"row of length {len(r)} in a {ncols}-column system")
        ech.add(sparse(r))
    reduced = ech.rref()
    return tuple(dense(r, ncols) for _, r in reduced), tuple(c for c, _ in reduced)


def kernel_sparse(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> list[SparseRow]:
    """Basis of {x : row . x = 0 for all rows}, one vector per free column."""
    ech = Echelon(ncols)
    for r in rows:
        ech.add(r)
    reduced = ech.rref()
    pivot_cols = {c for c, _ in reduced}
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        v = {f: ONE}
        for c, r in reduced:
            x = r.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


# ---------------------------------------------------------------- subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim held by its RREF basis (canonical)."""

    ambient_dim: int
    basis: tuple = ()
    pivots: tuple = ()

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows, piv = rref(list(vectors), ambient_dim)
        return cls(ambient_dim, rows, piv)

    @classmethod
    def span_sparse(cls, rows: Iterable[Mapping[int, Fraction]], ambient_dim: int) -> "Subspace":
        ech = Echelon(ambient_dim)
        for r in rows:
            ech.add(r)
        return cls._from_echelon(ech)

    @classmethod
    def _from_echelon(cls, ech: Echelon) -> "Subspace":
        reduced = ech.rref()
        return cls(ech.ncols, tuple(dense(r, ech.ncols) for _, r in reduced), tuple(c for c, _ in reduced))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Matrix.identity(n).entries, tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def coordinates(self, v: Sequence) -> Vector | None:
        """Coefficients of ``v`` in this basis, or None if v is not a member."""
        if len(v) != self.ambient_dim:
            raise DimensionError("vector length does not match ambient dimension")
        coeffs = tuple(v[c] for c in self.pivots)
        rest = list(v)
        for a, b in zip(coeffs, self.basis):
            if a:
                for i, x in enumerate(b):
                    if x:
                        rest[i] -= a * x
        return coeffs if is_zero(rest) else None

    def member(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def member_sparse(self, v: Mapping[int, Fraction]) -> bool:
        return self.member(dense(v, self.ambient_dim))

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.member(v) for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        # x = sum a_i u_i = sum b_j v_j  <=>  [U^T | -V^T] (a, b) = 0
        m, n = self.dim, other.dim
        if m == 0 or n == 0:
            return Subspace.zero(self.ambient_dim)
        cols = [sparse(u) for u in self.basis] + [{i: -x for i, x in sparse(v).items()} for v in other.basis]
        rows: list[SparseRow] = [{} for _ in range(self.ambient_dim)]
        for j, col in enumerate(cols):
            for i, x in col.items():
                rows[i][j] = x
        vecs = []
        for k in kernel_sparse(rows, m + n):
            w = [ZERO] * self.ambient_dim
            for j, a in k.items():
                if j < m:
                    for i, x in enumerate(self.basis[j]):
                        if x:
                            w[i] += a * x
            vecs.append(w)
        return Subspace.span(vecs, self.ambient_dim)

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersection(other)

    def annihilator(self) -> list[SparseRow]:
        """Sparse functionals w with w . u = 0 for every u in the subspace."""
        return kernel_sparse((sparse(b) for b in self.basis), self.ambient_dim)


# ---------------------------------------------------------------- solving


class NoSolution:
    """Result marker for an inconsistent linear system."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self):
        return False

    def __repr__(self):
        return "NO_SOLUTION"


NO_SOLUTION = NoSolution()


@dataclass(frozen=True)
class Solution:
    particular: Vector
    kernel_basis: Subspace


def solve_sparse(rows: Sequence[Mapping[int, Fraction]], b: Sequence, ncols: int):
    """Solve rows . x = b; free variables are set to zero in the particular solution."""
    if len(rows) != len(b):
        raise DimensionError(f"{len(rows)} equations but right-hand side of length {len(b)}")
    ech = Echelon(ncols + 1)
    for r, rhs in zip(rows, b):
        row = dict(r)
        rhs = to_scalar(rhs)
        if rhs:
            row[ncols] = rhs
        ech.add(row)
    if ncols in ech.pivots:
        return NO_SOLUTION
    reduced = ech.rref()
    x = [ZERO] * ncols
    pivot_cols = set()
    for c, r in reduced:
        pivot_cols.add(c)
        x[c] = r.get(ncols, ZERO)
    kern = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        v = {f: ONE}
        for c, r in reduced:
            y = r.get(f)
            if y:
                v[c] = -y
        kern.append(v)
    return Solution(tuple(x), Subspace.span_sparse(kern, ncols))


def solve(M: Matrix, b: Sequence):
    """Solve M x = b.  Returns a :class:`Solution` or ``NO_SOLUTION``."""
    if M.rows != len(b):
        raise DimensionError(f"matrix has {M.rows} rows, right-hand side has length {len(b)}")
    return solve_sparse(M.sparse_rows(), vector(b), M.cols)
