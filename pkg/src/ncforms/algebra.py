"""Finite-dimensional unital associative algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import ONE, ZERO, Subspace, Vector, is_zero, vector


class AlgebraError(ValueError):
    """Raised when a multiplication table fails the algebra axioms."""


class UnitError(AlgebraError):
    pass


class AssociativityError(AlgebraError):
    def __init__(self, triple, message=None):
        self.triple = triple
        super().__init__(message or f"associativity fails on basis triple {triple}")


class AlgebraMismatch(ValueError):
    """Operands live over different algebras."""


@dataclass(frozen=True, eq=False)
class Algebra:
    """Structure constants ``table[i][j]`` = coordinates of e_i e_j.

    After construction through :func:`validate_algebra` the unit is always
    basis vector 0, so that A/K is spanned by e_1, ..., e_{n-1}.
    """

    name: str
    n: int
    basis_labels: tuple
    table: tuple
    # coordinates of the new basis vectors in the caller's original basis
    basis_change: tuple = field(default=(), repr=False)
    # (label, coordinates in this basis) for original basis vectors no longer in the basis
    aliases: tuple = field(default=(), repr=False)

    def __post_init__(self):
        # per-instance caches for the form calculus (keyed on identity)
        object.__setattr__(self, "_cache", {})

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.n == other.n and self.table == other.table and self.basis_labels == other.basis_labels

    def __hash__(self):
        return hash((self.name, self.n, self.basis_labels))

    @property
    def unit(self) -> "Element":
        return self.basis_element(0)

    def basis_element(self, i: int) -> "Element":
        return Element(self, tuple(ONE if j == i else ZERO for j in range(self.n)))

    def element(self, coords: Sequence) -> "Element":
        coords = vector(coords)
        if len(coords) != self.n:
            raise ValueError(f"element of a {self.n}-dimensional algebra needs {self.n} coordinates")
        return Element(self, coords)

    def zero(self) -> "Element":
        return Element(self, (ZERO,) * self.n)

    def label_coords(self) -> dict:
        """Every usable label -> coordinates in this basis, including labels of the
        caller's original basis that were replaced when the unit moved to index 0."""
        key = "label_coords"
        if key not in self._cache:
            out = {lab: self.basis_element(i).coords for i, lab in enumerate(self.basis_labels)}
            out.update({lab: c for lab, c in self.aliases if lab not in out})
            self._cache[key] = out
        return self._cache[key]

    def label_index(self, label: str) -> int:
        try:
            return self.basis_labels.index(label)
        except ValueError:
            raise KeyError(f"unknown basis label {label!r} (known: {', '.join(self.basis_labels)})") from None

    def mul_coords(self, x: Sequence, y: Sequence) -> Vector:
        out = [ZERO] * self.n
        for i, a in enumerate(x):
            if not a:
                continue
            row = self.table[i]
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for m, c in enumerate(row[j]):
                    if c:
                        out[m] += ab * c
        return tuple(out)

    def structure_constants(self, i: int, j: int) -> dict:
        """Sparse coordinates {m: c_ij^m} of e_i e_j."""
        key = ("sc", i, j)
        cache = self._cache
        if key not in cache:
            cache[key] = {m: (c.numerator if c.denominator == 1 else c)
                          for m, c in enumerate(self.table[i][j]) if c}
        return cache[key]


@dataclass(frozen=True)
class Element:
    algebra: Algebra
    coords: tuple

    def _same(self, other: "Element") -> None:
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra.name} vs {other.algebra.name}")

    def __add__(self, other):
        self._same(other)
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._same(other)
        return Element(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Element(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, Element):
            return alg_mul(self, other)
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        c = Fraction(other)
        return Element(self.algebra, tuple(c * a for a in self.coords))

    def __rmul__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        c = Fraction(other)
        return Element(self.algebra, tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return is_zero(self.coords)

    def __str__(self):
        from .notation import format_element
        return format_element(self.algebra, self.coords)


def alg_mul(x: Element, y: Element) -> Element:
    x._same(y)
    return Element(x.algebra, x.algebra.mul_coords(x.coords, y.coords))


# ---------------------------------------------------------------- validation


def _check_associative(table, n) -> None:
    def mul(x, y):
        out = [ZERO] * n
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        for m, c in enumerate(table[i][j]):
                            if c:
                                out[m] += a * b * c
        return out

    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = mul(table[i][j], _unit_vec(k, n))
                right = mul(_unit_vec(i, n), table[j][k])
                if left != right:
                    raise AssociativityError((i, j, k))


def _unit_vec(i, n):
    return [ONE if m == i else ZERO for m in range(n)]


def validate_algebra(table, unit, labels: Sequence[str] | None = None, name: str = "algebra") -> Algebra:
    """Check the axioms and return the algebra with its unit moved to index 0.

    ``table[i][j]`` holds the coordinates of e_i e_j; ``unit`` the coordinates
    of the candidate two-sided unit.  Errors report indices of the input basis.
    """
    n = len(table)
    if n < 1:
        raise AlgebraError("algebra dimension must be at least 1")
    tab = []
    for i, row in enumerate(table):
        if len(row) != n:
            raise AlgebraError(f"multiplication table row {i} has {len(row)} entries, expected {n}")
        tab_row = []
        for j, v in enumerate(row):
            v = vector(v)
            if len(v) != n:
                raise AlgebraError(f"product e_{i} e_{j} has {len(v)} coordinates, expected {n}")
            tab_row.append(v)
        tab.append(tuple(tab_row))
    u = vector(unit)
    if len(u) != n:
        raise UnitError(f"unit vector has {len(u)} coordinates, expected {n}")
    labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(n))
    if len(labels) != n or len(set(labels)) != n:
        raise AlgebraError("need n distinct basis labels")

    _check_associative(tab, n)

    if is_zero(u):
        raise UnitError("singular basis change: the unit candidate is zero")
    for i in range(n):
        ei = _unit_vec(i, n)
        left = [sum((u[a] * tab[a][i][m] for a in range(n) if u[a]), ZERO) for m in range(n)]
        right = [sum((u[a] * tab[i][a][m] for a in range(n) if u[a]), ZERO) for m in range(n)]
        if left != ei or right != ei:
            raise UnitError(f"unit candidate is not a two-sided unit (fails on basis vector {labels[i]!r})")

    # new basis: f_0 = u, then the old e_i for i != p, where p is the first
    # index with u[p] != 0 (keeps the change of basis invertible)
    p = next(i for i, x in enumerate(u) if x)
    rest = [i for i in range(n) if i != p]
    new_basis = [u] + [tuple(_unit_vec(i, n)) for i in rest]

    def to_new(v):
        c0 = v[p] / u[p]
        return tuple([c0] + [v[i] - c0 * u[i] for i in rest])

    def old_mul(x, y):
        out = [ZERO] * n
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        for m, c in enumerate(tab[i][j]):
                            if c:
                                out[m] += a * b * c
        return out

    new_table = tuple(tuple(to_new(old_mul(new_basis[a], new_basis[b])) for b in range(n)) for a in range(n))
    if u == tuple(_unit_vec(p, n)):
        unit_label = labels[p]
    else:
        unit_label = "1" if "1" not in labels else "unit"
    new_labels = (unit_label,) + tuple(labels[i] for i in rest)
    aliases = () if unit_label == labels[p] else ((labels[p], to_new(_unit_vec(p, n))),)
    return Algebra(name, n, new_labels, new_table, tuple(tuple(b) for b in new_basis), aliases)


# ---------------------------------------------------------------- catalog


def _from_products(name, labels, product, unit_index=0):
    n = len(labels)
    table = [[product(i, j) for j in range(n)] for i in range(n)]
    unit = _unit_vec(unit_index, n)
    return validate_algebra(table, unit, labels, name)


def dual_numbers() -> Algebra:
    def prod(i, j):
        k = i + j
        return [1 if m == k else 0 for m in range(2)]
    return _from_products("dual_numbers", ("1", "eps"), prod)


def product_QQ() -> Algebra:
    """Q x Q in the basis 1 = (1,1), p = (1,0)."""
    def prod(i, j):
        return [1, 0] if i == j == 0 else [0, 1]
    return _from_products("product_QQ", ("1", "p"), prod)


def truncated_poly(m: int) -> Algebra:
    """Q[x]/(x^m) in the monomial basis."""
    if m < 1:
        raise ValueError("truncated_poly needs m >= 1")
    labels = ("1",) + tuple("x" if i == 1 else f"x^{i}" for i in range(1, m))

    def prod(i, j):
        return [1 if k == i + j else 0 for k in range(m)]
    return _from_products(f"truncated_poly({m})", labels, prod)


def matrix_algebra(m: int) -> Algebra:
    """M_m(Q) in the matrix-unit basis E_ij (row-major); unit renormalized to index 0."""
    if m < 1:
        raise ValueError("matrix algebra needs m >= 1")
    pairs = [(i, j) for i in range(m) for j in range(m)]
    labels = tuple(f"E{i + 1}{j + 1}" for i, j in pairs)
    n = m * m

    def prod(a, b):
        (i, j), (k, l) = pairs[a], pairs[b]
        out = [0] * n
        if j == k:
            out[pairs.index((i, l))] = 1
        return out

    table = [[prod(a, b) for b in range(n)] for a in range(n)]
    unit = [1 if i == j else 0 for i, j in pairs]
    return validate_algebra(table, unit, labels, f"matrix({m})")


def group_algebra_cyclic(m: int) -> Algebra:
    """Q[Z/m] in the basis 1, g, ..., g^(m-1)."""
    if m < 1:
        raise ValueError("group algebra needs m >= 1")
    labels = ("1",) + tuple("g" if i == 1 else f"g^{i}" for i in range(1, m))

    def prod(i, j):
        return [1 if k == (i + j) % m else 0 for k in range(m)]
    return _from_products(f"group_algebra_cyclic({m})", labels, prod)


_BUILTINS = {
    "dual_numbers": (dual_numbers, False),
    "product_QQ": (product_QQ, False),
    "truncated_poly": (truncated_poly, True),
    "matrix": (matrix_algebra, True),
    "group_algebra_cyclic": (group_algebra_cyclic, True),
}


def builtin(name: str, *params: int) -> Algebra:
    try:
        factory, takes_param = _BUILTINS[name]
    except KeyError:
        raise AlgebraError(f"unknown builtin algebra {name!r}; choose from {sorted(_BUILTINS)}") from None
    if takes_param:
        if len(params) != 1:
            raise ValueError(f"{name} takes exactly one integer parameter")
        return factory(int(params[0]))
    if params:
        raise ValueError(f"{name} takes no parameters")
    return factory()


def catalog() -> list[Algebra]:
    """The five algebras every acceptance check runs on."""
    return [dual_numbers(), product_QQ(), truncated_poly(3), matrix_algebra(2), group_algebra_cyclic(3)]


# ---------------------------------------------------------------- homs, subalgebras


@dataclass(frozen=True)
class AlgebraHom:
    source: Algebra
    target: Algebra
    matrix: tuple  # target.n rows x source.n columns

    def image_coords(self, x: Sequence) -> Vector:
        return tuple(sum((r[j] * x[j] for j in range(self.source.n) if x[j]), ZERO) for r in self.matrix)

    def __call__(self, x: Element) -> Element:
        if x.algebra != self.source:
            raise AlgebraMismatch("element is not in the source algebra")
        return Element(self.target, self.image_coords(x.coords))

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.matrix)


def algebra_hom(source: Algebra, target: Algebra, images: Sequence[Sequence]) -> AlgebraHom:
    """Build f from the images f(e_j) (target coordinates) and check it is a unital homomorphism."""
    if len(images) != source.n:
        raise ValueError(f"need one image per source basis vector ({source.n})")
    cols = [vector(v) for v in images]
    if any(len(c) != target.n for c in cols):
        raise ValueError("image coordinate length must equal target dimension")
    matrix = tuple(tuple(cols[j][i] for j in range(source.n)) for i in range(target.n))
    f = AlgebraHom(source, target, matrix)
    if f.column(0) != target.unit.coords:
        raise AlgebraError("homomorphism does not map unit to unit")
    for i in range(source.n):
        for j in range(source.n):
            lhs = f.image_coords(source.table[i][j])
            rhs = target.mul_coords(cols[i], cols[j])
            if lhs != rhs:
                raise AlgebraError(f"not multiplicative on ({source.basis_labels[i]}, {source.basis_labels[j]})")
    return f


def identity_hom(A: Algebra) -> AlgebraHom:
    return algebra_hom(A, A, [A.basis_element(i).coords for i in range(A.n)])


def subalgebra(A: Algebra, vectors: Sequence[Sequence]) -> Subspace:
    """Span of ``vectors`` checked for containing 1 and closure under products."""
    S = Subspace.span([vector(v) for v in vectors], A.n)
    if not S.member(A.unit.coords):
        raise AlgebraError("subalgebra does not contain the unit")
    for x in S.basis:
        for y in S.basis:
            if not S.member(A.mul_coords(x, y)):
                raise AlgebraError("span is not closed under multiplication")
    return S
