"""Graded derivations of Omega(A), insertion operators, Lie derivatives and brackets.

Conventions: for K in Hom(Omega_1, Omega_k) the insertion j_K is a derivation
of degree k - 1 and the Lie derivative L_K = [j_K, d] has degree k.  A graded
derivation is stored by its values on the generators e_i and d(e_j); its
action on any form follows from the graded Leibniz rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import Algebra, AlgebraMismatch
from .forms import (
    Form,
    Terms,
    add_into,
    append_tail,
    basis_indices,
    exact,
    form_dim,
    index_position,
    lmul_basis,
    mul_terms,
    rmul,
    scale,
)
from .linalg import ONE, ZERO, Subspace, kernel_sparse, sparse


class DerivationError(ValueError):
    """Generator data violates the derivation constraints."""


class EquivarianceError(ValueError):
    """Images do not define a bimodule homomorphism."""


class ConsistencyError(AssertionError):
    """An identity guaranteed by the theory failed: an implementation bug."""


def _freeze(t: Terms) -> tuple:
    return tuple(sorted((k, exact(v)) for k, v in t.items() if v))


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _check_same(a: Algebra, b: Algebra) -> None:
    if a is not b and a != b:
        raise AlgebraMismatch(f"{a.name} vs {b.name}")


# ---------------------------------------------------------------- FormHom


@dataclass(frozen=True, eq=False)
class FormHom:
    """A bimodule map Omega_1 -> Omega_k, stored by the images K(d e_j), j = 1..n-1."""

    algebra: Algebra
    degree: int
    images: tuple  # tuple of terms-tuples (frozen sparse dicts)
    _terms: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def from_terms(cls, A: Algebra, k: int, images: Sequence[Terms], check: bool = True) -> "FormHom":
        if k < 0:
            raise ValueError("FormHom degree must be non-negative")
        if len(images) != A.n - 1:
            raise ValueError(f"need {A.n - 1} images, one per d(e_j)")
        for img in images:
            for idx in img:
                if len(idx) != k + 1:
                    raise ValueError(f"image term {idx} is not of degree {k}")
        imgs = tuple(_freeze({i: v for i, v in img.items() if v}) for img in images)
        K = cls(A, k, imgs)
        if check:
            bad = equivariance_defect(K)
            if bad is not None:
                raise EquivarianceError(f"not a bimodule homomorphism: defect at (e_{bad[0]}, e_{bad[1]})")
        return K

    @classmethod
    def from_forms(cls, forms: Sequence[Form], check: bool = True) -> "FormHom":
        if not forms:
            raise ValueError("need at least one image")
        A, k = forms[0].algebra, forms[0].degree
        return cls.from_terms(A, k, [f.terms() for f in forms], check)

    @classmethod
    def zero(cls, A: Algebra, k: int) -> "FormHom":
        return cls.from_terms(A, k, [{}] * (A.n - 1), check=False)

    @classmethod
    def identity(cls, A: Algebra) -> "FormHom":
        return cls.from_terms(A, 1, [{(0, j): ONE} for j in range(1, A.n)], check=False)

    def image(self, j: int) -> Terms:
        """K(d e_j) as terms; j = 0 gives 0."""
        if j == 0:
            return {}
        return dict(self.images[j - 1])

    def image_forms(self) -> list[Form]:
        return [Form.from_terms(self.algebra, self.degree, dict(t)) for t in self.images]

    def apply_terms(self, w: Terms) -> Terms:
        """K on a 1-form given as terms: sum c e_{i0} K(d e_{i1})."""
        A = self.algebra
        out: Terms = {}
        for (i0, j), c in w.items():
            img = self.images[j - 1]
            if img:
                add_into(out, lmul_basis(A, i0, dict(img)), c)
        return out

    def __call__(self, w: Form) -> Form:
        if w.degree != 1:
            raise ValueError("FormHom acts on 1-forms")
        _check_same(w.algebra, self.algebra)
        return Form.from_terms(self.algebra, self.degree, self.apply_terms(w.terms()))

    def coords(self) -> tuple:
        """Concatenated dense coordinates of the images."""
        dim = form_dim(self.algebra, self.degree)
        out = []
        for img in self.images:
            row = [ZERO] * dim
            for idx, v in img:
                row[index_position(self.algebra, idx)] = v
            out.extend(row)
        return tuple(out)

    def is_zero(self) -> bool:
        return not any(self.images)

    def _same(self, other: "FormHom") -> None:
        _check_same(self.algebra, other.algebra)
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __eq__(self, other):
        if not isinstance(other, FormHom):
            return NotImplemented
        return self.algebra == other.algebra and self.degree == other.degree and self.images == other.images

    def __hash__(self):
        return hash((self.degree, self.images))

    def __add__(self, other: "FormHom") -> "FormHom":
        self._same(other)
        return FormHom.from_terms(self.algebra, self.degree,
                                  [add_into(dict(a), dict(b)) for a, b in zip(self.images, other.images)], check=False)

    def __neg__(self) -> "FormHom":
        return self * -1

    def __sub__(self, other: "FormHom") -> "FormHom":
        return self + (-other)

    def __mul__(self, c) -> "FormHom":
        c = Fraction(c)
        return FormHom.from_terms(self.algebra, self.degree, [scale(dict(a), c) for a in self.images], check=False)

    __rmul__ = __mul__

    def __str__(self):
        from .notation import format_terms
        labels = self.algebra.basis_labels
        return "; ".join(f"d({labels[j + 1]}) -> {format_terms(self.algebra, dict(t))}"
                         for j, t in enumerate(self.images))


def equivariance_defect(K: FormHom):
    """First pair (i, j) with K(d(e_i e_j)) - e_i K(d e_j) != K(d e_i) e_j, or None."""
    A = K.algebra
    for i in range(1, A.n):
        for j in range(1, A.n):
            lhs: Terms = {}
            for m, c in A.structure_constants(i, j).items():
                if m:
                    add_into(lhs, K.image(m), c)
            add_into(lhs, lmul_basis(A, i, K.image(j)), -ONE)
            add_into(lhs, rmul(A, K.image(i), j), -ONE)
            if lhs:
                return (i, j)
    return None


def compose(F: FormHom, P: FormHom) -> FormHom:
    """F o P for P in Hom(Omega_1, Omega_1)."""
    _check_same(F.algebra, P.algebra)
    if P.degree != 1:
        raise ValueError("can only precompose with an endomorphism of Omega_1")
    return FormHom.from_terms(F.algebra, F.degree, [F.apply_terms(dict(img)) for img in P.images])


def hom_space(A: Algebra, k: int) -> list[FormHom]:
    """Basis of Hom^A_A(Omega_1, Omega_k), canonical (RREF on concatenated image coordinates)."""
    if k < 0:
        raise ValueError("hom_space needs k >= 0")
    key = ("hom_space", k)
    if key in A._cache:
        return A._cache[key]
    dim = form_dim(A, k)
    idxs = basis_indices(A, k)
    ncols = (A.n - 1) * dim
    rows: dict = {}

    def put(i, j, terms, col, sign):
        for idx, v in terms.items():
            key2 = (i, j, idx)
            row = rows.setdefault(key2, {})
            y = row.get(col, ZERO) + sign * v
            if y:
                row[col] = y
            else:
                row.pop(col, None)

    # residual_{i,j'} = sum_m c_{ij'}^m K(de_m) - e_i K(de_j') - K(de_i) e_j'
    for jj in range(1, A.n):
        for p, beta in enumerate(idxs):
            col = (jj - 1) * dim + p
            unit = {beta: ONE}
            for i in range(1, A.n):
                for j2 in range(1, A.n):
                    c = A.table[i][j2][jj]
                    if c:
                        put(i, j2, unit, col, c)
                    if j2 == jj:
                        put(i, j2, lmul_basis(A, i, unit), col, -ONE)
                    if i == jj:
                        put(i, j2, rmul(A, unit, j2), col, -ONE)
    kern = kernel_sparse([r for r in rows.values() if r], ncols)
    space = Subspace.span_sparse(kern, ncols)
    basis = []
    for vec in space.basis:
        images = []
        for jj in range(A.n - 1):
            images.append({idxs[p]: vec[jj * dim + p] for p in range(dim) if vec[jj * dim + p]})
        basis.append(FormHom.from_terms(A, k, images, check=False))
    A._cache[key] = basis
    return basis


# ---------------------------------------------------------------- derivations


@dataclass(frozen=True, eq=False)
class GradedDerivation:
    """Degree-k derivation given by D(e_i) (i = 0..n-1) and D(d e_j) (j = 1..n-1)."""

    algebra: Algebra
    degree: int
    d0: tuple  # frozen terms, length n
    d1: tuple  # frozen terms, length n - 1

    def __post_init__(self):
        object.__setattr__(self, "_memo", {})

    @classmethod
    def from_terms(cls, A: Algebra, k: int, d0: Sequence[Terms], d1: Sequence[Terms],
                   check: bool = True) -> "GradedDerivation":
        if len(d0) != A.n or len(d1) != A.n - 1:
            raise ValueError("need n values on e_i and n-1 values on d(e_j)")
        for t in d0:
            for idx in t:
                if len(idx) != k + 1:
                    raise DerivationError(f"D(e_i) term {idx} is not of degree {k}")
        for t in d1:
            for idx in t:
                if len(idx) != k + 2:
                    raise DerivationError(f"D(d e_j) term {idx} is not of degree {k + 1}")
        D = cls(A, k, tuple(_freeze({i: v for i, v in t.items() if v}) for t in d0),
                tuple(_freeze({i: v for i, v in t.items() if v}) for t in d1))
        if check:
            check_derivation(D)
        return D

    @classmethod
    def zero(cls, A: Algebra, k: int) -> "GradedDerivation":
        return cls.from_terms(A, k, [{}] * A.n, [{}] * (A.n - 1), check=False)

    def value_on_element(self, i: int) -> Terms:
        return dict(self.d0[i])

    def value_on_differential(self, j: int) -> Terms:
        return {} if j == 0 else dict(self.d1[j - 1])

    def is_algebraic(self) -> bool:
        return not any(self.d0)

    def is_zero(self) -> bool:
        return not any(self.d0) and not any(self.d1)

    def __eq__(self, other):
        if not isinstance(other, GradedDerivation):
            return NotImplemented
        return (self.algebra == other.algebra and self.degree == other.degree
                and self.d0 == other.d0 and self.d1 == other.d1)

    def __hash__(self):
        return hash((self.degree, self.d0, self.d1))

    def _combine(self, other: "GradedDerivation", c) -> "GradedDerivation":
        _check_same(self.algebra, other.algebra)
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        return GradedDerivation.from_terms(
            self.algebra, self.degree,
            [add_into(dict(a), dict(b), c) for a, b in zip(self.d0, other.d0)],
            [add_into(dict(a), dict(b), c) for a, b in zip(self.d1, other.d1)], check=False)

    def __add__(self, other):
        return self._combine(other, ONE)

    def __sub__(self, other):
        return self._combine(other, -ONE)

    def __mul__(self, c):
        c = Fraction(c)
        return GradedDerivation.from_terms(self.algebra, self.degree, [scale(dict(a), c) for a in self.d0],
                                           [scale(dict(a), c) for a in self.d1], check=False)

    __rmul__ = __mul__

    def _tail_value(self, tail: tuple) -> Terms:
        """D(d e_{t1} ... d e_{tk}) = D(d e_{t1}) d e_{t2}.. + (-1)^deg d e_{t1} D(d e_{t2} ..)."""
        memo = self._memo
        key = ("tail", tail)
        hit = memo.get(key)
        if hit is not None:
            return hit
        A = self.algebra
        rest = tail[1:]
        out = append_tail(dict(self.d1[tail[0] - 1]), rest)
        if rest:
            y = self._tail_value(rest)
            if y:
                add_into(out, mul_terms(A, {(0, tail[0]): 1}, y), _sign(self.degree))
        memo[key] = out
        return out

    def _basis_value(self, idx: tuple) -> Terms:
        memo = self._memo
        hit = memo.get(idx)
        if hit is not None:
            return hit
        tail = idx[1:]
        out = append_tail(dict(self.d0[idx[0]]), tail)
        if tail:
            y = self._tail_value(tail)
            if y:
                add_into(out, lmul_basis(self.algebra, idx[0], y))
        memo[idx] = out
        return out

    def apply_terms(self, w: Terms) -> Terms:
        out: Terms = {}
        for idx, c in w.items():
            v = self._basis_value(idx)
            if v:
                add_into(out, v, c)
        return out

    def __call__(self, w: Form) -> Form:
        return evaluate_derivation(self, w)


def evaluate_derivation(D: GradedDerivation, w: Form):
    """D(w) by the graded Leibniz rule; returns a Form of degree deg w + deg D (None if negative)."""
    _check_same(D.algebra, w.algebra)
    k = w.degree + D.degree
    if k < 0:
        return None
    return Form.from_terms(D.algebra, k, D.apply_terms(w.terms()))


def evaluate_by_expansion(D: GradedDerivation, w: Form):
    """Oracle for :func:`evaluate_derivation`: write each basis form as the product
    e_{i0} . d e_{i1} ... d e_{ik} of Forms and apply the graded Leibniz rule
    factor by factor, multiplying whole Forms (no memoized tails)."""
    _check_same(D.algebra, w.algebra)
    A = D.algebra
    k = w.degree + D.degree
    if k < 0:
        return None
    total = Form.zero(A, k)
    for idx, c in w.terms().items():
        factors = [Form.basis(A, (idx[0],))] + [Form.basis(A, (0, j)) for j in idx[1:]]
        for t in range(len(factors)):
            deg = D.degree + factors[t].degree
            if deg < 0:
                continue
            raw = D.value_on_element(idx[0]) if t == 0 else D.value_on_differential(idx[t])
            term = Form.from_terms(A, deg, raw)
            for f in reversed(factors[:t]):
                term = f * term
            for f in factors[t + 1:]:
                term = term * f
            total = total + term * (c * _sign(D.degree * max(t - 1, 0)))
    return total


def check_derivation(D: GradedDerivation) -> None:
    """Raise DerivationError unless the generator data satisfies all constraints."""
    A = D.algebra
    k = D.degree
    if D.d0[0]:
        raise DerivationError("D(1) must vanish")
    for i in range(A.n):
        for j in range(A.n):
            # Leibniz on A
            lhs: Terms = {}
            for m, c in A.structure_constants(i, j).items():
                add_into(lhs, dict(D.d0[m]), c)
            add_into(lhs, rmul(A, dict(D.d0[i]), j), -ONE)
            add_into(lhs, lmul_basis(A, i, dict(D.d0[j])), -ONE)
            if lhs:
                raise DerivationError(f"Leibniz rule fails on (e_{i}, e_{j})")
            # compatibility with d(e_i e_j) = d(e_i) e_j + e_i d(e_j)
            lhs = {}
            for m, c in A.structure_constants(i, j).items():
                add_into(lhs, D.value_on_differential(m), c)
            add_into(lhs, rmul(A, D.value_on_differential(i), j), -ONE)
            if i and D.d0[j]:
                add_into(lhs, mul_terms(A, {(0, i): ONE}, dict(D.d0[j])), -_sign(k))
            if j and D.d0[i]:
                add_into(lhs, append_tail(dict(D.d0[i]), (j,)), -ONE)
            add_into(lhs, lmul_basis(A, i, D.value_on_differential(j)), -ONE)
            if lhs:
                raise DerivationError(f"derivation is incompatible with d on (e_{i}, e_{j})")


def differential_derivation(A: Algebra) -> GradedDerivation:
    key = "d_as_derivation"
    if key not in A._cache:
        A._cache[key] = GradedDerivation.from_terms(
            A, 1, [{}] + [{(0, i): ONE} for i in range(1, A.n)], [{}] * (A.n - 1), check=False)
    return A._cache[key]


def graded_commutator(D1: GradedDerivation, D2: GradedDerivation) -> GradedDerivation:
    """[D1, D2] = D1 D2 - (-1)^{k1 k2} D2 D1, computed on generators."""
    _check_same(D1.algebra, D2.algebra)
    A = D1.algebra
    k = D1.degree + D2.degree
    s = _sign(D1.degree * D2.degree)
    if k < -1:
        return GradedDerivation.zero(A, k)
    d0 = []
    for i in range(A.n):
        t = D1.apply_terms(D2.value_on_element(i))
        add_into(t, D2.apply_terms(D1.value_on_element(i)), -s)
        d0.append(t)
    d1 = []
    for j in range(1, A.n):
        t = D1.apply_terms(D2.value_on_differential(j))
        add_into(t, D2.apply_terms(D1.value_on_differential(j)), -s)
        d1.append(t)
    return GradedDerivation.from_terms(A, k, d0, d1, check=False)


def insertion(K: FormHom) -> GradedDerivation:
    """j_K: algebraic derivation of degree k - 1 restricting to K on Omega_1."""
    A = K.algebra
    return GradedDerivation.from_terms(A, K.degree - 1, [{}] * A.n, [dict(t) for t in K.images], check=False)


def lie_derivative(K: FormHom) -> GradedDerivation:
    """L_K = [j_K, d], a derivation of degree k commuting with d."""
    return graded_commutator(insertion(K), differential_derivation(K.algebra))


def restriction(D: GradedDerivation) -> FormHom:
    """D restricted to Omega_1 (valid as a FormHom when D is algebraic)."""
    if not D.is_algebraic():
        raise DerivationError("restriction to Omega_1 is a bimodule map only for algebraic derivations")
    return FormHom.from_terms(D.algebra, D.degree + 1, [dict(t) for t in D.d1])


@dataclass(frozen=True)
class Decomposition:
    lie_part: FormHom | None  # K in Hom(Omega_1, Omega_k); None when k < 0 (the space is zero)
    algebraic_part: FormHom  # L in Hom(Omega_1, Omega_{k+1})


def decompose(D: GradedDerivation) -> Decomposition:
    """The unique K, L with D = L_K + j_L."""
    A = D.algebra
    k = D.degree
    if k < -1:
        raise ValueError("derivations of degree < -1 vanish; nothing to decompose")
    if k >= 0:
        K = FormHom.from_terms(A, k, [dict(D.d0[j]) for j in range(1, A.n)], check=False)
        if equivariance_defect(K) is not None:
            raise ConsistencyError("values D(e_j) do not define a bimodule homomorphism")
        rest = D - lie_derivative(K)
    else:
        K = None
        rest = D
    if not rest.is_algebraic():
        raise ConsistencyError("D - L_K is not algebraic")
    L = FormHom.from_terms(A, k + 1, [dict(t) for t in rest.d1], check=False)
    if equivariance_defect(L) is not None:
        raise ConsistencyError("algebraic remainder is not a bimodule homomorphism")
    rebuilt = insertion(L) if K is None else lie_derivative(K) + insertion(L)
    if rebuilt != D:
        raise ConsistencyError("L_K + j_L does not reproduce D")
    return Decomposition(K, L)


def algebraic_bracket(K: FormHom, L: FormHom) -> FormHom:
    """[K, L]^Delta, defined by j([K, L]^Delta) = [j_K, j_L]."""
    _check_same(K.algebra, L.algebra)
    deg = K.degree + L.degree - 1
    if deg < 0:
        raise ValueError("algebraic bracket of two degree-0 maps lands in the zero space")
    C = graded_commutator(insertion(K), insertion(L))
    if not C.is_algebraic():
        raise ConsistencyError("commutator of algebraic derivations is not algebraic")
    return FormHom.from_terms(K.algebra, deg, [dict(t) for t in C.d1], check=False)


def fn_bracket(K: FormHom, L: FormHom) -> FormHom:
    """Frolicher-Nijenhuis bracket: L_[K,L] = [L_K, L_L]."""
    _check_same(K.algebra, L.algebra)
    C = graded_commutator(lie_derivative(K), lie_derivative(L))
    dec = decompose(C)
    if not dec.algebraic_part.is_zero():
        raise ConsistencyError("[L_K, L_L] has a nonzero algebraic part")
    return dec.lie_part


def insert_hom(K: FormHom, L: FormHom) -> FormHom:
    """j_K L: the map d e_j -> j_K(L(d e_j)), of degree k + l - 1."""
    _check_same(K.algebra, L.algebra)
    deg = K.degree + L.degree - 1
    if deg < 0:
        raise ValueError("insertion result would have negative degree")
    jK = insertion(K)
    return FormHom.from_terms(K.algebra, deg, [jK.apply_terms(dict(t)) for t in L.images])


# ---------------------------------------------------------------- derivations A -> M


@dataclass(frozen=True)
class UniversalDerivationReport:
    algebra: str
    module_degree: int
    dim_der: int
    dim_hom: int
    images_are_derivations: bool
    injective: bool

    @property
    def isomorphism(self) -> bool:
        return self.images_are_derivations and self.injective and self.dim_der == self.dim_hom


def derivation_space(A: Algebra, k: int) -> Subspace:
    """Der(A; Omega_k): linear D: A -> Omega_k with D(ab) = D(a) b + a D(b).

    Coordinates are D(e_0), ..., D(e_{n-1}) concatenated.
    """
    dim = form_dim(A, k)
    idxs = basis_indices(A, k)
    ncols = A.n * dim
    rows: dict = {}

    def put(i, j, terms, col, sign):
        for idx, v in terms.items():
            row = rows.setdefault((i, j, idx), {})
            y = row.get(col, ZERO) + sign * v
            if y:
                row[col] = y
            else:
                row.pop(col, None)

    for a in range(A.n):
        for p, beta in enumerate(idxs):
            col = a * dim + p
            unit = {beta: ONE}
            for i in range(A.n):
                for j in range(A.n):
                    c = A.table[i][j][a]
                    if c:
                        put(i, j, unit, col, c)
                    if i == a:
                        put(i, j, rmul(A, unit, j), col, -ONE)
                    if j == a:
                        put(i, j, lmul_basis(A, i, unit), col, -ONE)
    return Subspace.span_sparse(kernel_sparse([r for r in rows.values() if r], ncols), ncols)


MODULE_TAGS = {"A": 0, "Omega1": 1, "Omega2": 2}


def check_universal_derivation(A: Algebra, module: str | int) -> UniversalDerivationReport:
    """Verify that phi -> phi o d maps Hom(Omega_1, M) isomorphically onto Der(A; M)."""
    k = MODULE_TAGS[module] if isinstance(module, str) else int(module)
    der = derivation_space(A, k)
    homs = hom_space(A, k)
    dim = form_dim(A, k)
    images = []
    for phi in homs:
        vec = [ZERO] * dim  # D(e_0) = phi(d 1) = 0
        for j in range(1, A.n):
            row = [ZERO] * dim
            for idx, v in phi.image(j).items():
                row[index_position(A, idx)] = v
            vec.extend(row)
        images.append(tuple(vec))
    in_der = all(der.member(v) for v in images)
    rank = Subspace.span(images, A.n * dim).dim if images else 0
    return UniversalDerivationReport(A.name, k, der.dim, len(homs), in_der, rank == len(homs))


def is_derivation_data(A: Algebra, k: int, d0: Sequence[Terms], d1: Sequence[Terms]) -> bool:
    try:
        GradedDerivation.from_terms(A, k, d0, d1, check=True)
    except DerivationError:
        return False
    return True


def derivation_constraint_space(A: Algebra, k: int) -> Subspace:
    """All generator data (D(e_i), D(d e_j)) satisfying the derivation constraints.

    Coordinates: D(e_0..e_{n-1}) in Omega_k, then D(d e_1..d e_{n-1}) in Omega_{k+1}.
    Only used for small cross-checks; the system grows like n^2 dim Omega_{k+1}.
    """
    if k < 0:
        raise ValueError("needs k >= 0")
    dim0, dim1 = form_dim(A, k), form_dim(A, k + 1)
    ncols = A.n * dim0 + (A.n - 1) * dim1
    probes = []
    for col in range(ncols):
        d0 = [{} for _ in range(A.n)]
        d1 = [{} for _ in range(A.n - 1)]
        if col < A.n * dim0:
            a, p = divmod(col, dim0)
            d0[a] = {basis_indices(A, k)[p]: ONE}
        else:
            jj, p = divmod(col - A.n * dim0, dim1)
            d1[jj] = {basis_indices(A, k + 1)[p]: ONE}
        probes.append((d0, d1))
    rows: dict = {}
    for col, (d0, d1) in enumerate(probes):
        D = GradedDerivation.from_terms(A, k, d0, d1, check=False)
        for key, v in _constraint_residuals(D).items():
            rows.setdefault(key, {})[col] = v
    return Subspace.span_sparse(kernel_sparse([r for r in rows.values() if r], ncols), ncols)


def _constraint_residuals(D: GradedDerivation) -> dict:
    A = D.algebra
    k = D.degree
    res: dict = {}
    for idx, v in D.d0[0]:
        res[("unit", idx)] = v
    for i in range(A.n):
        for j in range(A.n):
            lhs: Terms = {}
            for m, c in A.structure_constants(i, j).items():
                add_into(lhs, dict(D.d0[m]), c)
            add_into(lhs, rmul(A, dict(D.d0[i]), j), -ONE)
            add_into(lhs, lmul_basis(A, i, dict(D.d0[j])), -ONE)
            for idx, v in lhs.items():
                res[("leib", i, j, idx)] = v
            lhs = {}
            for m, c in A.structure_constants(i, j).items():
                add_into(lhs, D.value_on_differential(m), c)
            add_into(lhs, rmul(A, D.value_on_differential(i), j), -ONE)
            if i and D.d0[j]:
                add_into(lhs, mul_terms(A, {(0, i): ONE}, dict(D.d0[j])), -_sign(k))
            if j and D.d0[i]:
                add_into(lhs, append_tail(dict(D.d0[i]), (j,)), -ONE)
            add_into(lhs, lmul_basis(A, i, D.value_on_differential(j)), -ONE)
            for idx, v in lhs.items():
                res[("comp", i, j, idx)] = v
    return res


def derivation_from_vector(A: Algebra, k: int, vec: Sequence) -> GradedDerivation:
    dim0, dim1 = form_dim(A, k), form_dim(A, k + 1)
    i0, i1 = basis_indices(A, k), basis_indices(A, k + 1)
    d0 = [{i0[p]: vec[a * dim0 + p] for p in range(dim0) if vec[a * dim0 + p]} for a in range(A.n)]
    off = A.n * dim0
    d1 = [{i1[p]: vec[off + jj * dim1 + p] for p in range(dim1) if vec[off + jj * dim1 + p]}
          for jj in range(A.n - 1)]
    return GradedDerivation.from_terms(A, k, d0, d1)
