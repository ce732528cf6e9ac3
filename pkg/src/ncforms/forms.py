"""Universal differential forms Omega(A) over an algebra with unit e_0.

A k-form is stored on the basis e_{i0} d(e_{i1}) ... d(e_{ik}) with
i0 in 0..n-1 and i1..ik in 1..n-1, ordered lexicographically.  Internally
the calculus runs on sparse ``{index tuple: Fraction}`` dictionaries
("terms"); :class:`Form` carries the dense coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import Algebra, AlgebraHom, AlgebraMismatch, Element
from .linalg import ONE, ZERO, Subspace, dense, sparse

Terms = dict  # dict[tuple[int, ...], Fraction]


def form_dim(A: Algebra, k: int) -> int:
    if k < 0:
        raise ValueError("form degree must be non-negative")
    return A.n * (A.n - 1) ** k


def basis_indices(A: Algebra, k: int) -> list[tuple]:
    key = ("basis", k)
    cache = A._cache
    if key not in cache:
        tails = list(itertools.product(range(1, A.n), repeat=k))
        cache[key] = [(i0,) + t for i0 in range(A.n) for t in tails]
    return cache[key]


def index_position(A: Algebra, idx: tuple) -> int:
    m = A.n - 1
    pos = idx[0]
    for i in idx[1:]:
        pos = pos * m + (i - 1)
    return pos


def position_index(A: Algebra, k: int, pos: int) -> tuple:
    return basis_indices(A, k)[pos]


# ---------------------------------------------------------------- sparse kernels


def add_into(out: Terms, x: Mapping, coef=1) -> Terms:
    for idx, v in x.items():
        y = out.get(idx, 0) + coef * v
        if y:
            out[idx] = y
        else:
            out.pop(idx, None)
    return out


def scale(x: Mapping, c) -> Terms:
    if not c:
        return {}
    return {idx: c * v for idx, v in x.items()}


def exact(x):
    """Integral Fractions become ints so that hot loops run on machine-backed ints."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def rmul_basis(A: Algebra, idx: tuple, b: int) -> Terms:
    """(e_{i0} d e_{i1} ... d e_{ik}) . e_b, by d(a) b = d(ab) - a d(b)."""
    if b == 0:
        return {idx: ONE}
    key = ("rmul", idx, b)
    cache = A._cache
    hit = cache.get(key)
    if hit is not None:
        return hit
    if len(idx) == 1:
        out = {(m,): c for m, c in A.structure_constants(idx[0], b).items()}
    else:
        head, a = idx[:-1], idx[-1]
        out = {}
        for m, c in A.structure_constants(a, b).items():
            if m:
                out[head + (m,)] = c
        for h, v in rmul_basis(A, head, a).items():
            key2 = h + (b,)
            y = out.get(key2, 0) - v
            if y:
                out[key2] = y
            else:
                out.pop(key2, None)
    cache[key] = out
    return out


def rmul(A: Algebra, x: Mapping, b: int) -> Terms:
    if b == 0:
        return dict(x)
    out: Terms = {}
    for idx, v in x.items():
        add_into(out, rmul_basis(A, idx, b), v)
    return out


def rmul_element(A: Algebra, x: Mapping, coords) -> Terms:
    out: Terms = {}
    for b, c in enumerate(coords):
        if c:
            add_into(out, rmul(A, x, b), c)
    return out


def lmul_basis(A: Algebra, a: int, x: Mapping) -> Terms:
    """e_a . x acts on the leading algebra slot only."""
    if a == 0:
        return dict(x)
    out: Terms = {}
    for idx, v in x.items():
        for m, c in A.structure_constants(a, idx[0]).items():
            key = (m,) + idx[1:]
            y = out.get(key, 0) + c * v
            if y:
                out[key] = y
            else:
                out.pop(key, None)
    return out


def lmul_element(A: Algebra, coords, x: Mapping) -> Terms:
    out: Terms = {}
    for a, c in enumerate(coords):
        if c:
            add_into(out, lmul_basis(A, a, x), c)
    return out


def append_tail(x: Mapping, tail: tuple) -> Terms:
    if not tail:
        return dict(x)
    return {idx + tail: v for idx, v in x.items()}


def mul_terms(A: Algebra, x: Mapping, y: Mapping) -> Terms:
    """Product of homogeneous forms given as terms."""
    if not x or not y:
        return {}
    by_head: dict[int, list] = {}
    for idx, v in y.items():
        by_head.setdefault(idx[0], []).append((idx[1:], v))
    out: Terms = {}
    for b0, tails in by_head.items():
        xb = rmul(A, x, b0)
        if not xb:
            continue
        for tail, c in tails:
            for idx, v in xb.items():
                key = idx + tail
                y2 = out.get(key, 0) + c * v
                if y2:
                    out[key] = y2
                else:
                    out.pop(key, None)
    return out


def d_terms(x: Mapping) -> Terms:
    """a0 da1...dak -> d(a0) da1...dak; the unit coefficient is killed."""
    return {(0,) + idx: v for idx, v in x.items() if idx[0] != 0}


def unit_terms() -> Terms:
    return {(0,): ONE}


def degree_of(x: Mapping) -> int | None:
    for idx in x:
        return len(idx) - 1
    return None


# ---------------------------------------------------------------- Form values


@dataclass(frozen=True, eq=False)
class Form:
    algebra: Algebra
    degree: int
    coords: tuple

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("form degree must be non-negative")
        if len(self.coords) != form_dim(self.algebra, self.degree):
            raise ValueError(f"a {self.degree}-form over {self.algebra.name} needs {form_dim(self.algebra, self.degree)} coordinates")

    @classmethod
    def from_terms(cls, A: Algebra, k: int, terms: Mapping) -> "Form":
        dim = form_dim(A, k)
        out = [ZERO] * dim
        for idx, v in terms.items():
            if len(idx) != k + 1:
                raise ValueError(f"term {idx} does not have degree {k}")
            out[index_position(A, idx)] = Fraction(v)
        return cls(A, k, tuple(out))

    @classmethod
    def zero(cls, A: Algebra, k: int) -> "Form":
        return cls(A, k, (ZERO,) * form_dim(A, k))

    @classmethod
    def basis(cls, A: Algebra, idx: tuple) -> "Form":
        return cls.from_terms(A, len(idx) - 1, {idx: ONE})

    @classmethod
    def from_element(cls, x: Element) -> "Form":
        return cls(x.algebra, 0, x.coords)

    def terms(self) -> Terms:
        idxs = basis_indices(self.algebra, self.degree)
        return {idxs[i]: exact(v) for i, v in enumerate(self.coords) if v}

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _same(self, other: "Form") -> None:
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra.name} vs {other.algebra.name}")

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.algebra == other.algebra and self.degree == other.degree and self.coords == other.coords

    def __hash__(self):
        return hash((self.degree, self.coords))

    def __add__(self, other: "Form") -> "Form":
        self._same(other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree; use MixedForm")
        return Form(self.algebra, self.degree, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form(self.algebra, self.degree, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, Form):
            return form_mul(self, other)
        if isinstance(other, Element):
            return form_mul(self, Form.from_element(other))
        c = Fraction(other)
        return Form(self.algebra, self.degree, tuple(c * a for a in self.coords))

    def __rmul__(self, other):
        if isinstance(other, Element):
            return form_mul(Form.from_element(other), self)
        c = Fraction(other)
        return Form(self.algebra, self.degree, tuple(c * a for a in self.coords))

    def __str__(self):
        from .notation import format_terms
        return format_terms(self.algebra, self.terms())

    def __repr__(self):
        return f"Form({self.algebra.name}, degree={self.degree}, {self})"


def _as_form(x) -> Form:
    return Form.from_element(x) if isinstance(x, Element) else x


def differential(w: Form) -> Form:
    return Form.from_terms(w.algebra, w.degree + 1, d_terms(w.terms()))


def form_mul(w, eta):
    """Graded product; accepts Forms, Elements or MixedForms."""
    if isinstance(w, MixedForm) or isinstance(eta, MixedForm):
        return MixedForm.of(w) * MixedForm.of(eta)
    w, eta = _as_form(w), _as_form(eta)
    w._same(eta)
    A = w.algebra
    return Form.from_terms(A, w.degree + eta.degree, mul_terms(A, w.terms(), eta.terms()))


def d(x) -> Form:
    """d of an algebra element or a form."""
    return differential(_as_form(x))


@dataclass(frozen=True)
class MixedForm:
    """Finite sum of homogeneous forms, stored by degree (zero pieces dropped)."""

    algebra: Algebra
    pieces: tuple  # sorted ((degree, Form), ...)

    @classmethod
    def of(cls, x) -> "MixedForm":
        if isinstance(x, MixedForm):
            return x
        x = _as_form(x)
        return cls.build(x.algebra, [x])

    @classmethod
    def build(cls, A: Algebra, forms: Iterable[Form]) -> "MixedForm":
        acc: dict[int, Form] = {}
        for f in forms:
            if f.algebra != A:
                raise AlgebraMismatch("mixed form pieces over different algebras")
            acc[f.degree] = acc[f.degree] + f if f.degree in acc else f
        return cls(A, tuple(sorted((k, f) for k, f in acc.items() if not f.is_zero())))

    def __getitem__(self, k: int) -> Form:
        for deg, f in self.pieces:
            if deg == k:
                return f
        return Form.zero(self.algebra, k)

    @property
    def degrees(self) -> tuple:
        return tuple(k for k, _ in self.pieces)

    def __add__(self, other):
        other = MixedForm.of(other)
        return MixedForm.build(self.algebra, [f for _, f in self.pieces] + [f for _, f in other.pieces])

    def __mul__(self, other):
        other = MixedForm.of(other)
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra.name} vs {other.algebra.name}")
        return MixedForm.build(self.algebra, [form_mul(f, g) for _, f in self.pieces for _, g in other.pieces])

    def __str__(self):
        if not self.pieces:
            return "0"
        return " + ".join(f"[{k}] {f}" for k, f in self.pieces)


# ---------------------------------------------------------------- functoriality


def induced_morphism(f: AlgebraHom, w: Form) -> Form:
    """a0 da1..dak -> f(a0) d f(a1) .. d f(ak) in Omega of the target."""
    if w.algebra != f.source:
        raise AlgebraMismatch("form is not over the source of the homomorphism")
    B = f.target
    out: Terms = {}
    for idx, v in w.terms().items():
        # d f(e_i) = sum over non-unit coordinates m of f(e_i)_m d e_m
        dims = []
        for i in idx[1:]:
            col = f.column(i)
            dims.append([(m, c) for m, c in enumerate(col) if c and m])
        prod: Terms = {}
        for choice in itertools.product(*dims):
            c = ONE
            for _, x in choice:
                c *= x
            prod[(0,) + tuple(m for m, _ in choice)] = prod.get((0,) + tuple(m for m, _ in choice), ZERO) + c
        add_into(out, lmul_element(B, f.column(idx[0]), prod), v)
    return Form.from_terms(B, w.degree, out)


# ---------------------------------------------------------------- ideals


def ideal_component(A: Algebra, D: Subspace, k: int) -> Subspace:
    """Degree-k part of the two-sided ideal generated by D (a subspace of Omega_1).

    Spans beta . delta . gamma over basis forms beta in Omega_p, gamma in
    Omega_q, p + q + 1 = k, delta in basis(D).  Since
    delta . (g0 dg1..dgq) = (delta g0) dg1..dgq, the right factor is handled
    by right-multiplying delta by every basis element and appending tails.
    """
    if k < 1:
        raise ValueError("ideal_component needs k >= 1")
    if D.ambient_dim != form_dim(A, 1):
        raise ValueError("D must be a subspace of Omega_1 coordinates")
    idx1 = basis_indices(A, 1)
    gens = [{idx1[i]: v for i, v in enumerate(b) if v} for b in D.basis]
    right = []
    for g in gens:
        for b0 in range(A.n):
            right.append(rmul(A, g, b0))
    dimk = form_dim(A, k)
    rows = []
    seen = set()
    for p in range(k):
        q = k - 1 - p
        tails = list(itertools.product(range(1, A.n), repeat=q))
        for beta in basis_indices(A, p):
            for r in right:
                left = mul_terms(A, {beta: ONE}, r)
                if not left:
                    continue
                for tail in tails:
                    row = {index_position(A, idx + tail): v for idx, v in left.items()}
                    key = tuple(sorted(row.items()))
                    if key not in seen:
                        seen.add(key)
                        rows.append(row)
    return Subspace.span_sparse(rows, dimk)


def subspace_of_forms(A: Algebra, k: int, forms: Iterable[Form]) -> Subspace:
    return Subspace.span_sparse([sparse(f.coords) for f in forms], form_dim(A, k))


# ---------------------------------------------------------------- tensor oracle


@dataclass(frozen=True)
class TensorRep:
    """Element of A^{(k+1)} (tensor over the ground field), coordinates by multi-index."""

    algebra: Algebra
    degree: int
    terms: tuple  # sorted ((multi-index, Fraction), ...) nonzero only

    @classmethod
    def from_dict(cls, A: Algebra, k: int, x: Mapping) -> "TensorRep":
        return cls(A, k, tuple(sorted((i, v) for i, v in x.items() if v)))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def coords(self) -> tuple:
        """Dense coordinates over the lexicographic basis of A^{(k+1)}."""
        n = self.algebra.n
        out = [ZERO] * (n ** (self.degree + 1))
        for idx, v in self.terms:
            pos = 0
            for i in idx:
                pos = pos * n + i
            out[pos] = v
        return tuple(out)

    def __mul__(self, other: "TensorRep") -> "TensorRep":
        return TensorRep.from_dict(self.algebra, self.degree + other.degree,
                                   tensor_mul(self.algebra, self.as_dict(), other.as_dict()))

    def multiplied(self) -> tuple:
        """mu applied to a degree-1 tensor: sum of x0 x1 (for checking membership in ker mu)."""
        A = self.algebra
        out = [ZERO] * A.n
        for (i, j), v in self.terms:
            for m, c in enumerate(A.table[i][j]):
                out[m] += v * c
        return tuple(out)


def tensor_mul(A: Algebra, x: Mapping, y: Mapping) -> dict:
    """(x0..xp)(y0..yq) = x0 .. (xp y0) .. yq, i.e. concatenation over the middle A."""
    out: dict = {}
    for ix, vx in x.items():
        for iy, vy in y.items():
            for m, c in enumerate(A.table[ix[-1]][iy[0]]):
                if c:
                    key = ix[:-1] + (m,) + iy[1:]
                    out[key] = out.get(key, ZERO) + vx * vy * c
    return {k: v for k, v in out.items() if v}


def _tensor_d(a: int) -> dict:
    if a == 0:
        return {}
    return {(0, a): ONE, (a, 0): -ONE}


def to_tensor_rep(w: Form) -> TensorRep:
    A = w.algebra
    out: dict = {}
    for idx, v in w.terms().items():
        t = {(idx[0],): ONE}
        for a in idx[1:]:
            t = tensor_mul(A, t, _tensor_d(a))
        for key, c in t.items():
            out[key] = out.get(key, ZERO) + v * c
    rep = TensorRep.from_dict(A, w.degree, out)
    if w.degree == 1 and any(rep.multiplied()):
        raise AssertionError("degree-1 tensor image is not in ker(mu)")
    return rep


class NotInImage(ValueError):
    """Tensor is not the image of a form."""


def from_tensor_rep(t: TensorRep) -> Form:
    """Inverse of :func:`to_tensor_rep` on its image.

    Reads off the coordinates whose slots 1..k are all non-unit (the A x (A/K)^k
    part) and checks that re-embedding reproduces ``t``.
    """
    A = t.algebra
    k = t.degree
    terms = {idx: v for idx, v in t.terms if all(i != 0 for i in idx[1:])}
    w = Form.from_terms(A, k, terms)
    if to_tensor_rep(w).terms != t.terms:
        raise NotInImage("tensor does not lie in the image of Omega_k")
    return w
