"""Distributions in Omega_1, projections, curvature and the Bianchi identities."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import Algebra
from .derivations import (
    ConsistencyError,
    FormHom,
    compose,
    equivariance_defect,
    fn_bracket,
    hom_space,
    insert_hom,
)
from .forms import (
    Form,
    basis_indices,
    d_terms,
    form_dim,
    ideal_component,
    index_position,
    lmul_basis,
    rmul,
)
from .linalg import ONE, ZERO, Subspace, dense, is_zero, kernel_sparse, solve_sparse, sparse


def _terms_of(A: Algebra, vec) -> dict:
    idxs = basis_indices(A, 1)
    return {idxs[i]: v for i, v in enumerate(vec) if v}


def _vec_of(A: Algebra, terms) -> tuple:
    return dense({index_position(A, idx): v for idx, v in terms.items()}, form_dim(A, 1))


@dataclass(frozen=True)
class Distribution:
    """A sub-bimodule of Omega_1, held as a canonical (RREF) subspace of coordinates."""

    algebra: Algebra
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim

    def forms(self) -> list[Form]:
        return [Form(self.algebra, 1, v) for v in self.space.basis]

    def __eq__(self, other):
        return isinstance(other, Distribution) and self.algebra == other.algebra and self.space == other.space

    def __hash__(self):
        return hash(self.space)


def _bimodule_closure(A: Algebra, vectors: Iterable[Sequence]) -> Subspace:
    dim1 = form_dim(A, 1)
    space = Subspace.span(list(vectors), dim1)
    while True:
        new = list(space.basis)
        for v in space.basis:
            t = _terms_of(A, v)
            for a in range(1, A.n):
                new.append(_vec_of(A, lmul_basis(A, a, t)))
                new.append(_vec_of(A, rmul(A, t, a)))
        grown = Subspace.span(new, dim1)
        if grown == space:
            return space
        space = grown


def is_bimodule(A: Algebra, space: Subspace) -> bool:
    for v in space.basis:
        t = _terms_of(A, v)
        for a in range(1, A.n):
            if not space.member(_vec_of(A, lmul_basis(A, a, t))) or not space.member(_vec_of(A, rmul(A, t, a))):
                return False
    return True


def make_distribution(A: Algebra, forms: Iterable) -> Distribution:
    """Smallest sub-bimodule of Omega_1 containing the given 1-forms (Forms or coordinate vectors)."""
    vecs = []
    for f in forms:
        if isinstance(f, Form):
            if f.degree != 1:
                raise ValueError("distributions are spanned by 1-forms")
            vecs.append(f.coords)
        else:
            vecs.append(tuple(f))
    return Distribution(A, _bimodule_closure(A, vecs))


def zero_distribution(A: Algebra) -> Distribution:
    return Distribution(A, Subspace.zero(form_dim(A, 1)))


def full_distribution(A: Algebra) -> Distribution:
    return Distribution(A, Subspace.full(form_dim(A, 1)))


# ---------------------------------------------------------------- projections


def hom_matrix_rows(K: FormHom) -> list[dict]:
    """Matrix of K: Omega_1 -> Omega_k as sparse rows (output coordinate -> {input column: value})."""
    A = K.algebra
    rows: dict = {}
    for col, idx in enumerate(basis_indices(A, 1)):
        for out_idx, v in K.apply_terms({idx: ONE}).items():
            rows.setdefault(index_position(A, out_idx), {})[col] = v
    return list(rows.values())


def apply_to_vector(K: FormHom, vec) -> tuple:
    A = K.algebra
    return dense({index_position(A, i): v for i, v in K.apply_terms(_terms_of(A, vec)).items()},
                 form_dim(A, K.degree))


def is_projection(P: FormHom) -> bool:
    return P.degree == 1 and compose(P, P) == P


def image(P: FormHom) -> Distribution:
    A = P.algebra
    return Distribution(A, Subspace.span([apply_to_vector(P, v) for v in Subspace.full(form_dim(A, 1)).basis],
                                         form_dim(A, P.degree)))


def kernel(P: FormHom) -> Distribution:
    A = P.algebra
    return Distribution(A, Subspace.span_sparse(kernel_sparse(hom_matrix_rows(P), form_dim(A, 1)), form_dim(A, 1)))


def find_projection(D: Distribution) -> FormHom | None:
    """A bimodule projection of Omega_1 onto D, or None when D is not a direct summand.

    Solves P(delta) = delta on a basis of D and P(d e_j) in D, parametrizing P
    over a basis of Hom(Omega_1, Omega_1).  Any solution is idempotent with
    image D; the returned one has all free parameters set to zero.
    """
    A = D.algebra
    H = hom_space(A, 1)
    dim1 = form_dim(A, 1)
    cols = [[apply_to_vector(h, b) for b in D.space.basis] for h in H]
    ann = D.space.annihilator()
    # constraint rows over the len(H) unknown coefficients
    rows: list[dict] = []
    rhs: list = []
    for bi, b in enumerate(D.space.basis):
        for r in range(dim1):
            rows.append({c: cols[c][bi][r] for c in range(len(H)) if cols[c][bi][r]})
            rhs.append(b[r])
    imgs = [[_vec_of(A, h.image(j)) for j in range(1, A.n)] for h in H]
    for w in ann:
        for j in range(A.n - 1):
            row = {}
            for c in range(len(H)):
                s = sum((x * imgs[c][j][i] for i, x in w.items()), ZERO)
                if s:
                    row[c] = s
            rows.append(row)
            rhs.append(ZERO)
    sol = solve_sparse(rows, rhs, len(H))
    if not sol:
        return None
    P = FormHom.zero(A, 1)
    for c, t in enumerate(sol.particular):
        if t:
            P = P + H[c] * t
    if not is_projection(P) or image(P).space != D.space:
        raise ConsistencyError("solution of the projection system is not a projection onto D")
    return P


# ---------------------------------------------------------------- integrability


def is_involutive(D: Distribution) -> bool:
    """d(D) contained in the degree-2 part of the ideal generated by D."""
    A = D.algebra
    if D.dim == 0:
        return True
    ideal2 = ideal_component(A, D.space, 2)
    for v in D.space.basis:
        dv = d_terms(_terms_of(A, v))
        if not ideal2.member(dense({index_position(A, i): x for i, x in dv.items()}, form_dim(A, 2))):
            return False
    return True


@dataclass(frozen=True)
class IntegrabilityResult:
    answer: bool
    witness: Subspace  # B_max in element coordinates
    generated: Subspace  # sub-bimodule generated by d(B_max)
    linear_span: Subspace  # plain span of A d(B_max) and d(B_max) A

    @property
    def readings_agree(self) -> bool:
        return self.generated == self.linear_span


def globally_integrable(D: Distribution) -> IntegrabilityResult:
    """Decide whether D is generated as a bimodule by d(B) for a subalgebra B.

    Uses the largest candidate B_max = {a : d(a) in D}; any admissible B lies
    inside it, so D is integrable iff d(B_max) generates D.
    """
    A = D.algebra
    dim1 = form_dim(A, 1)
    ann = D.space.annihilator()
    # d(e_i) has the single coordinate (0, i)
    rows = []
    for w in ann:
        row = {}
        for i in range(1, A.n):
            x = w.get(index_position(A, (0, i)))
            if x:
                row[i] = x
        rows.append(row)
    B = Subspace.span_sparse(kernel_sparse(rows, A.n), A.n)
    for x in B.basis:
        for y in B.basis:
            if not B.member(A.mul_coords(x, y)):
                raise ConsistencyError("B_max is not closed under multiplication")
    dB = [_vec_of(A, {(0, i): v for i, v in enumerate(b) if v and i}) for b in B.basis]
    generated = _bimodule_closure(A, dB)
    lin = []
    for v in dB:
        t = _terms_of(A, v)
        for a in range(A.n):
            lin.append(_vec_of(A, lmul_basis(A, a, t)))
            lin.append(_vec_of(A, rmul(A, t, a)))
    linear_span = Subspace.span(lin, dim1)
    return IntegrabilityResult(generated == D.space, B, generated, linear_span)


# ---------------------------------------------------------------- curvature


@dataclass(frozen=True)
class CurvatureData:
    bracket: FormHom  # [P, P]
    curvature: FormHom  # [P, P] o P
    cocurvature: FormHom  # [P, P] o (Id - P)


def curvature(P: FormHom) -> CurvatureData:
    A = P.algebra
    F = fn_bracket(P, P)
    Pbar = FormHom.identity(A) - P
    R = compose(F, P)
    Rbar = compose(F, Pbar)
    if R + Rbar != F:
        raise ConsistencyError("R + Rbar != [P, P]")
    if not compose(R, Pbar).is_zero():
        raise ConsistencyError("curvature does not vanish on the horizontal distribution")
    if not compose(Rbar, P).is_zero():
        raise ConsistencyError("cocurvature does not vanish on the vertical distribution")
    return CurvatureData(F, R, Rbar)


@dataclass(frozen=True)
class BianchiReport:
    first_holds: bool
    second_holds: bool
    first_residual: FormHom  # [P, R + Rbar]
    second_residual: FormHom  # 2[R, P] - j_R Rbar - j_Rbar R

    @property
    def holds(self) -> bool:
        return self.first_holds and self.second_holds


def bianchi(P: FormHom, data: CurvatureData | None = None) -> BianchiReport:
    data = data or curvature(P)
    R, Rbar = data.curvature, data.cocurvature
    first = fn_bracket(P, R + Rbar)
    second = fn_bracket(R, P) * 2 - insert_hom(R, Rbar) - insert_hom(Rbar, R)
    return BianchiReport(first.is_zero(), second.is_zero(), first, second)


@dataclass(frozen=True)
class FlatnessReport:
    curvature_zero: bool
    horizontal_involutive: bool
    cocurvature_zero: bool
    vertical_involutive: bool

    @property
    def agrees(self) -> bool:
        return (self.curvature_zero == self.horizontal_involutive
                and self.cocurvature_zero == self.vertical_involutive)


def flatness_equivalence(P: FormHom, data: CurvatureData | None = None) -> FlatnessReport:
    data = data or curvature(P)
    return FlatnessReport(data.curvature.is_zero(), is_involutive(kernel(P)),
                          data.cocurvature.is_zero(), is_involutive(image(P)))


# ---------------------------------------------------------------- projection corpus


def enumerate_distributions(A: Algebra, limit: int = 512) -> list[Distribution]:
    """Sub-bimodules reachable from canonical generators by sums and intersections.

    Seeds: 0, Omega_1, the bimodule generated by each basis 1-form, and the
    kernel and image of each basis element of Hom(Omega_1, Omega_1) and of every
    projection known exactly (see :mod:`ncforms.idempotents`).  The lattice is
    closed under + and intersection until stable or ``limit`` members.  This is
    a corpus, not a classification: sub-bimodule lattices can be infinite.
    """
    from .idempotents import all_projections

    dim1 = form_dim(A, 1)
    seeds = {Subspace.zero(dim1), Subspace.full(dim1)}
    for v in Subspace.full(dim1).basis:
        seeds.add(_bimodule_closure(A, [v]))
    for h in hom_space(A, 1) + (all_projections(A) or []):
        seeds.add(image(h).space)
        seeds.add(kernel(h).space)
    lattice = set(seeds)
    frontier = list(lattice)
    while frontier and len(lattice) < limit:
        nxt = []
        members = list(lattice)
        for U in frontier:
            for V in members:
                for W in (U + V, U & V):
                    if W not in lattice:
                        lattice.add(W)
                        nxt.append(W)
        frontier = nxt
    out = [Distribution(A, S) for S in lattice if is_bimodule(A, S)]
    return sorted(out, key=lambda D: (D.dim, D.space.basis))


@dataclass(frozen=True)
class ProjectionCorpus:
    projections: tuple
    exhaustive: bool  # True when every projection of Omega_1 is listed


def projection_corpus(A: Algebra, random_count: int = 0, seed: int = 0) -> ProjectionCorpus:
    """Test projections for A.

    If Hom(Omega_1, Omega_1) is commutative the complete list of idempotents is
    returned.  Otherwise: projections onto the splitting members of
    :func:`enumerate_distributions`, plus ``random_count`` random ones.
    """
    from .idempotents import all_projections

    exact = all_projections(A)
    if exact is not None:
        return ProjectionCorpus(tuple(exact), True)
    out = []
    seen = set()
    for D in enumerate_distributions(A):
        P = find_projection(D)
        if P is not None:
            out.append(P)
            seen.add(D.space)
    for P in random_projections(A, random_count, seed):
        if image(P).space not in seen:
            seen.add(image(P).space)
            out.append(P)
    return ProjectionCorpus(tuple(out), False)


def random_projections(A: Algebra, count: int, seed: int = 0, max_tries: int = 400) -> list[FormHom]:
    """Projections onto sub-bimodules generated by random sandwiched 1-forms.

    Each generator is a sum of one or two terms e_a . w . e_b with w a random
    1-form (coefficients in {-2..2}) and e_a, e_b random basis elements.
    Sandwiching keeps generators away from the generic case where a single
    vector already generates all of Omega_1.
    """
    rng = random.Random(seed)
    dim1 = form_dim(A, 1)
    out: list[FormHom] = []
    seen = set()
    tries = 0
    while len(out) < count and tries < max_tries:
        tries += 1
        gen: dict = {}
        for _ in range(rng.choice((1, 2))):
            w = _terms_of(A, [rng.randint(-2, 2) for _ in range(dim1)])
            t = rmul(A, lmul_basis(A, rng.randrange(A.n), w), rng.randrange(A.n))
            for idx, x in t.items():
                gen[idx] = gen.get(idx, ZERO) + x
        v = _vec_of(A, gen)
        if is_zero(v):
            continue
        D = make_distribution(A, [v])
        if D.dim in (0, dim1) or D.space in seen:
            continue
        P = find_projection(D)
        if P is None:
            continue
        seen.add(D.space)
        out.append(P)
    return out
