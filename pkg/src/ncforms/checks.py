"""Verification checks grouped into suites (dga, derivations, brackets, geometry).

Every check returns :class:`Entry` values with a verdict PASS, FAIL or
INFEASIBLE.  Randomness comes from :func:`ncforms.sampling.make_rng` keyed by
(seed, check name, algebra name), so a report is a function of its inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .algebra import Algebra, AlgebraError, identity_hom, subalgebra
from .derivations import (
    MODULE_TAGS,
    ConsistencyError,
    FormHom,
    algebraic_bracket,
    check_universal_derivation,
    compose,
    decompose,
    derivation_constraint_space,
    derivation_from_vector,
    differential_derivation,
    equivariance_defect,
    evaluate_by_expansion,
    evaluate_derivation,
    fn_bracket,
    graded_commutator,
    hom_space,
    insert_hom,
    insertion,
    lie_derivative,
    restriction,
)
from .forms import (
    Form,
    basis_indices,
    differential,
    form_dim,
    from_tensor_rep,
    induced_morphism,
    to_tensor_rep,
)
from .geometry import (
    bianchi,
    curvature,
    enumerate_distributions,
    find_projection,
    flatness_equivalence,
    full_distribution,
    globally_integrable,
    image,
    is_bimodule,
    is_involutive,
    is_projection,
    kernel,
    make_distribution,
    projection_corpus,
    zero_distribution,
)
from .linalg import Subspace
from .sampling import make_rng, random_derivation, random_element, random_form, random_hom

PASS, FAIL, INFEASIBLE = "PASS", "FAIL", "INFEASIBLE"


@dataclass(frozen=True)
class Entry:
    id: str
    verdict: str
    inputs: str = ""
    witness: str = ""


@dataclass(frozen=True)
class Settings:
    seed: int = 0
    degree: int = 4  # verification bound N on form degrees


def _entry(cid: str, ok: bool, inputs: str = "", witness: str = "") -> Entry:
    return Entry(cid, PASS if ok else FAIL, inputs, witness)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _big(A: Algebra) -> bool:
    return A.n >= 4


# ---------------------------------------------------------------- dga


def check_algebra_axioms(A: Algebra) -> list[Entry]:
    n = A.n
    bad = None
    for i, j, k in itertools.product(range(n), repeat=3):
        left = A.mul_coords(A.table[i][j], A.basis_element(k).coords)
        right = A.mul_coords(A.basis_element(i).coords, A.table[j][k])
        if left != right:
            bad = (i, j, k)
            break
    out = [_entry("dga.algebra.associativity", bad is None, f"{n**3} basis triples",
                  f"triple={bad}" if bad else "")]
    unit_bad = [i for i in range(n) if A.table[0][i] != A.basis_element(i).coords
                or A.table[i][0] != A.basis_element(i).coords]
    out.append(_entry("dga.algebra.unit", not unit_bad, f"{n} basis elements",
                      f"fails on {A.basis_labels[unit_bad[0]]}" if unit_bad else ""))
    return out


def check_form_dims(A: Algebra, max_degree: int) -> Entry:
    for k in range(max_degree + 1):
        expected = A.n * (A.n - 1) ** k
        got = len(basis_indices(A, k))
        if got != expected or form_dim(A, k) != expected:
            return _entry("dga.form_dim", False, f"k<={max_degree}", f"k={k}: {got} != {expected}")
    return _entry("dga.form_dim", True, f"k<={max_degree}", "dim = n(n-1)^k")


def check_dd_zero(A: Algebra, max_degree: int) -> Entry:
    count = 0
    for k in range(max_degree + 1):
        for idx in basis_indices(A, k):
            w = Form.basis(A, idx)
            if not differential(differential(w)).is_zero():
                return _entry("dga.dd_zero", False, f"k<={max_degree}", f"basis form {w}")
            count += 1
    return _entry("dga.dd_zero", True, f"k<={max_degree}", f"{count} basis forms")


def check_leibniz(A: Algebra, rng, pairs: int = 100, max_degree: int = 3) -> Entry:
    for _ in range(pairs):
        p, q = rng.randint(0, max_degree), rng.randint(0, max_degree)
        w, eta = random_form(A, p, rng), random_form(A, q, rng)
        lhs = differential(w * eta)
        rhs = differential(w) * eta + (w * differential(eta)) * _sign(p)
        if lhs != rhs:
            return _entry("dga.leibniz", False, f"{pairs} pairs, degree<={max_degree}", f"w={w}; eta={eta}")
    return _entry("dga.leibniz", True, f"{pairs} pairs, degree<={max_degree}")


def check_product_laws(A: Algebra, rng, triples: int = 20, max_degree: int = 2) -> list[Entry]:
    one = Form.from_element(A.unit)
    assoc = unit = bimod = None
    for _ in range(triples):
        x, y, z = (random_form(A, rng.randint(0, max_degree), rng) for _ in range(3))
        if assoc is None and (x * y) * z != x * (y * z):
            assoc = f"x={x}; y={y}; z={z}"
        if unit is None and (one * x != x or x * one != x):
            unit = f"x={x}"
        a, b = random_element(A, rng), random_element(A, rng)
        if bimod is None and a * (x * b) != (a * x) * b:
            bimod = f"a={a}; x={x}; b={b}"
    inputs = f"{triples} random triples"
    return [_entry("dga.forms.associativity", assoc is None, inputs, assoc or ""),
            _entry("dga.forms.unit", unit is None, inputs, unit or ""),
            _entry("dga.forms.bimodule", bimod is None, inputs, bimod or "")]


def check_tensor_oracle(A: Algebra, rng, pairs: int = 100, max_degree: int = 2) -> list[Entry]:
    prod = trip = None
    for _ in range(pairs):
        w = random_form(A, rng.randint(0, max_degree), rng)
        eta = random_form(A, rng.randint(0, max_degree), rng)
        if prod is None and to_tensor_rep(w * eta) != to_tensor_rep(w) * to_tensor_rep(eta):
            prod = f"w={w}; eta={eta}"
    for _ in range(pairs):
        w = random_form(A, 2, rng)
        if trip is None and from_tensor_rep(to_tensor_rep(w)) != w:
            trip = f"w={w}"
    return [_entry("dga.tensor_oracle.product", prod is None, f"{pairs} pairs, degree<={max_degree}", prod or ""),
            _entry("dga.tensor_oracle.roundtrip", trip is None, f"{pairs} forms of degree 2", trip or "")]


def check_universal_property(A: Algebra) -> list[Entry]:
    out = []
    for tag in MODULE_TAGS:
        r = check_universal_derivation(A, tag)
        out.append(_entry(f"dga.universal_derivation.{tag}", r.isomorphism, f"M={tag}",
                          f"dim Der={r.dim_der} dim Hom={r.dim_hom} images_in_Der={r.images_are_derivations} "
                          f"injective={r.injective}"))
    return out


def check_induced_identity(A: Algebra, rng, samples: int = 10) -> Entry:
    f = identity_hom(A)
    for _ in range(samples):
        w = random_form(A, rng.randint(0, 2), rng)
        eta = random_form(A, rng.randint(0, 2), rng)
        if (induced_morphism(f, w) != w
                or induced_morphism(f, differential(w)) != differential(induced_morphism(f, w))
                or induced_morphism(f, w * eta) != induced_morphism(f, w) * induced_morphism(f, eta)):
            return _entry("dga.induced_morphism", False, "f = identity", f"w={w}")
    return _entry("dga.induced_morphism", True, "f = identity", f"{samples} samples")


# ---------------------------------------------------------------- derivations


def check_hom_spaces(A: Algebra, max_degree: int = 3) -> list[Entry]:
    out = []
    for k in range(max_degree + 1):
        H = hom_space(A, k)
        bad = next((i for i, h in enumerate(H) if equivariance_defect(h) is not None), None)
        out.append(_entry(f"deriv.hom_space.k{k}", bad is None, f"k={k}",
                          f"dim={len(H)}" if bad is None else f"basis element {bad} not equivariant"))
    Id = FormHom.identity(A)
    span = Subspace.span([h.coords() for h in hom_space(A, 1)], len(Id.coords()))
    out.append(_entry("deriv.hom_space.identity", equivariance_defect(Id) is None and span.member(Id.coords()),
                      "Id in Hom(Omega_1, Omega_1)"))
    return out


def check_insertion(A: Algebra, max_degree: int = 3) -> list[Entry]:
    out = []
    for k in range(max_degree + 1):
        bad = None
        for i, K in enumerate(hom_space(A, k)):
            jK = insertion(K)
            restricted = FormHom.from_terms(A, k, [jK.value_on_differential(j) for j in range(1, A.n)])
            if restricted != K or not jK.is_algebraic():
                bad = i
                break
        out.append(_entry(f"deriv.insertion.k{k}", bad is None, f"basis of Hom(Omega_1, Omega_{k})",
                          "" if bad is None else f"j(K)|Omega_1 != K for basis element {bad}"))
    # j_Id multiplies a degree-l form by l
    jId = insertion(FormHom.identity(A))
    bad = None
    for l in range(4):
        for idx in basis_indices(A, l):
            w = Form.basis(A, idx)
            if evaluate_derivation(jId, w) != w * l:
                bad = str(w)
                break
        if bad:
            break
    out.append(_entry("deriv.insertion.identity", bad is None, "basis forms of degree <= 3", bad or ""))
    return out


def check_algebraic_derivations(A: Algebra, max_degree: int = 1) -> list[Entry]:
    """Every algebraic derivation (D(A) = 0, constraints validated) is j of its restriction."""
    out = []
    for k in range(max_degree + 1):
        space = derivation_constraint_space(A, k)
        n0 = A.n * form_dim(A, k)
        # algebraic part: kill the D(e_i) coordinates
        rows = [{c: 1} for c in range(n0)]
        ambient = space.ambient_dim
        from .linalg import kernel_sparse

        alg = space & Subspace.span_sparse(kernel_sparse(rows, ambient), ambient)
        bad = None
        for vec in alg.basis:
            D = derivation_from_vector(A, k, vec)
            L = restriction(D)
            if insertion(L) != D:
                bad = str(L)
                break
        ok = bad is None and alg.dim == len(hom_space(A, k + 1))
        out.append(_entry(f"deriv.algebraic.k{k}", ok, f"algebraic derivations of degree {k}",
                          bad or f"dim={alg.dim}, dim Hom(Omega_1, Omega_{k + 1})={len(hom_space(A, k + 1))}"))
    return out


def check_evaluation_oracle(A: Algebra, rng, samples: int = 10, max_degree: int = 3) -> Entry:
    for _ in range(samples):
        D = random_derivation(A, rng.randint(-1, 2), rng)
        w = random_form(A, rng.randint(0, max_degree), rng)
        if evaluate_derivation(D, w) != evaluate_by_expansion(D, w):
            return _entry("deriv.evaluation_oracle", False, f"{samples} samples", f"deg D={D.degree}; w={w}")
    return _entry("deriv.evaluation_oracle", True, f"{samples} samples, form degree<={max_degree}")


def derivation_degrees(rng, count: int) -> list:
    return [rng.randint(-1, 2) for _ in range(count)]


def check_graded_lie(A: Algebra, rng, triples: int) -> list[Entry]:
    anti = jac = None
    for _ in range(triples):
        k1, k2, k3 = derivation_degrees(rng, 3)
        D1, D2, D3 = (random_derivation(A, k, rng) for k in (k1, k2, k3))
        if anti is None and graded_commutator(D1, D2) + graded_commutator(D2, D1) * _sign(k1 * k2) != \
                graded_commutator(D1, D2) * 0:
            anti = f"degrees ({k1}, {k2})"
        lhs = graded_commutator(D1, graded_commutator(D2, D3))
        rhs = (graded_commutator(graded_commutator(D1, D2), D3)
               + graded_commutator(D2, graded_commutator(D1, D3)) * _sign(k1 * k2))
        if jac is None and lhs != rhs:
            jac = f"degrees ({k1}, {k2}, {k3})"
    inputs = f"{triples} random triples, degrees in -1..2"
    return [_entry("deriv.anticommutativity", anti is None, inputs, anti or ""),
            _entry("deriv.jacobi", jac is None, inputs, jac or "")]


def check_decomposition(A: Algebra, rng, pairs: int = 50) -> list[Entry]:
    rt = comm = None
    d = differential_derivation(A)
    for _ in range(pairs):
        k = rng.randint(0, 2)
        K, L = random_hom(A, k, rng), random_hom(A, k + 1, rng)
        LK = lie_derivative(K)
        dec = decompose(LK + insertion(L))
        if rt is None and (dec.lie_part != K or dec.algebraic_part != L):
            rt = f"k={k}; K={K}; L={L}"
        if comm is None and not graded_commutator(LK, d).is_zero():
            comm = f"K={K}"
    dd = decompose(d)
    base = dd.lie_part == FormHom.identity(A) and dd.algebraic_part.is_zero()
    inputs = f"{pairs} random pairs, k<=2"
    return [_entry("deriv.decompose.roundtrip", rt is None, inputs, rt or ""),
            _entry("deriv.decompose.lie_commutes_with_d", comm is None, inputs, comm or ""),
            _entry("deriv.decompose.differential", base, "D = d", "" if base else "decompose(d) != (Id, 0)")]


# ---------------------------------------------------------------- brackets


def check_fn_bracket(A: Algebra, rng, pairs: int = 10, triples: int = 5) -> list[Entry]:
    """Residue-free FN brackets, graded antisymmetry, the degree-0 identity and Jacobi."""
    residue = anti = deg0 = jac = None
    for _ in range(pairs):
        k, l = rng.randint(0, 2), rng.randint(0, 2)
        K, L = random_hom(A, k, rng), random_hom(A, l, rng)
        try:
            KL = fn_bracket(K, L)
            LK = fn_bracket(L, K)
        except ConsistencyError as exc:
            residue = residue or f"k={k}, l={l}: {exc}"
            continue
        if anti is None and KL + LK * _sign(k * l) != KL * 0:
            anti = f"k={k}, l={l}"
        C = graded_commutator(lie_derivative(K), lie_derivative(L))
        LKL = lie_derivative(KL)
        if deg0 is None and any(LKL.value_on_element(a) != C.value_on_element(a) for a in range(A.n)):
            deg0 = f"k={k}, l={l}"
    for _ in range(triples):
        k, l, m = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
        K, L, M = random_hom(A, k, rng), random_hom(A, l, rng), random_hom(A, m, rng)
        lhs = fn_bracket(K, fn_bracket(L, M))
        rhs = fn_bracket(fn_bracket(K, L), M) + fn_bracket(L, fn_bracket(K, M)) * _sign(k * l)
        if jac is None and lhs != rhs:
            jac = f"degrees ({k}, {l}, {m})"
    return [_entry("brackets.fn.residue", residue is None, f"{pairs} pairs", residue or ""),
            _entry("brackets.fn.antisymmetry", anti is None, f"{pairs} pairs", anti or ""),
            _entry("brackets.fn.degree0", deg0 is None, f"{pairs} pairs", deg0 or ""),
            _entry("brackets.fn.jacobi", jac is None, f"{triples} triples, degrees<=2", jac or "")]


def check_algebraic_bracket(A: Algebra, rng, pairs: int = 10, triples: int = 5) -> list[Entry]:
    anti = jac = None
    for _ in range(pairs):
        k, l = rng.randint(1, 2), rng.randint(0, 2)
        K, L = random_hom(A, k, rng), random_hom(A, l, rng)
        if anti is None and algebraic_bracket(K, L) + algebraic_bracket(L, K) * _sign((k - 1) * (l - 1)) != \
                algebraic_bracket(K, L) * 0:
            anti = f"k={k}, l={l}"
    for _ in range(triples):
        k, l, m = rng.randint(1, 2), rng.randint(1, 2), rng.randint(1, 2)
        K, L, M = random_hom(A, k, rng), random_hom(A, l, rng), random_hom(A, m, rng)
        lhs = algebraic_bracket(K, algebraic_bracket(L, M))
        rhs = (algebraic_bracket(algebraic_bracket(K, L), M)
               + algebraic_bracket(L, algebraic_bracket(K, M)) * _sign((k - 1) * (l - 1)))
        if jac is None and lhs != rhs:
            jac = f"degrees ({k}, {l}, {m})"
    Id = FormHom.identity(A)
    selfzero = algebraic_bracket(Id, Id).is_zero()
    return [_entry("brackets.algebraic.antisymmetry", anti is None, f"{pairs} pairs", anti or ""),
            _entry("brackets.algebraic.identity", selfzero, "[Id, Id]^Delta = 0"),
            _entry("brackets.algebraic.jacobi", jac is None, f"{triples} triples, degrees<=2", jac or "")]


def check_insert_hom(A: Algebra, rng, samples: int = 5) -> Entry:
    Id = FormHom.identity(A)
    for _ in range(samples):
        l = rng.randint(1, 2)
        L = random_hom(A, l, rng)
        K = random_hom(A, rng.randint(1, 2), rng)
        if (insert_hom(Id, L) != L * l or not insert_hom(K, FormHom.zero(A, l)).is_zero()
                or not insert_hom(FormHom.zero(A, K.degree), L).is_zero()):
            return _entry("brackets.insert", False, f"{samples} samples", f"L={L}")
    return _entry("brackets.insert", True, f"{samples} samples", "j_Id L = l L; zero cases")


# ---------------------------------------------------------------- geometry


def check_trivial_integrability(A: Algebra) -> list[Entry]:
    z = globally_integrable(zero_distribution(A))
    f = globally_integrable(full_distribution(A))
    scalars = Subspace.span([A.unit.coords], A.n)
    return [
        _entry("geometry.integrable.zero", z.answer and z.witness == scalars, "D = 0",
               f"answer={str(z.answer).lower()} B_max dim={z.witness.dim}"),
        _entry("geometry.integrable.full", f.answer and f.witness == Subspace.full(A.n), "D = Omega_1",
               f"answer={str(f.answer).lower()} B_max dim={f.witness.dim}"),
    ]


def check_distributions(A: Algebra) -> list[Entry]:
    idem = None
    ds = enumerate_distributions(A)
    for D in ds:
        if make_distribution(A, D.space.basis) != D:
            idem = f"dim={D.dim}"
            break
    return [_entry("geometry.distributions.closure_idempotent", idem is None,
                   f"{len(ds)} enumerated sub-bimodules", idem or "")]


def describe_distribution(name: str, D, declared: Subspace) -> list[Entry]:
    A = D.algebra
    inv = is_involutive(D)
    P = find_projection(D)
    res = globally_integrable(D)
    readings = "" if res.readings_agree else (
        f"; linear-span reading differs: dim {res.linear_span.dim} vs bimodule dim {res.generated.dim}")
    added = D.dim - declared.dim
    return [
        Entry(f"geometry.distribution.{name}", PASS, f"declared span dim={declared.dim}",
              f"bimodule dim={D.dim} (closure added {added}); involutive={str(inv).lower()}"),
        Entry(f"geometry.distribution.{name}.splitting", PASS if P is not None else INFEASIBLE, "",
              f"P: {P}" if P is not None else "not a direct summand: no bimodule projection onto it"),
        Entry(f"geometry.distribution.{name}.integrable", PASS, "",
              f"answer={str(res.answer).lower()} B_max dim={res.witness.dim} "
              f"basis={[_fmt_element(A, b) for b in res.witness.basis]}{readings}"),
    ]


def _fmt_element(A: Algebra, coords) -> str:
    from .notation import format_element

    return format_element(A, coords)


def check_projection(tag: str, P: FormHom) -> list[Entry]:
    """Structural checks, curvature, both Bianchi identities and both flatness equivalences."""
    A = P.algebra
    out = []
    if not is_projection(P):
        return [_entry(f"geometry.{tag}.idempotent", False, "", f"P o P != P for P: {P}")]
    im, ker = image(P), kernel(P)
    dim1 = form_dim(A, 1)
    split = (is_bimodule(A, im.space) and is_bimodule(A, ker.space)
             and im.dim + ker.dim == dim1 and (im.space & ker.space).dim == 0)
    found = find_projection(im)
    desc = f"rank {im.dim}"
    out.append(_entry(f"geometry.{tag}.idempotent", True, desc))
    out.append(_entry(f"geometry.{tag}.splitting", split and found is not None and image(found) == im, desc,
                      f"im dim={im.dim}, ker dim={ker.dim}"))
    try:
        data = curvature(P)
    except ConsistencyError as exc:
        out.append(_entry(f"geometry.{tag}.curvature", False, desc, str(exc)))
        return out
    out.append(_entry(f"geometry.{tag}.curvature", True, desc,
                      f"R={'0' if data.curvature.is_zero() else 'nonzero'}, "
                      f"Rbar={'0' if data.cocurvature.is_zero() else 'nonzero'}"))
    b = bianchi(P, data)
    out.append(_entry(f"geometry.{tag}.bianchi1", b.first_holds, "[P, R + Rbar] = 0",
                      "" if b.first_holds else f"residual: {b.first_residual}"))
    out.append(_entry(f"geometry.{tag}.bianchi2", b.second_holds, "2[R, P] = j_R Rbar + j_Rbar R",
                      "" if b.second_holds else f"residual: {b.second_residual}"))
    f = flatness_equivalence(P, data)
    out.append(_entry(f"geometry.{tag}.flatness.horizontal", f.curvature_zero == f.horizontal_involutive,
                      "R = 0 iff ker P involutive",
                      f"R zero={str(f.curvature_zero).lower()}, ker P involutive={str(f.horizontal_involutive).lower()}"))
    out.append(_entry(f"geometry.{tag}.flatness.vertical", f.cocurvature_zero == f.vertical_involutive,
                      "Rbar = 0 iff im P involutive",
                      f"Rbar zero={str(f.cocurvature_zero).lower()}, im P involutive={str(f.vertical_involutive).lower()}"))
    exchanged = f.curvature_zero == f.vertical_involutive and f.cocurvature_zero == f.horizontal_involutive
    out.append(_entry(f"geometry.{tag}.flatness.exchanged", exchanged,
                      "R = 0 iff im P involutive; Rbar = 0 iff ker P involutive"))
    return out


def is_trivial_projection(P: FormHom) -> bool:
    return P.is_zero() or P == FormHom.identity(P.algebra)


def check_projection_corpus(A: Algebra, seed: int = 0, random_count: int = 5) -> list[Entry]:
    corpus = projection_corpus(A, random_count=random_count, seed=seed)
    kind = "complete list (commutative endomorphism algebra)" if corpus.exhaustive else "lattice and random search"
    nontrivial = [P for P in corpus.projections if not is_trivial_projection(P)]
    out = [Entry("geometry.corpus", PASS, kind, f"{len(corpus.projections)} projections, {len(nontrivial)} nontrivial")]
    if not nontrivial:
        why = ("Omega_1 has no bimodule projection other than 0 and Id" if corpus.exhaustive
               else "search found no projection other than 0 and Id")
        out.append(Entry("geometry.nontrivial_projections", INFEASIBLE, kind, why))
    for i, P in enumerate(corpus.projections):
        out.extend(check_projection(f"projection[{i}]", P))
    return out


def check_subalgebra(name: str, A: Algebra, S: Subspace) -> Entry:
    try:
        subalgebra(A, S.basis)
    except AlgebraError as exc:
        return Entry(f"algebra.subalgebra.{name}", FAIL, f"dim={S.dim}", str(exc))
    return Entry(f"algebra.subalgebra.{name}", PASS, f"dim={S.dim}", "contains 1, closed under products")


# ---------------------------------------------------------------- suites


def _counts(A: Algebra) -> dict:
    big = _big(A)
    return {
        "leibniz": 100, "oracle": 100, "laws": 20,
        "lie": 20 if big else 50, "decompose": 20 if big else 50,
        "fn_pairs": 10, "fn_triples": 5,
        "eval": 10,
    }


def group_dga(prob, s: Settings) -> list[Entry]:
    A = prob.algebra
    c = _counts(A)
    out = check_algebra_axioms(A)
    out.append(check_form_dims(A, s.degree))
    out.append(check_dd_zero(A, s.degree))
    out.append(check_leibniz(A, make_rng(s.seed, "leibniz", A.name), c["leibniz"], min(3, s.degree)))
    out += check_product_laws(A, make_rng(s.seed, "laws", A.name), c["laws"])
    out += check_tensor_oracle(A, make_rng(s.seed, "oracle", A.name), c["oracle"])
    out += check_universal_property(A)
    out.append(check_induced_identity(A, make_rng(s.seed, "induced", A.name)))
    for name, S in prob.subalgebras.items():
        out.append(check_subalgebra(name, A, S))
    return out


def group_derivations(prob, s: Settings) -> list[Entry]:
    A = prob.algebra
    c = _counts(A)
    kmax = min(3, s.degree)
    out = check_hom_spaces(A, kmax)
    out += check_insertion(A, kmax)
    out += check_algebraic_derivations(A, 1)
    out.append(check_evaluation_oracle(A, make_rng(s.seed, "eval", A.name), c["eval"], min(3, s.degree)))
    out += check_graded_lie(A, make_rng(s.seed, "lie", A.name), c["lie"])
    out += check_decomposition(A, make_rng(s.seed, "decompose", A.name), c["decompose"])
    for name, K in prob.homs.items():
        bad = equivariance_defect(K)
        out.append(_entry(f"deriv.hom.{name}", bad is None, f"degree {K.degree}",
                          "" if bad is None else
                          f"not a bimodule map: defect at ({A.basis_labels[bad[0]]}, {A.basis_labels[bad[1]]})"))
    return out


def group_brackets(prob, s: Settings) -> list[Entry]:
    A = prob.algebra
    c = _counts(A)
    out = check_fn_bracket(A, make_rng(s.seed, "fn", A.name), c["fn_pairs"], c["fn_triples"])
    out += check_algebraic_bracket(A, make_rng(s.seed, "abracket", A.name), c["fn_pairs"], c["fn_triples"])
    out.append(check_insert_hom(A, make_rng(s.seed, "insert", A.name)))
    return out


def group_geometry(prob, s: Settings) -> list[Entry]:
    A = prob.algebra
    out = check_trivial_integrability(A)
    out += check_distributions(A)
    out += check_projection_corpus(A, s.seed)
    for name, (D, declared) in prob.distributions.items():
        out += describe_distribution(name, D, declared)
    for name in prob.projections:
        K = prob.homs[name]
        if equivariance_defect(K) is not None or K.degree != 1:
            out.append(Entry(f"geometry.declared.{name}.idempotent", FAIL, "", "not an element of Hom(Omega_1, Omega_1)"))
            continue
        out += check_projection(f"declared.{name}", K)
    return out


SUITES: dict[str, list[Callable]] = {
    "dga": [group_dga],
    "derivations": [group_derivations],
    "brackets": [group_brackets],
    "geometry": [group_geometry],
}
SUITES["all"] = [g for name in ("dga", "derivations", "brackets", "geometry") for g in SUITES[name]]


def run_group(group: Callable, prob, settings: Settings) -> list[Entry]:
    """Run one group; an unexpected exception becomes a FAIL entry."""
    try:
        return group(prob, settings)
    except (ConsistencyError, ArithmeticError, ValueError, AssertionError) as exc:
        return [Entry(f"{group.__name__.replace('group_', '')}.error", FAIL, "", f"{type(exc).__name__}: {exc}")]
