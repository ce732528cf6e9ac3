"""Idempotents of the endomorphism algebra E = Hom(Omega_1, Omega_1) under composition.

Every projection of Omega_1 is an idempotent of E.  When E is commutative all of
them are found exactly: the radical comes from the trace form, the semisimple
quotient E/rad is Q[a] for a primitive element a, the factorization of the
minimal polynomial of a over Q yields the primitive idempotents by the Chinese
remainder theorem, and those lift through the nilpotent radical by the Newton
step e -> 3e^2 - 2e^3.  Idempotents of a commutative algebra are the subset sums
of the primitive ones, so the list is complete.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import sympy

from .algebra import Algebra
from .derivations import ConsistencyError, FormHom, compose, hom_space
from .linalg import ONE, ZERO, Echelon, Subspace, kernel_sparse, solve_sparse


class EndAlgebra:
    """E in coordinates over the canonical basis of Hom(Omega_1, Omega_1)."""

    def __init__(self, A: Algebra):
        self.algebra = A
        self.basis = hom_space(A, 1)
        self.dim = len(self.basis)
        vecs = [h.coords() for h in self.basis]
        self._space = Subspace.span(vecs, len(vecs[0]) if vecs else 0)
        self.table = [[self.coords(compose(hi, hj)) for hj in self.basis] for hi in self.basis]
        self.one = self.coords(FormHom.identity(A))

    def coords(self, F: FormHom) -> tuple:
        c = self._space.coordinates(F.coords())
        if c is None:
            raise ConsistencyError("map is not in Hom(Omega_1, Omega_1)")
        return c

    def hom(self, c) -> FormHom:
        out = FormHom.zero(self.algebra, 1)
        for h, x in zip(self.basis, c):
            if x:
                out = out + h * x
        return out

    def mul(self, x, y) -> tuple:
        out = [ZERO] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    for m, c in enumerate(self.table[i][j]):
                        if c:
                            out[m] += xi * yj * c
        return tuple(out)

    def is_commutative(self) -> bool:
        return all(self.table[i][j] == self.table[j][i] for i in range(self.dim) for j in range(i))

    def radical(self) -> Subspace:
        """{x : tr L_{xy} = 0 for all y}; the Jacobson radical in characteristic 0."""
        t = [sum((self.table[i][l][l] for l in range(self.dim)), ZERO) for i in range(self.dim)]
        gram = [[sum((c * t[m] for m, c in enumerate(self.table[i][j])), ZERO)
                 for j in range(self.dim)] for i in range(self.dim)]
        rows = [{i: gram[i][j] for i in range(self.dim) if gram[i][j]} for j in range(self.dim)]
        return Subspace.span_sparse(kernel_sparse(rows, self.dim), self.dim)


def _reduce_mod(rad: Subspace, v) -> tuple:
    out = list(v)
    for c, row in zip(rad.pivots, rad.basis):
        x = out[c]
        if x:
            for i, y in enumerate(row):
                if y:
                    out[i] -= x * y
    return tuple(out)


def _minimal_polynomial(E: EndAlgebra, rad: Subspace, a) -> list[Fraction]:
    """Monic minimal polynomial of a modulo rad, coefficients from degree 0 upwards."""
    powers = [_reduce_mod(rad, E.one)]
    while True:
        nxt = _reduce_mod(rad, E.mul(powers[-1], a))
        rows = [{k: p[r] for k, p in enumerate(powers) if p[r]} for r in range(E.dim)]
        sol = solve_sparse(rows, nxt, len(powers))
        if sol:
            return [-c for c in sol.particular] + [ONE]
        powers.append(nxt)


def _evaluate(E: EndAlgebra, coeffs, a) -> tuple:
    """Horner evaluation of a polynomial (low-to-high coefficients) at a."""
    out = tuple(ZERO for _ in range(E.dim))
    for c in reversed(coeffs):
        out = E.mul(out, a)
        if c:
            out = tuple(x + c * u for x, u in zip(out, E.one))
    return out


def _lift(E: EndAlgebra, e) -> tuple:
    for _ in range(E.dim + 2):
        e2 = E.mul(e, e)
        if e2 == e:
            return e
        e3 = E.mul(e2, e)
        e = tuple(3 * x - 2 * y for x, y in zip(e2, e3))
    raise ConsistencyError("idempotent lifting did not converge")


def primitive_idempotents(A: Algebra, seed: int = 0) -> list[FormHom] | None:
    """Primitive idempotents of a commutative E, or None if E is not commutative."""
    E = EndAlgebra(A)
    if not E.is_commutative():
        return None
    rad = E.radical()
    quotient_dim = E.dim - rad.dim
    rng = random.Random(seed)
    for attempt in range(64):
        span = 1 + attempt // 8
        a = tuple(Fraction(rng.randint(-span, span)) for _ in range(E.dim))
        f = _minimal_polynomial(E, rad, a)
        if len(f) - 1 == quotient_dim:
            break
    else:
        raise ConsistencyError("no primitive element found for E/rad")
    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f)], t, domain=sympy.QQ)
    _, factors = poly.factor_list()
    if any(mult != 1 for _, mult in factors):
        raise ConsistencyError("minimal polynomial over E/rad is not squarefree")
    out = []
    for i, (fi, _) in enumerate(factors):
        g = sympy.Poly(1, t, domain=sympy.QQ)
        for j, (fj, _) in enumerate(factors):
            if j != i:
                g = g * fj
        ei = (g * g.invert(fi)).rem(poly)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(ei.all_coeffs())]
        out.append(_lift(E, _evaluate(E, coeffs, a)))
    total = tuple(sum(col, ZERO) for col in zip(*out)) if out else tuple(ZERO for _ in range(E.dim))
    if total != E.one:
        raise ConsistencyError("primitive idempotents do not sum to the identity")
    for x, y in itertools.combinations(out, 2):
        if any(E.mul(x, y)):
            raise ConsistencyError("primitive idempotents are not orthogonal")
    return [E.hom(e) for e in out]


def all_projections(A: Algebra) -> list[FormHom] | None:
    """Every bimodule projection of Omega_1 when E is commutative (None otherwise)."""
    prims = primitive_idempotents(A)
    if prims is None:
        return None
    out = []
    for r in range(len(prims) + 1):
        for subset in itertools.combinations(prims, r):
            P = FormHom.zero(A, 1)
            for e in subset:
                P = P + e
            out.append(P)
    return sorted(out, key=lambda P: P.coords())
