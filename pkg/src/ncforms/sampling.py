"""Seeded random objects for property checks (coefficients drawn from -2..2)."""

from __future__ import annotations

import random

from .algebra import Algebra, Element
from .derivations import FormHom, GradedDerivation, hom_space, insertion, lie_derivative
from .forms import Form, form_dim
from fractions import Fraction

COEFFS = (-2, -1, 0, 1, 2)


def make_rng(seed: int, *salt) -> random.Random:
    """Independent stream per (seed, salt) so that checks do not share state."""
    return random.Random(repr((seed,) + salt))


def random_coeffs(rng: random.Random, n: int) -> tuple:
    return tuple(Fraction(rng.choice(COEFFS)) for _ in range(n))


def random_element(A: Algebra, rng: random.Random) -> Element:
    return Element(A, random_coeffs(rng, A.n))


def random_form(A: Algebra, k: int, rng: random.Random) -> Form:
    return Form(A, k, random_coeffs(rng, form_dim(A, k)))


def random_hom(A: Algebra, k: int, rng: random.Random) -> FormHom:
    out = FormHom.zero(A, k)
    for h in hom_space(A, k):
        c = rng.choice(COEFFS)
        if c:
            out = out + h * c
    return out


def random_derivation(A: Algebra, k: int, rng: random.Random) -> GradedDerivation:
    """L_K + j_L for random K in Hom(Omega_1, Omega_k), L in Hom(Omega_1, Omega_{k+1})."""
    L = random_hom(A, k + 1, rng)
    if k < 0:
        return insertion(L)
    return lie_derivative(random_hom(A, k, rng)) + insertion(L)
