"""Exact noncommutative differential calculus over finite-dimensional algebras.

Universal differential forms, graded derivations, the algebraic and
Frolicher-Nijenhuis brackets, and the geometry of distributions and
projections in Omega_1, all over exact rationals.
"""

__version__ = "0.1.0"
