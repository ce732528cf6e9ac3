from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncforms.linalg import NO_SOLUTION, DimensionError, Matrix, Subspace, rref, solve

small = st.integers(-3, 3)


def vectors(n, count):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=0, max_size=count)


def test_solve_identity():
    sol = solve(Matrix.identity(2), (3, 5))
    assert sol.particular == (3, 5)
    assert sol.kernel_basis.dim == 0


def test_solve_rank_one_kernel():
    sol = solve(Matrix.from_rows([[1, 1]]), (0,))
    assert sol.kernel_basis == Subspace.span([(1, -1)], 2)


def test_solve_inconsistent():
    assert solve(Matrix.from_rows([[1], [2]]), (1, 3)) is NO_SOLUTION
    assert not NO_SOLUTION


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionError):
        solve(Matrix.identity(2), (1,))


def test_sum_and_intersection_of_axes():
    U, V = Subspace.span([(1, 0)], 2), Subspace.span([(0, 1)], 2)
    assert U + V == Subspace.full(2)
    assert (U & V).dim == 0


def test_self_intersection():
    U = Subspace.span([(1, 2, 3), (0, 1, 1)], 3)
    assert U & U == U
    assert U.contains(U)


def test_intersection_example():
    U = Subspace.span([(1, 1, 0), (0, 0, 1)], 3)
    V = Subspace.span([(1, 1, 1)], 3)
    W = U & V
    assert W == V
    # oracle: (1,1,1) = (1,1,0) + (0,0,1) so it lies in U; dim formula gives 2 + 1 = 2 + 1
    assert U.dim + V.dim == (U + V).dim + W.dim


def test_rref_is_reduced():
    rows, piv = rref([(2, 4, 6), (1, 1, 1)], 3)
    assert piv == (0, 1)
    assert rows == ((1, 0, -1), (0, 1, 2))
    assert all(isinstance(x, (int, Fraction)) for r in rows for x in r)


def test_ambient_mismatch():
    with pytest.raises(DimensionError):
        Subspace.full(2) + Subspace.full(3)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), vectors(n, 6), vectors(n, 6))))
def test_dimension_formula(data):
    n, a, b = data
    U, V = Subspace.span(a, n), Subspace.span(b, n)
    assert U.dim + V.dim == (U + V).dim + (U & V).dim
    assert (U + V).contains(U) and U.contains(U & V)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), vectors(n, 5), st.randoms(use_true_random=False))))
def test_rref_canonical(data):
    n, vs, rnd = data
    U = Subspace.span(vs, n)
    # a different spanning set: random combinations plus a shuffle of the basis
    combos = []
    for _ in range(3):
        cs = [rnd.randint(-2, 2) for _ in U.basis]
        combos.append(tuple(sum(c * v[i] for c, v in zip(cs, U.basis)) for i in range(n)))
    basis = list(U.basis)
    rnd.shuffle(basis)
    assert Subspace.span([tuple(3 * x for x in v) for v in basis] + combos, n) == U


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda c: st.tuples(vectors(c, 6).filter(bool), st.lists(small, min_size=c, max_size=c))))
def test_solve_round_trip(data):
    rows, x = data
    M = Matrix.from_rows(rows)
    b = M @ tuple(x)
    sol = solve(M, b)
    assert sol
    assert M @ sol.particular == b
    for k in sol.kernel_basis.basis:
        assert not any(M @ k)
