from fractions import Fraction

import pytest

from ncforms.algebra import (
    AlgebraError,
    AssociativityError,
    UnitError,
    algebra_hom,
    alg_mul,
    builtin,
    identity_hom,
    subalgebra,
    validate_algebra,
)

DUAL_TABLE = [[(1, 0), (0, 1)], [(0, 1), (0, 0)]]


def test_dual_numbers_validates():
    A = validate_algebra(DUAL_TABLE, (1, 0), ["1", "eps"])
    assert A.n == 2
    eps = A.basis_element(1)
    assert alg_mul(eps, eps).is_zero()


def test_unit_error():
    # e1 e1 = e1 but e1 e0 = e1 != e0
    table = [[(1, 0), (0, 1)], [(0, 1), (0, 1)]]
    with pytest.raises(UnitError):
        validate_algebra(table, (0, 1))


def test_perturbed_table_is_not_associative():
    table = [[(1, 0), (0, 1)], [(0, 1), (1, 1)]]
    table[0][1] = (0, 2)  # e0 e1 = 2 e1
    # oracle: brute force over the 8 basis triples
    def mul(x, y):
        out = [Fraction(0)] * 2
        for i in range(2):
            for j in range(2):
                for m in range(2):
                    out[m] += x[i] * y[j] * table[i][j][m]
        return tuple(out)
    e = [(1, 0), (0, 1)]
    bad = [(i, j, k) for i in range(2) for j in range(2) for k in range(2)
           if mul(mul(e[i], e[j]), e[k]) != mul(e[i], mul(e[j], e[k]))]
    assert bad
    with pytest.raises(AlgebraError) as err:
        validate_algebra(table, (1, 0))
    assert isinstance(err.value, (AssociativityError, UnitError))


def test_broken_fixture_names_triple(problems_dir):
    from ncforms.problem import parse_problem

    with pytest.raises(AssociativityError) as err:
        parse_problem((problems_dir / "broken_associativity.ncf").read_text())
    assert err.value.triple == (0, 0, 1)


def test_unit_moved_to_index_zero():
    # unit given as the second basis vector
    table = [[(0, 0), (1, 0)], [(1, 0), (0, 1)]]
    A = validate_algebra(table, (0, 1), ["eps", "1"])
    assert A.basis_labels[0] == "1"
    assert A.table[0][1] == (0, 1)


def test_products(qq, m2):
    p = qq.basis_element(1)
    assert alg_mul(p, p) == p
    E12, E21 = m2.element(m2.label_coords()["E12"]), m2.element(m2.label_coords()["E21"])
    assert alg_mul(E12, E21).coords == m2.label_coords()["E11"]


def test_builtins():
    assert builtin("dual_numbers").n == 2
    M = builtin("matrix", 2)
    assert M.n == 4 and M.unit.coords == (1, 0, 0, 0)
    T = builtin("truncated_poly", 3)
    x, x2 = T.basis_element(1), T.basis_element(2)
    assert T.n == 3 and alg_mul(x, x2).is_zero()
    with pytest.raises(ValueError):
        builtin("no_such_algebra")
    with pytest.raises(ValueError):
        builtin("matrix", 0)


def test_catalog_axioms(algebras):
    for A in algebras:
        one = A.unit
        for i in range(A.n):
            e = A.basis_element(i)
            assert alg_mul(one, e) == e == alg_mul(e, one)
            for j in range(A.n):
                for k in range(A.n):
                    a, b, c = e, A.basis_element(j), A.basis_element(k)
                    assert alg_mul(alg_mul(a, b), c) == alg_mul(a, alg_mul(b, c))


def test_identity_hom_and_transpose(m2):
    identity_hom(m2)
    lc = m2.label_coords()
    swap = {"1": "1", "E12": "E21", "E21": "E12", "E22": "E22"}
    images = [lc[swap[lbl]] for lbl in m2.basis_labels]
    with pytest.raises(AlgebraError):
        algebra_hom(m2, m2, images)


def test_subalgebra(poly3):
    S = subalgebra(poly3, [(1, 0, 0), (0, 0, 1)])
    assert S.dim == 2
    with pytest.raises(AlgebraError):
        subalgebra(poly3, [(1, 0, 0), (0, 1, 0)])
    with pytest.raises(AlgebraError):
        subalgebra(poly3, [(0, 0, 1)])
