from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from webtensor.algebra import (LieAlgebra, Split, matrix_inverse, nullspace, rank, rat, unit_vec,
                               validate)
from webtensor.fixtures import heisenberg, sl2

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
vec3 = st.tuples(small, small, small)


def test_rat_refuses_floats():
    assert rat("3/4") == Fraction(3, 4)
    assert rat(2) == Fraction(2)
    with pytest.raises((TypeError, ValueError)):
        rat(0.5)


def test_sl2_brackets():
    g = sl2()
    e1, e2, e3 = (g.basis(i) for i in range(3))
    assert g.bracket(e1, e2) == e3
    assert g.bracket(e3, e1) == tuple(2 * x for x in e1)
    assert g.bracket(e3, e2) == tuple(-2 * x for x in e2)


@given(vec3, vec3)
def test_bracket_antisymmetric(x, y):
    g = sl2()
    assert g.bracket(x, y) == tuple(-v for v in g.bracket(y, x))


@given(vec3, vec3, vec3)
def test_jacobi_on_vectors(x, y, z):
    g = sl2()
    b = g.bracket
    total = [sum(t) for t in zip(b(x, b(y, z)), b(y, b(z, x)), b(z, b(x, y)))]
    assert total == [0, 0, 0]


def test_validate_fixtures():
    assert validate(sl2(), Split(sl2(), 2)).ok
    assert validate(heisenberg()).ok
    assert LieAlgebra.abelian(4).is_abelian()


def test_validate_reports_jacobi_witness():
    # [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e3 is antisymmetric but not Lie
    g = LieAlgebra.from_brackets(3, [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 2, 1)])
    report = validate(g)
    assert report["antisymmetry"].passed
    jac = report["jacobi"]
    assert not jac.passed
    assert jac.witness is not None and all(1 <= i <= 3 for i in jac.witness)


def test_subalgebra_check():
    # in sl2 (e1,e2,e3) the span of e1, e2 is not a subalgebra
    g = sl2((3, 1, 2))
    report = validate(g, Split(g, 1))
    assert not report["subalgebra"].passed


def test_split_projections():
    sp = Split(sl2(), 2)
    x = (Fraction(1), Fraction(2), Fraction(3))
    assert sp.proj_V(x) == (1, 2, 0)
    assert sp.proj_h(x) == (0, 0, 3)
    assert sp.embed((1, 2)) == (1, 2, 0)


def test_change_basis_keeps_jacobi():
    g = sl2()
    h = g.change_basis([(1, 1, 0), (0, 1, 0), (0, 0, 2)])
    assert validate(h).ok
    assert not h.is_abelian()


def test_linear_algebra():
    rows = [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]]
    inv = matrix_inverse(rows)
    prod = [[sum(rows[i][k] * inv[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert prod == [[1, 0], [0, 1]]
    assert rank([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], 2) == 1
    ns = nullspace([[Fraction(1), Fraction(2), Fraction(3)]], 3)
    assert len(ns) == 2
    assert all(sum(a * b for a, b in zip([1, 2, 3], v)) == 0 for v in ns)


def test_unit_vec():
    assert unit_vec(3, 1) == (0, 1, 0)
