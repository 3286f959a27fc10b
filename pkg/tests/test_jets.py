import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from webtensor.fixtures import heisenberg, sl2
from webtensor.jets import (Dual, MultilinearMap, Ring, Series, bch4, bch4_inverse, bch4_vec, dual_parts,
                            loop_ring, polarize)
from webtensor.randomized import random_nilpotent_algebra, random_rational_vector

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)
vec3 = st.tuples(small, small, small)

RING3 = Ring(("s1", "s2", "s3"))


def scaled(var, vec):
    return Series.scaled(RING3, var, vec)


@given(vec3, vec3, vec3)
def test_bch_associative_to_order_4_on_sl2(u, v, w):
    g = sl2()
    a, b, c = scaled(0, u), scaled(1, v), scaled(2, w)
    assert bch4(bch4(a, b, g), c, g) == bch4(a, bch4(b, c, g), g)


@given(vec3)
def test_bch_unit_and_inverse(u):
    g = sl2()
    a = scaled(0, u)
    zero = Series.zero(RING3, 3)
    assert bch4(a, zero, g) == a
    assert bch4(zero, a, g) == a
    assert bch4(a, bch4_inverse(a), g).is_zero()
    assert bch4(bch4_inverse(a), a, g).is_zero()


@pytest.mark.parametrize("seed", range(5))
def test_bch_vec_associative_on_nilpotent(seed):
    rng = random.Random(seed)
    g = random_nilpotent_algebra(rng)
    x, y, z = (random_rational_vector(rng, g.dim) for _ in range(3))
    assert bch4_vec(bch4_vec(x, y, g), z, g) == bch4_vec(x, bch4_vec(y, z, g), g)
    assert bch4_vec(x, bch4_inverse(x), g) == (0,) * g.dim


def test_bch_heisenberg_is_exact():
    g = heisenberg()
    x, y = (Fraction(1), Fraction(2), Fraction(0)), (Fraction(3), Fraction(-1), Fraction(1, 2))
    # only the [x,y]/2 term survives
    assert bch4_vec(x, y, g) == (4, 1, Fraction(1, 2) + Fraction(1, 2) * (1 * -1 - 2 * 3))


def test_bch_degree_2_term():
    g = sl2()
    ring = Ring(("s", "r"))
    a, b = Series.scaled(ring, 0, g.basis(0)), Series.scaled(ring, 1, g.basis(1))
    prod = bch4(a, b, g)
    assert prod.terms[(1, 1)] == (0, 0, Fraction(1, 2))


def test_truncation_drops_degree_5():
    ring = Ring(("s",))
    x = Series.scaled(ring, 0, sl2().basis(0))
    assert ring.mul((3,), (2,)) is None
    assert ring.mul((3,), (1,)) == (4,)
    assert x.bracket(x, sl2()).is_zero()


def test_parameter_is_nilpotent():
    ring = loop_ring(1, parameter=True)
    t = ring.var(ring.parameter)
    assert ring.mul(t, t) is None


@given(small, small, small, small)
def test_dual_arithmetic(a, b, c, d):
    x, y = Dual(a, b), Dual(c, d)
    assert x * y == Dual(a * c, a * d + b * c)
    assert x + y == Dual(a + c, b + d)
    assert x - y == Dual(a - c, b - d)
    if c != 0:
        assert (x / c) * c == x


def test_dual_parts_split():
    arr = np.array([Dual(1, 2), Fraction(3), Dual(0, -1)], dtype=object)
    base, der = dual_parts(arr)
    assert list(base) == [1, 3, 0]
    assert list(der) == [2, 0, -1]


def test_polarize_quadratic():
    # q(x) = x1*x2 e1 polarizes to a symmetric bilinear map with q(e1,e2) = 1/2 e1
    ring = Ring(("x1", "x2"))
    comp = Series(ring, 1, {(1, 1): (Fraction(1),)})
    q = polarize(comp, [[0, 1]], [2])
    assert q.data[0, 1, 0] == Fraction(1, 2) == q.data[1, 0, 0]
    assert q.data[0, 0, 0] == 0
    assert list(q((1, 1), (1, 1))) == [Fraction(1)]


@given(st.tuples(small, small), st.tuples(small, small))
def test_polarize_reproduces_series(x, y):
    ring = loop_ring(2)
    comp = Series(ring, 1, {(2, 0, 1, 0): (Fraction(3),), (1, 1, 0, 1): (Fraction(-2),)})
    m = polarize(comp, [[0, 1], [2, 3]], [2, 1])
    assert list(m(x, x, y)) == list(comp.evaluate(list(x) + list(y)))


def test_multilinear_symmetrizes():
    data = np.array([[[Fraction(1)], [Fraction(0)]], [[Fraction(2)], [Fraction(0)]]], dtype=object)
    m = MultilinearMap(data, [(0, 1)])
    assert m.data[0, 1, 0] == m.data[1, 0, 0] == Fraction(1)
