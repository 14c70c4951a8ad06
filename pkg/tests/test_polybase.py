from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from krallpoly.polybase import (
    MultiPoly,
    graded_lex_exponents,
    graded_lex_index,
    graded_lex_position,
    monomial_count,
    monomial_matrix,
    poly_axpy,
    poly_eval,
    poly_from_univariate,
    poly_mul,
    squared_norm_poly,
)


@pytest.mark.parametrize(
    "n, d, homogeneous, expected",
    [(0, 3, True, 1), (2, 2, True, 3), (3, 2, False, 10), (4, 3, False, 35), (-1, 2, False, 0)],
)
def test_monomial_count(n, d, homogeneous, expected):
    assert monomial_count(n, d, homogeneous) == expected


@pytest.mark.parametrize("alpha, pos", [((0, 0), 0), ((1, 0), 1), ((0, 1), 2), ((0, 2), 5), ((3, 0), 6)])
def test_graded_lex_position(alpha, pos):
    assert graded_lex_position(alpha) == pos
    assert tuple(graded_lex_index(pos, 2)) == alpha


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_exponent_table_is_graded_and_bijective(d):
    E = graded_lex_exponents(5, d)
    assert E.shape == (comb(5 + d, d), d)
    deg = E.sum(axis=1)
    assert np.all(np.diff(deg) >= 0)
    for pos, alpha in enumerate(E):
        assert graded_lex_position(alpha) == pos
    assert len({tuple(a) for a in E}) == E.shape[0]


@given(st.lists(st.integers(0, 4), min_size=1, max_size=4), st.lists(st.integers(0, 4), min_size=1, max_size=4))
def test_position_preserves_graded_lex_order(a, b):
    if len(a) != len(b):
        b = (b * 4)[: len(a)]
    key = lambda v: (sum(v), [-x for x in v])
    pa, pb = graded_lex_position(a), graded_lex_position(b)
    assert (pa < pb) == (key(a) < key(b))


def test_eval_examples():
    x1, x2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    assert poly_eval(MultiPoly.constant(2, 1.0), [0.3, -7]) == 1.0
    assert poly_eval(x1 * x2, [2, 3]) == 6.0
    assert poly_eval(x1 * x1 - x2, [3, 4]) == 5.0


def test_eval_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        poly_eval(MultiPoly.variable(0, 2), [1.0, 2.0, 3.0])


def test_coeff_length_checked():
    with pytest.raises(ValueError):
        MultiPoly(2, 2, np.zeros(5))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_unit_coefficient_is_monomial(d, rng):
    x = rng.uniform(-1, 1, size=(7, d))
    E = graded_lex_exponents(3, d)
    for alpha in E:
        p = MultiPoly.monomial(alpha)
        np.testing.assert_allclose(p(x), np.prod(x**alpha, axis=1), rtol=1e-14)


def test_axpy_examples(rng):
    p = MultiPoly(2, 2, rng.standard_normal(6))
    q = MultiPoly(2, 3, rng.standard_normal(10))
    np.testing.assert_array_equal(poly_axpy(0.0, p, q).coeffs, q.coeffs)
    np.testing.assert_array_equal(poly_axpy(1.0, q, q).coeffs, 2 * q.coeffs)
    assert not np.any(poly_axpy(-1.0, q, q).coeffs)
    assert poly_axpy(2.0, p, q).degree == 3


def test_axpy_dimension_mismatch():
    with pytest.raises(ValueError):
        poly_axpy(1.0, MultiPoly.constant(2, 1.0), MultiPoly.constant(3, 1.0))


coeffs = st.lists(st.floats(-3, 3, allow_nan=False), min_size=6, max_size=6)


@settings(max_examples=50, deadline=None)
@given(coeffs, coeffs, st.tuples(st.floats(-1, 1), st.floats(-1, 1)))
def test_product_evaluates_pointwise(a, b, x):
    p, q = MultiPoly(2, 2, np.array(a)), MultiPoly(2, 2, np.array(b))
    pq = poly_mul(p, q)
    assert pq.degree == 4
    assert pq(np.array(x)) == pytest.approx(p(np.array(x)) * q(np.array(x)), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(coeffs, st.floats(-2, 2), st.tuples(st.floats(-1, 1), st.floats(-1, 1)))
def test_axpy_is_linear(a, s, x):
    p = MultiPoly(2, 2, np.array(a))
    q = MultiPoly.variable(1, 2)
    x = np.array(x)
    assert poly_axpy(s, p, q)(x) == pytest.approx(s * p(x) + q(x), abs=1e-12)


def test_effective_degree_and_raise():
    p = MultiPoly.variable(0, 2).raise_degree(4)
    assert p.degree == 4
    assert p.effective_degree() == 1
    assert MultiPoly.zero(2, 3).effective_degree() == -1


def test_univariate_composition_and_norm(rng):
    X = rng.uniform(-1, 1, size=(9, 3))
    r2 = squared_norm_poly(3)
    np.testing.assert_allclose(r2(X), np.sum(X * X, axis=1), rtol=1e-14)
    p = poly_from_univariate([1.0, -2.0, 0.5], r2)
    t = np.sum(X * X, axis=1)
    np.testing.assert_allclose(p(X), 1 - 2 * t + 0.5 * t * t, rtol=1e-13)


def test_monomial_matrix_shape(rng):
    X = rng.standard_normal((5, 2))
    M = monomial_matrix(X, 3)
    assert M.shape == (5, 10)
    np.testing.assert_allclose(M[:, 0], 1.0)
    np.testing.assert_allclose(M[:, 5], X[:, 1] ** 2)
