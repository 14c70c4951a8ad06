import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import beta, gammaln

from krallpoly.classical import gauss_jacobi_rule
from krallpoly.moments import (
    CubatureRule,
    ExactnessError,
    MomentFunctional,
    ball_rule,
    rule_from_1d,
    sphere_rule,
)
from krallpoly.polybase import MultiPoly, graded_lex_exponents, monomial_matrix


def ball_moment(alpha, mu):
    """Normalized moment of x^alpha under (1-|x|^2)^(mu-1/2) on the unit ball (polar/Beta oracle)."""
    alpha = np.asarray(alpha)
    if np.any(alpha % 2):
        return 0.0
    d = alpha.size
    k = alpha.sum()

    def sphere(a):
        return np.exp(np.log(2.0) + np.sum(gammaln((a + 1) / 2)) - gammaln((a.sum() + d) / 2))

    radial = beta((k + d) / 2, mu + 0.5) / beta(d / 2, mu + 0.5)
    return radial * sphere(alpha) / sphere(np.zeros(d))


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0, 2.5])
def test_ball_rule_moments(d, mu):
    rule = ball_rule(d, mu, 16)
    assert rule.exact_degree >= 16
    E = graded_lex_exponents(16, d)
    got = rule.integrate(monomial_matrix(rule.nodes, 16))
    expected = np.array([ball_moment(a, mu) for a in E])
    np.testing.assert_allclose(got, expected, rtol=1e-10, atol=1e-14)


def test_disk_examples():
    u = MomentFunctional(ball_rule(2, 0.5, 8))
    x1, x2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    assert u.apply(MultiPoly.constant(2, 1.0)) == pytest.approx(1.0, abs=1e-15)
    assert u.apply(x1 * x1) == pytest.approx(0.25, abs=1e-14)
    assert u.apply(x1 * x1 + x2 * x2) == pytest.approx(0.5, abs=1e-14)
    assert u.inner(x1, x2) == pytest.approx(0.0, abs=1e-15)


def test_exactness_guard():
    u = MomentFunctional(ball_rule(2, 0.5, 4))
    p = MultiPoly.monomial((u.exact_degree + 1, 0))
    with pytest.raises(ExactnessError):
        u.apply(p)


def test_mass_validation():
    rule = ball_rule(2, 0.5, 4)
    with pytest.raises(ValueError):
        MomentFunctional(rule, (0.0, [0, 0]))
    with pytest.raises(ValueError):
        MomentFunctional(rule, (1.0, [0, 0, 0]))


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-5, 5).filter(lambda v: abs(v) > 1e-6),
    st.tuples(st.floats(-2, 2), st.floats(-2, 2)),
    st.lists(st.floats(-1, 1), min_size=6, max_size=6),
    st.lists(st.floats(-1, 1), min_size=6, max_size=6),
)
def test_point_mass_adds_exactly(lam, c, a, b):
    u = MomentFunctional(ball_rule(2, 1.0, 6))
    v = u.perturbed(lam, c)
    p, q = MultiPoly(2, 2, np.array(a)), MultiPoly(2, 2, np.array(b))
    c = np.array(c)
    assert v.inner(p, q) - u.inner(p, q) == pytest.approx(lam * p(c) * q(c), abs=1e-14 * (1 + abs(lam * p(c) * q(c))))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=10, max_size=10), st.lists(st.floats(-2, 2), min_size=10, max_size=10), st.floats(-3, 3))
def test_linearity_and_symmetry(a, b, s):
    u = MomentFunctional(ball_rule(2, 0.5, 8))
    p, q = MultiPoly(2, 3, np.array(a)), MultiPoly(2, 3, np.array(b))
    assert u.apply(p * s + q) == pytest.approx(s * u.apply(p) + u.apply(q), abs=1e-12)
    assert u.inner(p, q) == pytest.approx(u.inner(q, p), abs=1e-13)


@pytest.mark.parametrize("d", [2, 3])
def test_positive_definite_monomial_gram(d):
    rule = ball_rule(d, 0.5, 12)
    u = MomentFunctional(rule)
    A = monomial_matrix(rule.nodes, 6)
    assert np.linalg.eigvalsh(u.gram(A)).min() > 0


def test_gram_with_mass_requires_point_values():
    rule = ball_rule(2, 0.5, 4)
    v = MomentFunctional(rule, (2.0, [0.1, 0.2]))
    A = monomial_matrix(rule.nodes, 1)
    with pytest.raises(ValueError):
        v.gram(A)
    Ac = monomial_matrix(np.array([[0.1, 0.2]]), 1)[0]
    G = v.gram(A, A_c=Ac)
    np.testing.assert_allclose(G - MomentFunctional(rule).gram(A), 2.0 * np.outer(Ac, Ac), atol=1e-15)


@pytest.mark.parametrize("d", [2, 3])
def test_sphere_rule_integrates_harmonic_moments(d):
    dirs, w, exact = sphere_rule(d, 10)
    np.testing.assert_allclose(np.sum(dirs * dirs, axis=1), 1.0, atol=1e-15)
    assert w.sum() == pytest.approx(1.0)
    assert exact >= 10
    assert np.sum(w * dirs[:, 0] ** 4) == pytest.approx(3 / 8 if d == 2 else 1 / 5, abs=1e-14)


def test_unsupported_dimension():
    with pytest.raises(NotImplementedError):
        ball_rule(4, 0.5, 4)


def test_rule_json_roundtrip():
    rule = ball_rule(3, 1.0, 6)
    back = CubatureRule.from_json(rule.to_json())
    assert back.dim == 3 and back.mu == 1.0 and back.exact_degree == rule.exact_degree
    np.testing.assert_array_equal(back.nodes, rule.nodes)
    np.testing.assert_array_equal(back.weights, rule.weights)


def test_rule_validation():
    with pytest.raises(ValueError):
        CubatureRule(1, [[0.0]], [-1.0], 1)
    with pytest.raises(ValueError):
        CubatureRule(1, [[0.0], [1.0]], [1.0], 1)


def test_rule_from_1d_normalized():
    rule = rule_from_1d(gauss_jacobi_rule(1.0, 0.0, 5), normalize=True)
    assert rule.dim == 1 and rule.weights.sum() == pytest.approx(1.0)
