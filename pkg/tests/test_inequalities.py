import inspect

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from krallpoly.checks import sample_ball
from krallpoly.classical import JacobiFamily, jacobi_orthonormal_eval
from krallpoly.inequalities import (
    CSV_COLUMNS,
    DEFAULT_JACOBI_PARAMS,
    bridge_margins,
    chebyshev_margin,
    chebyshev_sweep,
    general_margin,
    general_sweep,
    jacobi_margin,
    jacobi_sweep,
    laguerre_margin,
    laguerre_sweep,
    one_dim_basis,
    reports_to_csv,
    specialization_crosscheck,
)

PARAMS = DEFAULT_JACOBI_PARAMS


def scipy_jacobi_margin(a, b, n, x):
    """Same inequality assembled from scipy evaluations."""
    s = 2 * n + a + b + 1
    lhs = special.eval_jacobi(n, a, b, x) ** 2 / special.binom(n + a, n) + (n + b) / s * special.eval_jacobi(
        n - 1, a + 1, b, x
    ) ** 2 / special.binom(n + a, n - 1)
    return lhs - (n + a + b + 1) / s * special.eval_jacobi(n, a + 1, b, x) ** 2 / special.binom(n + a + 1, n)


def scipy_laguerre_margin(a, n, x):
    L = special.eval_genlaguerre
    return (
        L(n, a, x) ** 2 / special.binom(n + a, n)
        + L(n - 1, a + 1, x) ** 2 / special.binom(n + a, n - 1)
        - L(n, a + 1, x) ** 2 / special.binom(n + a + 1, n)
    )


def test_general_margin_takes_no_mass():
    assert list(inspect.signature(general_margin).parameters) == ["basis", "n", "x", "c"]


def test_general_margin_on_disk(disk_basis, rng):
    z = np.zeros(2)
    X = sample_ball(rng, 200, 2)
    for n in range(1, 9):
        if n % 2:
            assert general_margin(disk_basis, n, z, z) == pytest.approx(0.0, abs=1e-12)
        assert np.min(general_margin(disk_basis, n, X, z)) >= -1e-10
        c = np.array([0.3, -0.2])
        assert np.min(general_margin(disk_basis, n, X, c)) >= -1e-10
        assert general_margin(disk_basis, n, c, c) == pytest.approx(0.0, abs=1e-9)


def test_general_margin_rejects_degree_zero(disk_basis):
    with pytest.raises(ValueError):
        general_margin(disk_basis, 0, np.zeros(2), np.zeros(2))


@pytest.mark.parametrize("a", PARAMS)
@pytest.mark.parametrize("b", PARAMS)
def test_jacobi_equality_at_one(a, b):
    for n in range(1, 11):
        assert jacobi_margin(a, b, n, 1.0) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("a", PARAMS)
@pytest.mark.parametrize("b", PARAMS)
def test_jacobi_margin_matches_scipy(a, b):
    x = np.linspace(-1, 0.999, 57)
    for n in (1, 4, 9):
        np.testing.assert_allclose(jacobi_margin(a, b, n, x), scipy_jacobi_margin(a, b, n, x), atol=1e-9)


def test_jacobi_margin_legendre_point():
    m = jacobi_margin(0.0, 0.0, 1, 0.0)
    assert m == pytest.approx(scipy_jacobi_margin(0.0, 0.0, 1, 0.0), abs=1e-15)
    assert m >= 0


@pytest.mark.parametrize("a", PARAMS)
def test_laguerre_equality_at_zero_and_oracle(a):
    for n in range(1, 11):
        assert laguerre_margin(a, n, 0.0) == pytest.approx(0.0, abs=1e-12 * special.binom(n + a + 1, n))
    x = np.linspace(0, 20, 41)
    for n in (1, 5):
        np.testing.assert_allclose(laguerre_margin(a, n, x), scipy_laguerre_margin(a, n, x), rtol=1e-9, atol=1e-9)


def test_laguerre_point_and_domain():
    m = laguerre_margin(0.0, 1, 2.0)
    # L_1(2) = -1, L_0^(1)(2) = 1, L_1^(1)(2) = 0
    assert m == pytest.approx(1.0 + 1.0 - 0.0, abs=1e-14)
    with pytest.raises(ValueError):
        laguerre_margin(0.0, 1, -1.0)


def test_chebyshev_examples():
    for n in (1, 7, 50):
        assert chebyshev_margin(n, 0.0) == 0.0
    assert chebyshev_margin(1, np.pi / 2) == pytest.approx(2 / 3, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 50), st.floats(0, np.pi))
def test_chebyshev_nonnegative(n, theta):
    assert chebyshev_margin(n, theta) >= -1e-12


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PARAMS), st.sampled_from(PARAMS), st.integers(1, 20), st.floats(-1, 1))
def test_jacobi_nonnegative(a, b, n, x):
    assert jacobi_margin(a, b, n, x) >= -1e-10


def test_jacobi_bridge_signs():
    general, scaled = bridge_margins("jacobi", (0.0, 0.0), 3, 0.3)
    assert np.sign(general[0]) == np.sign(scaled[0])
    assert specialization_crosscheck("jacobi", (0.0, 0.0), 3, 1.0) <= 1e-12
    general, scaled = bridge_margins("jacobi", (0.0, 0.0), 3, 1.0)
    assert abs(general[0]) <= 1e-12 and abs(scaled[0]) <= 1e-12


def test_chebyshev_bridge_signs():
    theta = np.linspace(0, np.pi, 101)
    general, scaled = bridge_margins("chebyshev", None, 4, theta)
    ok = (np.sign(np.round(general, 10)) == np.sign(np.round(scaled, 10)))
    assert ok.all()
    assert np.max(np.abs(general - scaled)) <= 1e-8


@pytest.mark.parametrize("family, params", [("jacobi", (1.0, 2.5)), ("jacobi", (-0.5, 0.0)), ("laguerre", (0.0,)), ("laguerre", (2.5,))])
def test_bridge_agreement(family, params):
    x = np.linspace(-1, 1, 31) if family == "jacobi" else np.linspace(0, 8, 31)
    basis = one_dim_basis(family, params, 6)
    for n in range(1, 7):
        assert np.max(specialization_crosscheck(family, params, n, x, basis)) <= 1e-8


def test_one_variable_kernel_is_square():
    basis = one_dim_basis("jacobi", (1.0, 0.5), 8)
    x = np.linspace(-1, 1, 21)
    for n in range(9):
        p = jacobi_orthonormal_eval(JacobiFamily(1.0, 0.5), True, n, x)
        np.testing.assert_allclose(basis.kernel_P(n, x[:, None], x[:, None]), p**2, atol=1e-10)


def test_sweep_reports():
    rep = jacobi_sweep(0.0, 0.0, nmax=5, grid_points=101)
    assert rep.holds(1e-10) and rep.anchor_detected()
    assert 1.0 in rep.equality_points
    assert rep.summary()["argmin"]["n"] in range(1, 6)
    rep = laguerre_sweep(0.5, nmax=5, xmax=10, grid_points=51)
    assert rep.anchor_detected() and rep.equality_points[0] == 0.0
    rep = chebyshev_sweep(nmax=10, grid_points=201)
    assert rep.min_margin >= -1e-12 and rep.anchor_detected()


def test_general_sweep_anchor(disk_basis, rng):
    c = np.array([0.3, -0.2])
    rep = general_sweep(disk_basis, c, sample_ball(rng, 50, 2), 8)
    assert rep.anchor_detected()
    np.testing.assert_array_equal(rep.points[-1], c)
    assert rep.holds(1e-10)


def test_csv_layout():
    text = reports_to_csv([jacobi_sweep(0.0, 1.0, nmax=2, grid_points=3)])
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 2 * 3
    assert lines[1].startswith("jacobi,0.0,1.0,1,-1.0,")
