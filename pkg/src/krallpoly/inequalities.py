"""Kernel inequalities for positive definite functionals and their classical special cases.

Every function returns a signed margin ``LHS - RHS``; sweeps keep the full
margin table so near-violations stay visible.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .classical import (
    JacobiFamily,
    LaguerreFamily,
    binom_real,
    gauss_jacobi_rule,
    gauss_laguerre_rule,
    jacobi_eval,
    jacobi_norm_squared,
    laguerre_eval,
)
from .moments import MomentFunctional, rule_from_1d
from .mop import build_basis

EQ_TOL = 1e-9

DEFAULT_JACOBI_PARAMS = (-0.5, 0.0, 1.0, 2.5)
DEFAULT_LAGUERRE_PARAMS = (-0.5, 0.0, 1.0, 2.5)


def general_margin(basis, n, x, c):
    """``P_n(x,x) + K_{n-1}(x,c)^2 / K_{n-1}(c,c) - K_n(x,c)^2 / K_n(c,c)``.

    ``basis`` is an orthonormal basis of a positive definite functional; ``x``
    may be a single point or an ``(m, d)`` batch.
    """
    if n < 1:
        raise ValueError("the inequality needs n >= 1")
    k_prev_cc = basis.kernel_K(n - 1, c, c)
    k_cc = basis.kernel_K(n, c, c)
    if k_prev_cc <= 0 or k_cc <= 0:
        raise ArithmeticError("nonpositive K(c, c): the basis is not orthonormal for a positive functional")
    return (
        basis.kernel_P(n, x, x)
        + basis.kernel_K(n - 1, x, c) ** 2 / k_prev_cc
        - basis.kernel_K(n, x, c) ** 2 / k_cc
    )


def jacobi_margin(alpha, beta, n, x):
    """Jacobi form of the inequality, anchored at ``x = 1``."""
    if n < 1:
        raise ValueError("the inequality needs n >= 1")
    fam = JacobiFamily(alpha, beta)
    up = JacobiFamily(alpha + 1, beta)
    s = 2 * n + alpha + beta + 1
    lhs = jacobi_eval(fam, n, x) ** 2 / binom_real(n + alpha, n) + (n + beta) / s * jacobi_eval(
        up, n - 1, x
    ) ** 2 / binom_real(n + alpha, n - 1)
    rhs = (n + alpha + beta + 1) / s * jacobi_eval(up, n, x) ** 2 / binom_real(n + alpha + 1, n)
    return lhs - rhs


def laguerre_margin(alpha, n, x):
    """Laguerre form of the inequality, anchored at ``x = 0``."""
    if n < 1:
        raise ValueError("the inequality needs n >= 1")
    if np.any(np.asarray(x) < 0):
        raise ValueError("Laguerre margin is defined for x >= 0")
    fam = LaguerreFamily(alpha)
    up = LaguerreFamily(alpha + 1)
    lhs = laguerre_eval(fam, n, x) ** 2 / binom_real(n + alpha, n) + laguerre_eval(
        up, n - 1, x
    ) ** 2 / binom_real(n + alpha, n - 1)
    rhs = laguerre_eval(up, n, x) ** 2 / binom_real(n + alpha + 1, n)
    return lhs - rhs


def _dirichlet_ratio(m, theta):
    # sin((m + 1/2) t) / sin(t / 2), with its limit 2m + 1 at t = 0
    theta = np.asarray(theta, dtype=float)
    half = np.sin(theta / 2)
    safe = np.where(half == 0, 1.0, half)
    return np.where(half == 0, 2 * m + 1.0, np.sin((m + 0.5) * theta) / safe)


def chebyshev_margin(n, theta):
    """Trigonometric form for ``alpha = beta = -1/2`` on ``0 <= theta <= pi``."""
    if n < 1:
        raise ValueError("the inequality needs n >= 1")
    out = (
        2 * np.cos(n * theta) ** 2
        + _dirichlet_ratio(n - 1, theta) ** 2 / (2 * n - 1)
        - _dirichlet_ratio(n, theta) ** 2 / (2 * n + 1)
    )
    return float(out) if np.ndim(out) == 0 else out


# -- sweeps ---------------------------------------------------------------------


@dataclass
class IneqMarginReport:
    family: str
    params: dict
    grid: np.ndarray
    n_values: list
    margins: np.ndarray  # shape (len(n_values), len(grid))
    eq_tol: float = EQ_TOL
    anchor: float | None = None
    points: np.ndarray | None = None
    min_margin: float = field(init=False)
    argmin: tuple = field(init=False)
    equality_points: list = field(init=False)

    def __post_init__(self):
        flat = int(np.argmin(self.margins))
        i, j = np.unravel_index(flat, self.margins.shape)
        self.min_margin = float(self.margins[i, j])
        self.argmin = (int(self.n_values[i]), float(self.grid[j]))
        hit = np.all(np.abs(self.margins) <= self.eq_tol, axis=0)
        self.equality_points = [float(g) for g in np.asarray(self.grid)[hit]]

    def holds(self, tol):
        return self.min_margin >= -tol

    def anchor_detected(self):
        return self.anchor is None or any(abs(p - self.anchor) <= 1e-12 for p in self.equality_points)

    def rows(self):
        p = list(self.params.values()) + [None, None]
        for i, n in enumerate(self.n_values):
            for x, m in zip(self.grid, self.margins[i]):
                yield (self.family, p[0], p[1], int(n), float(x), float(m))

    def summary(self):
        return {
            "family": self.family,
            "params": self.params,
            "min_margin": self.min_margin,
            "argmin": {"n": self.argmin[0], "x": self.argmin[1]},
            "equality_points": self.equality_points,
            "anchor": self.anchor,
            "anchor_detected": self.anchor_detected(),
        }


CSV_COLUMNS = ("family", "param1", "param2", "n", "x", "margin")


def reports_to_csv(reports):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in reports:
        for family, p1, p2, n, x, m in rep.rows():
            writer.writerow(
                [family, "" if p1 is None else repr(p1), "" if p2 is None else repr(p2), n, repr(x), repr(m)]
            )
    return buf.getvalue()


def jacobi_sweep(alpha, beta, nmax=20, grid_points=1001):
    x = np.linspace(-1.0, 1.0, grid_points)
    x[-1] = 1.0
    ns = list(range(1, nmax + 1))
    margins = np.array([jacobi_margin(alpha, beta, n, x) for n in ns])
    return IneqMarginReport("jacobi", {"alpha": alpha, "beta": beta}, x, ns, margins, anchor=1.0)


def laguerre_sweep(alpha, nmax=20, xmax=40.0, grid_points=1001):
    x = np.linspace(0.0, xmax, grid_points)
    ns = list(range(1, nmax + 1))
    margins = np.array([laguerre_margin(alpha, n, x) for n in ns])
    return IneqMarginReport("laguerre", {"alpha": alpha}, x, ns, margins, anchor=0.0)


def chebyshev_sweep(nmax=50, grid_points=2001):
    theta = np.linspace(0.0, np.pi, grid_points)
    ns = list(range(1, nmax + 1))
    margins = np.array([chebyshev_margin(n, theta) for n in ns])
    return IneqMarginReport("chebyshev", {}, theta, ns, margins, anchor=0.0)


def general_sweep(basis, c, X, nmax=None):
    """Margins of the general inequality at the rows of ``X`` (``c`` appended as the anchor)."""
    c = np.asarray(c, dtype=float)
    X = np.vstack([np.asarray(X, dtype=float), c[None, :]])
    nmax = basis.max_degree if nmax is None else nmax
    ns = list(range(1, nmax + 1))
    margins = np.array([general_margin(basis, n, X, c) for n in ns])
    grid = np.arange(X.shape[0], dtype=float)
    return IneqMarginReport(
        "general", {"c": c.tolist()}, grid, ns, margins, anchor=float(X.shape[0] - 1), points=X
    )


# -- one-variable bridge --------------------------------------------------------


def one_dim_basis(family, params, N, nodes=None):
    """Orthonormal basis for the unit-mass Jacobi or Laguerre weight."""
    m = nodes or N + 8
    if family in ("jacobi", "chebyshev"):
        rule = gauss_jacobi_rule(params[0], params[1], m)
    elif family == "laguerre":
        rule = gauss_laguerre_rule(params[0], m)
    else:
        raise ValueError(f"unknown family {family!r}")
    return build_basis(MomentFunctional(rule_from_1d(rule, normalize=True)), N)


def bridge_margins(family, params, n, x, basis=None):
    """General margin on the one-variable functional and the rescaled family margin.

    ``factor = P_n(anchor) / h_n`` (``h_n`` the unit-mass squared norm) relates
    the orthonormal and classical normalizations; it is positive, so the two
    margins share sign and zero set.  For ``chebyshev`` ``params`` is ignored,
    ``x`` is the angle and an extra ``binom(n - 1/2, n) / 2`` converts the
    trigonometric form into the Jacobi one.
    """
    x = np.asarray(x, dtype=float)
    if family == "chebyshev":
        params = (-0.5, -0.5)
    if basis is None:
        basis = one_dim_basis(family, params, n)
    if family in ("jacobi", "chebyshev"):
        a, b = params
        anchor = 1.0
        factor = binom_real(n + a, n) / jacobi_norm_squared(a, b, n, True)
    elif family == "laguerre":
        a = params[0]
        anchor = 0.0
        # unit-mass squared norm of L_n^(a) is binom(n + a, n) = L_n^(a)(0)
        factor = 1.0
    else:
        raise ValueError(f"unknown family {family!r}")

    if family == "chebyshev":
        pts = np.cos(x)
        family_val = binom_real(n - 0.5, n) / 2 * chebyshev_margin(n, x)
    elif family == "jacobi":
        pts = x
        family_val = jacobi_margin(a, b, n, x)
    else:
        pts = x
        family_val = laguerre_margin(a, n, x)
    general = general_margin(basis, n, np.atleast_1d(pts)[:, None], np.array([anchor]))
    return general, factor * np.atleast_1d(family_val)


def specialization_crosscheck(family, params, n, x, basis=None):
    """``|general margin - factor * family margin|``; see :func:`bridge_margins`."""
    general, scaled = bridge_margins(family, params, n, x, basis)
    diff = np.abs(general - scaled)
    return float(diff[0]) if np.ndim(x) == 0 else diff
