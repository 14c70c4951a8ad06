"""Classical one-variable orthogonal polynomials and Gauss rules.

Evaluation uses ascending three-term recurrences.  Endpoint values that the
inequality module divides by (``x = 1`` for Jacobi, ``x = 0`` for Laguerre)
short-circuit to their binomial closed forms.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import exp

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln


@dataclass(frozen=True)
class JacobiFamily:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(f"Jacobi parameters must exceed -1, got ({self.alpha}, {self.beta})")


@dataclass(frozen=True)
class LaguerreFamily:
    alpha: float

    def __post_init__(self):
        if not self.alpha > -1:
            raise ValueError(f"Laguerre parameter must exceed -1, got {self.alpha}")


@dataclass(frozen=True, eq=False)
class QuadRule1D:
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def integrate(self, f):
        return float(np.dot(self.weights, f(self.nodes)))

    @property
    def mass(self):
        return float(self.weights.sum())


def binom_real(top, k):
    """``binom(top, k)`` for real ``top > -1`` and integer ``k >= 0``."""
    if k < 0:
        return 0.0
    out = 1.0
    for i in range(1, k + 1):
        out *= (top - k + i) / i
    return out


def pochhammer(a, k):
    """Shifted factorial ``(a)_k = a (a+1) ... (a+k-1)`` with sign tracking."""
    if k == 0:
        return 1.0
    vals = a + np.arange(k)
    if np.any(vals == 0):
        return 0.0
    sign = -1.0 if np.count_nonzero(vals < 0) % 2 else 1.0
    return sign * float(np.exp(np.sum(np.log(np.abs(vals)))))


def _jacobi_recurrence(a, b, n, x):
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev
    p = (a + 1) + (a + b + 2) * (x - 1) / 2
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c3 = 2 * (k + a - 1) * (k + b - 1) * s
        p_prev, p = p, (c2 * p - c3 * p_prev) / c1
    return p


def jacobi_eval(fam, n, x):
    """Jacobi polynomial ``P_n^{(alpha, beta)}(x)`` in the classical normalization."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    a, b = fam.alpha, fam.beta
    xa = np.asarray(x, dtype=float)
    out = _jacobi_recurrence(a, b, n, xa)
    out = np.where(xa == 1.0, binom_real(n + a, n), out)
    out = np.where(xa == -1.0, (-1) ** n * binom_real(n + b, n), out)
    return float(out) if out.ndim == 0 else out


def _laguerre_recurrence(a, n, x):
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev
    p = 1 + a - x
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1 + a - x) * p - (k - 1 + a) * p_prev) / k
    return p


def laguerre_eval(fam, n, x):
    """Generalized Laguerre polynomial ``L_n^{(alpha)}(x)``."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    xa = np.asarray(x, dtype=float)
    out = _laguerre_recurrence(fam.alpha, n, xa)
    out = np.where(xa == 0.0, binom_real(n + fam.alpha, n), out)
    return float(out) if out.ndim == 0 else out


def gegenbauer_eval(lam, n, x):
    """Gegenbauer ``C_n^{lam}`` as a rescaled Jacobi polynomial with ``alpha = beta = lam - 1/2``."""
    if lam <= -0.5 or lam == 0:
        raise ValueError("Gegenbauer parameter must be > -1/2 and nonzero")
    a = lam - 0.5
    # C_n^lam = (2 lam)_n / (lam + 1/2)_n * P_n^{(a, a)}
    scale = pochhammer(2 * lam, n) / pochhammer(lam + 0.5, n)
    return scale * jacobi_eval(JacobiFamily(a, a), n, x)


def chebyshev_eval(n, x):
    """Chebyshev ``T_n`` through ``P_n^{(-1/2,-1/2)}(x) / P_n^{(-1/2,-1/2)}(1)``."""
    fam = JacobiFamily(-0.5, -0.5)
    return jacobi_eval(fam, n, x) / binom_real(n - 0.5, n)


# -- Gauss rules -------------------------------------------------------------


def jacobi_recurrence_coefficients(a, b, m):
    """Monic recurrence ``(diag, offdiag^2, mass)`` for the weight ``(1-x)^a (1+x)^b`` on [-1, 1]."""
    n = np.arange(m, dtype=float)
    s = 2 * n + a + b
    diag = np.empty(m)
    with np.errstate(divide="ignore", invalid="ignore"):
        diag[:] = (b * b - a * a) / (s * (s + 2))
    diag[0] = (b - a) / (a + b + 2)
    off2 = np.empty(max(m - 1, 0))
    for i, k in enumerate(range(1, m)):
        if k == 1:
            off2[i] = 4 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b))
        else:
            sk = 2 * k + a + b
            off2[i] = 4 * k * (k + a) * (k + b) * (k + a + b) / (sk * sk * (sk + 1) * (sk - 1))
    mass = exp((a + b + 1) * np.log(2.0) + gammaln(a + 1) + gammaln(b + 1) - gammaln(a + b + 2))
    return diag, off2, mass


def laguerre_recurrence_coefficients(a, m):
    n = np.arange(m, dtype=float)
    diag = 2 * n + a + 1
    off2 = n[1:] * (n[1:] + a)
    return diag, off2, exp(gammaln(a + 1))


def _gauss_from_recurrence(diag, off2, mass, refine_steps=3):
    m = diag.shape[0]
    if m == 1:
        return np.array([diag[0]]), np.array([mass])
    nodes = eigh_tridiagonal(diag, np.sqrt(off2), eigvals_only=True)
    # Newton on the monic degree-m polynomial; values of lower orthonormal
    # polynomials then give the Christoffel weights.
    for _ in range(refine_steps):
        p_prev2 = np.zeros_like(nodes)
        p_prev = np.ones_like(nodes)
        d_prev2 = np.zeros_like(nodes)
        d_prev = np.zeros_like(nodes)
        for k in range(m):
            b = off2[k - 1] if k >= 1 else 0.0
            p = (nodes - diag[k]) * p_prev - b * p_prev2
            dp = p_prev + (nodes - diag[k]) * d_prev - b * d_prev2
            p_prev2, p_prev = p_prev, p
            d_prev2, d_prev = d_prev, dp
        step = p_prev / d_prev
        nodes = nodes - step
        if np.max(np.abs(step)) <= 1e-15 * max(1.0, np.max(np.abs(nodes))):
            break
    off = np.sqrt(off2)
    q_prev = np.zeros_like(nodes)
    q = np.ones_like(nodes)
    christoffel = q * q
    for k in range(m - 1):
        b = off[k - 1] if k >= 1 else 0.0
        q_next = ((nodes - diag[k]) * q - b * q_prev) / off[k]
        q_prev, q = q, q_next
        christoffel = christoffel + q * q
    weights = mass / christoffel
    order = np.argsort(nodes)
    return nodes[order], weights[order]


@lru_cache(maxsize=256)
def _gauss_jacobi_cached(alpha, beta, m):
    diag, off2, mass = jacobi_recurrence_coefficients(alpha, beta, m)
    nodes, weights = _gauss_from_recurrence(diag, off2, mass)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_jacobi_rule(alpha, beta, m):
    """``m``-point Gauss rule for ``(1-x)^alpha (1+x)^beta`` on [-1, 1]."""
    if m < 1:
        raise ValueError("number of nodes must be >= 1")
    JacobiFamily(alpha, beta)
    nodes, weights = _gauss_jacobi_cached(float(alpha), float(beta), int(m))
    return QuadRule1D(nodes, weights, 2 * m - 1)


def gauss_laguerre_rule(alpha, m):
    """``m``-point Gauss rule for ``x^alpha e^{-x}`` on ``[0, inf)``."""
    if m < 1:
        raise ValueError("number of nodes must be >= 1")
    LaguerreFamily(alpha)
    diag, off2, mass = laguerre_recurrence_coefficients(float(alpha), int(m))
    nodes, weights = _gauss_from_recurrence(diag, off2, mass)
    return QuadRule1D(nodes, weights, 2 * m - 1)


@lru_cache(maxsize=1024)
def jacobi_norm_squared(alpha, beta, n, unit_mass=False):
    """``int P_n^2 w`` by an ``(n + 1)``-point Gauss rule; divided by the weight mass if requested."""
    rule = gauss_jacobi_rule(alpha, beta, n + 1)
    val = float(np.dot(rule.weights, _jacobi_recurrence(alpha, beta, n, rule.nodes) ** 2))
    if unit_mass:
        val /= rule.mass
    return val


def jacobi_orthonormal_eval(fam, unit_mass, n, x):
    """Orthonormal Jacobi polynomial (positive leading coefficient) at ``x``.

    With ``unit_mass`` the weight is first divided by its total mass, so the
    degree-zero member is identically 1.
    """
    norm2 = jacobi_norm_squared(fam.alpha, fam.beta, n, bool(unit_mass))
    return jacobi_eval(fam, n, x) / np.sqrt(norm2)


def jacobi_coefficients(fam, n):
    """Ascending monomial coefficients of ``P_n^{(alpha, beta)}``."""
    a, b = fam.alpha, fam.beta
    P = np.polynomial.Polynomial
    x = P([0.0, 1.0])
    p_prev = P([1.0])
    if n == 0:
        return p_prev.coef.copy()
    p = (a + 1) + (a + b + 2) * (x - 1) / 2
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c3 = 2 * (k + a - 1) * (k + b - 1) * s
        p_prev, p = p, ((s - 1) * (s * (s - 2) * x + a * a - b * b) * p - c3 * p_prev) / c1
    return np.pad(p.coef, (0, n + 1 - p.coef.shape[0]))
