"""Dense multivariate polynomials over a graded-lexicographic monomial layout.

A polynomial of total degree ``<= n`` in ``d`` variables is stored as a dense
coefficient vector of length ``binom(n + d, n)``.  Position ``i`` of that
vector belongs to the ``i``-th multi-index in graded-lex order: first by total
degree, ties broken lexicographically with the *first* exponent largest, so
for ``d = 2`` the order is ``(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np


def monomial_count(n, d, homogeneous=False):
    """Number of monomials of degree exactly ``n`` (or at most ``n``) in ``d`` variables."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if n < 0:
        return 0
    if homogeneous:
        return comb(n + d - 1, n)
    return comb(n + d, n)


def _homogeneous_exponents(n, d):
    if d == 1:
        return [(n,)]
    out = []
    for first in range(n, -1, -1):
        for rest in _homogeneous_exponents(n - first, d - 1):
            out.append((first,) + rest)
    return out


@lru_cache(maxsize=None)
def graded_lex_exponents(n, d):
    """All multi-indices with ``|alpha| <= n`` as an ``(M, d)`` int array in graded-lex order."""
    rows = []
    for k in range(n + 1):
        rows.extend(_homogeneous_exponents(k, d))
    arr = np.array(rows, dtype=np.int64).reshape(-1, d)
    arr.setflags(write=False)
    return arr


def graded_lex_position(alpha):
    """Position of the multi-index ``alpha`` in the graded-lex enumeration."""
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError(f"exponents must be nonnegative, got {alpha}")
    d = len(alpha)
    total = sum(alpha)
    pos = monomial_count(total - 1, d)
    # rank inside the degree block: count homogeneous indices that precede alpha
    remaining = total
    for i, a in enumerate(alpha[:-1]):
        vars_left = d - i - 1
        for bigger in range(remaining, a, -1):
            pos += monomial_count(remaining - bigger, vars_left, homogeneous=True)
        remaining -= a
    return pos


def graded_lex_index(pos, d):
    """Inverse of :func:`graded_lex_position`."""
    if pos < 0:
        raise ValueError("position must be nonnegative")
    n = 0
    while monomial_count(n, d) <= pos:
        n += 1
    return tuple(int(v) for v in graded_lex_exponents(n, d)[pos])


def degree_of_position(pos, d):
    n = 0
    while monomial_count(n, d) <= pos:
        n += 1
    return n


def monomial_matrix(X, degree):
    """Evaluate every monomial of total degree ``<= degree`` at the rows of ``X``.

    Returns an array of shape ``(len(X), binom(degree + d, d))`` whose columns
    follow graded-lex order.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    m, d = X.shape
    exps = graded_lex_exponents(degree, d)
    powers = np.ones((d, degree + 1, m))
    for k in range(1, degree + 1):
        powers[:, k, :] = powers[:, k - 1, :] * X.T
    V = np.ones((m, exps.shape[0]))
    for i in range(d):
        V *= powers[i, exps[:, i], :].T
    return V


@dataclass(frozen=True, eq=False)
class MultiPoly:
    """A real polynomial in ``dim`` variables of total degree at most ``degree``."""

    dim: int
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).ravel()
        expected = monomial_count(self.degree, self.dim)
        if coeffs.shape[0] != expected:
            raise ValueError(
                f"expected {expected} coefficients for degree {self.degree} "
                f"in {self.dim} variables, got {coeffs.shape[0]}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, dim, degree=0):
        return cls(dim, degree, np.zeros(monomial_count(degree, dim)))

    @classmethod
    def constant(cls, dim, value):
        return cls(dim, 0, [float(value)])

    @classmethod
    def monomial(cls, alpha, scale=1.0):
        alpha = tuple(alpha)
        deg = sum(alpha)
        c = np.zeros(monomial_count(deg, len(alpha)))
        c[graded_lex_position(alpha)] = scale
        return cls(len(alpha), deg, c)

    @classmethod
    def variable(cls, i, dim):
        alpha = [0] * dim
        alpha[i] = 1
        return cls.monomial(alpha)

    def __call__(self, x):
        return poly_eval(self, x)

    def raise_degree(self, degree):
        if degree < self.degree:
            raise ValueError("cannot lower the storage degree")
        c = np.zeros(monomial_count(degree, self.dim))
        c[: self.coeffs.shape[0]] = self.coeffs
        return MultiPoly(self.dim, degree, c)

    def effective_degree(self, tol=0.0):
        """Largest total degree carrying a coefficient above ``tol`` in magnitude (-1 for zero)."""
        nz = np.nonzero(np.abs(self.coeffs) > tol)[0]
        if nz.size == 0:
            return -1
        return degree_of_position(int(nz[-1]), self.dim)

    def __add__(self, other):
        if isinstance(other, MultiPoly):
            return poly_axpy(1.0, other, self)
        return poly_axpy(float(other), MultiPoly.constant(self.dim, 1.0), self)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, MultiPoly):
            return poly_axpy(-1.0, other, self)
        return self + (-float(other))

    def __neg__(self):
        return MultiPoly(self.dim, self.degree, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            return poly_mul(self, other)
        return MultiPoly(self.dim, self.degree, float(other) * self.coeffs)

    __rmul__ = __mul__

    def __repr__(self):
        return f"MultiPoly(dim={self.dim}, degree={self.degree}, coeffs={self.coeffs!r})"


def _check_same_dim(p, q):
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")


def poly_eval(p, x):
    """Evaluate ``p`` at a point (shape ``(d,)``) or at the rows of an ``(m, d)`` array."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    if X.shape[1] != p.dim:
        raise ValueError(f"point has {X.shape[1]} coordinates, polynomial has {p.dim} variables")
    vals = monomial_matrix(X, p.degree) @ p.coeffs
    return float(vals[0]) if single else vals


def poly_axpy(a, p, q):
    """Return ``a * p + q``."""
    _check_same_dim(p, q)
    deg = max(p.degree, q.degree)
    c = np.zeros(monomial_count(deg, p.dim))
    c[: p.coeffs.shape[0]] += a * p.coeffs
    c[: q.coeffs.shape[0]] += q.coeffs
    return MultiPoly(p.dim, deg, c)


@lru_cache(maxsize=64)
def _product_table(deg_p, deg_q, d):
    ep = graded_lex_exponents(deg_p, d)
    eq = graded_lex_exponents(deg_q, d)
    sums = ep[:, None, :] + eq[None, :, :]
    flat = sums.reshape(-1, d)
    lookup = {tuple(e): i for i, e in enumerate(graded_lex_exponents(deg_p + deg_q, d).tolist())}
    idx = np.array([lookup[tuple(e)] for e in flat.tolist()], dtype=np.int64)
    return idx.reshape(ep.shape[0], eq.shape[0])


def poly_mul(p, q):
    """Exact coefficient-space product ``p * q``."""
    _check_same_dim(p, q)
    idx = _product_table(p.degree, q.degree, p.dim)
    c = np.zeros(monomial_count(p.degree + q.degree, p.dim))
    np.add.at(c, idx.ravel(), np.outer(p.coeffs, q.coeffs).ravel())
    return MultiPoly(p.dim, p.degree + q.degree, c)


def poly_from_univariate(coeffs_1d, arg):
    """Compose a univariate polynomial (ascending coefficients) with a MultiPoly ``arg``."""
    coeffs_1d = np.asarray(coeffs_1d, dtype=float)
    out = MultiPoly.constant(arg.dim, coeffs_1d[-1] if coeffs_1d.size else 0.0)
    for c in coeffs_1d[-2::-1]:
        out = poly_mul(out, arg) + c
    return out


def squared_norm_poly(dim):
    """The polynomial ``x_1^2 + ... + x_d^2``."""
    out = MultiPoly.zero(dim, 2)
    for i in range(dim):
        alpha = [0] * dim
        alpha[i] = 2
        out = out + MultiPoly.monomial(alpha)
    return out
