"""Orthonormal polynomial bases of a positive definite functional and their kernels.

:class:`OrthonormalPolynomialBasis` follows the scikit-learn transformer
protocol: ``fit`` takes the nodes of a positive cubature rule (with the rule
weights as ``sample_weight``) and ``transform`` evaluates every basis
polynomial at new points.
"""
from __future__ import annotations

import json

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_is_fitted

from ._validation import check_degree, check_points, check_weights
from .polybase import MultiPoly, graded_lex_exponents, monomial_count, monomial_matrix


class GramBreakdownError(ArithmeticError):
    """Gram-Schmidt met a (numerically) dependent monomial."""

    def __init__(self, degree, monomial, residual):
        self.degree = degree
        self.monomial = tuple(int(a) for a in monomial)
        self.residual = float(residual)
        super().__init__(
            f"Gram breakdown at degree {degree}, monomial {self.monomial}: "
            f"relative residual norm^2 {residual:.3e}; the functional is not "
            "numerically positive definite on this space"
        )


def _orthonormalize(A, order, breakdown_tol):
    """Modified Gram-Schmidt with one reorthogonalization pass.

    Columns of ``A`` are weighted monomial values.  Returns the coefficient
    matrix ``C`` with ``A @ C.T`` orthonormal, rows following ``order``.
    """
    M = A.shape[1]
    Q = np.zeros((A.shape[0], M))
    C = np.zeros((M, M))
    for i, col in enumerate(order):
        v = A[:, col].copy()
        coef = np.zeros(M)
        coef[col] = 1.0
        start2 = v @ v
        for _ in range(2):
            for j in range(i):
                r = Q[:, j] @ v
                v -= r * Q[:, j]
                coef -= r * C[j]
        norm2 = v @ v
        if norm2 <= breakdown_tol * start2:
            rel = norm2 / start2 if start2 > 0 else 0.0
            raise GramBreakdownError(None, (col,), rel)
        norm = np.sqrt(norm2)
        Q[:, i] = v / norm
        C[i] = coef / norm
    return C


class OrthonormalPolynomialBasis(TransformerMixin, BaseEstimator):
    """Orthonormal basis of Pi_N^d for the functional ``sum_i w_i p(x_i)``.

    Within each degree the monomials are processed in graded-lex order unless
    ``random_state`` is given, in which case that order is shuffled inside
    every degree block (the kernels do not depend on this choice).

    Parameters
    ----------
    max_degree : int
        Highest total degree ``N``.
    breakdown_tol : float
        Relative squared-norm threshold below which orthogonalization aborts.
    random_state : None, int or RandomState
        Optional shuffle of the within-degree processing order.
    """

    def __init__(self, max_degree=4, breakdown_tol=1e-12, random_state=None):
        self.max_degree = max_degree
        self.breakdown_tol = breakdown_tol
        self.random_state = random_state

    def fit(self, X, y=None, sample_weight=None):
        N = check_degree(self.max_degree, "max_degree")
        X = check_points(X)
        w = check_weights(sample_weight, X.shape[0])
        d = X.shape[1]
        exps = graded_lex_exponents(N, d)

        order = np.arange(exps.shape[0])
        if self.random_state is not None:
            rng = check_random_state(self.random_state)
            for n in range(N + 1):
                lo, hi = monomial_count(n - 1, d), monomial_count(n, d)
                order[lo:hi] = order[lo:hi][rng.permutation(hi - lo)]

        A = monomial_matrix(X, N) * np.sqrt(w)[:, None]
        try:
            C = _orthonormalize(A, order, self.breakdown_tol)
        except GramBreakdownError as exc:
            col = exc.monomial[0]
            alpha = exps[col]
            raise GramBreakdownError(int(alpha.sum()), alpha, exc.residual) from None

        self.coef_ = C
        self.exponents_ = exps
        self.leading_monomials_ = exps[order]
        self.n_features_in_ = d
        self.level_slices_ = [
            slice(monomial_count(n - 1, d), monomial_count(n, d)) for n in range(N + 1)
        ]
        return self

    @classmethod
    def from_functional(cls, functional, max_degree, **params):
        """Fit on the nodes and weights of an unperturbed :class:`MomentFunctional`."""
        if functional.mass is not None:
            raise ValueError("build the basis from the unperturbed functional")
        if functional.exact_degree < 2 * max_degree:
            raise ValueError(
                f"rule exact to degree {functional.exact_degree}; need at least {2 * max_degree}"
            )
        basis = cls(max_degree=max_degree, **params)
        return basis.fit(functional.rule.nodes, sample_weight=functional.rule.weights)

    # -- evaluation ---------------------------------------------------------

    @property
    def dim(self):
        check_is_fitted(self, "coef_")
        return self.n_features_in_

    def transform(self, X):
        """Values of all basis polynomials, shape ``(n_points, dim Pi_N^d)``."""
        check_is_fitted(self, "coef_")
        X = check_points(X, self.n_features_in_)
        return monomial_matrix(X, self.max_degree) @ self.coef_.T

    def level_values(self, n, X):
        """Values of the degree-``n`` vector ``P_n`` at the rows of ``X``."""
        check_is_fitted(self, "coef_")
        self._check_level(n)
        X = check_points(X, self.n_features_in_)
        sl = self.level_slices_[n]
        return monomial_matrix(X, n) @ self.coef_[sl, : monomial_count(n, self.n_features_in_)].T

    def level(self, n):
        """The degree-``n`` members as a list of :class:`MultiPoly`."""
        check_is_fitted(self, "coef_")
        self._check_level(n)
        d = self.n_features_in_
        width = monomial_count(n, d)
        return [MultiPoly(d, n, row[:width]) for row in self.coef_[self.level_slices_[n]]]

    def members(self):
        return [p for n in range(self.max_degree + 1) for p in self.level(n)]

    def _check_level(self, n, allow_minus_one=False):
        lo = -1 if allow_minus_one else 0
        if not (lo <= n <= self.max_degree):
            raise ValueError(f"degree {n} outside [{lo}, {self.max_degree}]")

    # -- kernels --------------------------------------------------------------

    def kernel_P(self, k, x, y):
        """``P_k(x, y) = P_k(x)^T P_k(y)`` for paired rows of ``x`` and ``y``."""
        check_is_fitted(self, "coef_")
        self._check_level(k)
        single = np.ndim(x) == 1 and np.ndim(y) == 1
        vx = self.level_values(k, x)
        vy = self.level_values(k, y)
        out = np.sum(vx * vy, axis=1)
        return float(out[0]) if single else out

    def kernel_K(self, n, x, y):
        """``K_n(x, y) = sum_{k <= n} P_k(x, y)``; ``K_{-1} = 0``."""
        check_is_fitted(self, "coef_")
        self._check_level(n, allow_minus_one=True)
        single = np.ndim(x) == 1 and np.ndim(y) == 1
        X = check_points(x, self.n_features_in_)
        Y = check_points(y, self.n_features_in_)
        m = max(X.shape[0], Y.shape[0])
        if n < 0:
            out = np.zeros(m)
        else:
            stop = self.level_slices_[n].stop
            C = self.coef_[:stop, :stop]
            vx = monomial_matrix(X, n) @ C.T
            vy = monomial_matrix(Y, n) @ C.T
            out = np.sum(vx * vy, axis=1)
        return float(out[0]) if single else out

    def kernel_K_values(self, n, x, X):
        """``K_n(x, X_i)`` for one point ``x`` against every row of ``X``."""
        check_is_fitted(self, "coef_")
        self._check_level(n, allow_minus_one=True)
        X = check_points(X, self.n_features_in_)
        if n < 0:
            return np.zeros(X.shape[0])
        stop = self.level_slices_[n].stop
        C = self.coef_[:stop, :stop]
        vx = monomial_matrix(check_points(x, self.n_features_in_), n) @ C.T
        return (monomial_matrix(X, n) @ C.T) @ vx[0]

    def kernel_poly(self, n, c):
        """``K_n(c, .)`` as a :class:`MultiPoly` of degree ``max(n, 0)``."""
        check_is_fitted(self, "coef_")
        self._check_level(n, allow_minus_one=True)
        d = self.n_features_in_
        if n < 0:
            return MultiPoly.zero(d, 0)
        stop = self.level_slices_[n].stop
        C = self.coef_[:stop, :stop]
        vc = monomial_matrix(check_points(c, d), n) @ C.T
        return MultiPoly(d, n, vc[0] @ C)

    def reproduce_check(self, functional, n, p, x):
        """``<u, K_n(x, .) p> - p(x)``; vanishes (to rounding) when ``deg p <= n``."""
        check_is_fitted(self, "coef_")
        self._check_level(n)
        if p.effective_degree() > n:
            raise ValueError(f"polynomial degree {p.effective_degree()} exceeds n={n}")
        return self._reproduce_residual(functional, n, p, x)

    def _reproduce_residual(self, functional, n, p, x):
        nodes = functional.rule.nodes
        kx = self.kernel_K_values(n, x, nodes)
        val = float(functional.rule.integrate(kx * p(nodes)))
        if functional.mass is not None:
            lam, c = functional.mass
            val += lam * self.kernel_K(n, x, c) * p(c)
        return val - p(np.asarray(x, dtype=float))

    # -- serialization --------------------------------------------------------

    def to_dict(self):
        check_is_fitted(self, "coef_")
        levels = []
        for n in range(self.max_degree + 1):
            levels.append([p.coeffs.tolist() for p in self.level(n)])
        return {"dim": int(self.n_features_in_), "max_degree": int(self.max_degree), "levels": levels}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        d, N = int(data["dim"]), int(data["max_degree"])
        M = monomial_count(N, d)
        C = np.zeros((M, M))
        row = 0
        for level in data["levels"]:
            for coeffs in level:
                C[row, : len(coeffs)] = coeffs
                row += 1
        basis = cls(max_degree=N)
        basis.coef_ = C
        basis.exponents_ = graded_lex_exponents(N, d)
        basis.leading_monomials_ = basis.exponents_
        basis.n_features_in_ = d
        basis.level_slices_ = [
            slice(monomial_count(n - 1, d), monomial_count(n, d)) for n in range(N + 1)
        ]
        return basis


def build_basis(functional, N, **params):
    """Orthonormal basis through degree ``N`` for an unperturbed functional."""
    return OrthonormalPolynomialBasis.from_functional(functional, N, **params)
