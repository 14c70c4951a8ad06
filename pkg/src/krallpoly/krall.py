"""Orthogonal polynomials for a functional perturbed by a point mass.

Given an orthonormal basis ``P_n`` of a positive definite functional ``u`` and
``v = u + lam * delta_c``, the perturbed family is

    Q_n(x) = P_n(x) - lam / lam_{n-1} * K_{n-1}(c, x) * P_n(c),
    lam_n  = 1 + lam * K_n(c, c),   lam_{-1} = 1,

which exists as long as every ``lam_n`` is nonzero.  The Gram matrices and
reproducing kernels of ``v`` then have rank-one closed forms in terms of the
kernels of ``u``; :class:`KrallBasis` evaluates both the closed forms and the
direct (quadrature) definitions so that they can be compared.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_point, check_points, check_weights
from .moments import CubatureRule, MomentFunctional
from .mop import OrthonormalPolynomialBasis
from .polybase import MultiPoly, monomial_count, monomial_matrix


class QuasiDefinitenessError(ArithmeticError):
    """``lam_n`` vanished (to tolerance), so the perturbed family does not exist past degree ``n``."""

    def __init__(self, n, value):
        self.n = n
        self.value = float(value)
        super().__init__(
            f"lambda_{n} = {value:.3e} is zero to tolerance; the perturbed "
            f"functional is not quasi definite beyond degree {n}"
        )


@dataclass
class QuasiDefiniteReport:
    ok: bool
    first_failure: int | None
    margins: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


class KrallBasis(TransformerMixin, BaseEstimator):
    """Orthogonal basis ``Q_n`` of ``v = u + mass * delta_point``.

    ``fit`` receives the nodes and weights of a positive cubature rule for
    ``u`` (exact to at least degree ``2 * max_degree``).  ``transform``
    evaluates every ``Q_alpha^n`` with ``n <= max_degree``.

    Parameters
    ----------
    max_degree : int
    mass : float
        The point-mass weight ``lam``; zero gives back the basis of ``u``.
    point : array-like or None
        Mass location ``c``; defaults to the origin.
    tol : float
        Relative threshold for declaring ``lam_n`` zero.
    """

    def __init__(self, max_degree=4, mass=1.0, point=None, tol=1e-12, breakdown_tol=1e-12):
        self.max_degree = max_degree
        self.mass = mass
        self.point = point
        self.tol = tol
        self.breakdown_tol = breakdown_tol

    def fit(self, X, y=None, sample_weight=None):
        X = check_points(X)
        w = check_weights(sample_weight, X.shape[0])
        base = OrthonormalPolynomialBasis(self.max_degree, breakdown_tol=self.breakdown_tol)
        base.fit(X, sample_weight=w)
        return self._attach(base, X, w)

    @classmethod
    def from_basis(cls, base, functional, mass, point=None, tol=1e-12):
        """Reuse an already fitted basis of ``functional`` (unperturbed)."""
        check_is_fitted(base, "coef_")
        obj = cls(max_degree=base.max_degree, mass=mass, point=point, tol=tol)
        return obj._attach(base, functional.rule.nodes, functional.rule.weights)

    def _attach(self, base, nodes, weights):
        self.base_ = base
        d = base.n_features_in_
        self.n_features_in_ = d
        self.nodes_ = nodes
        self.weights_ = weights
        self.lam_ = float(self.mass)
        self.c_ = check_point(np.zeros(d) if self.point is None else self.point, d)
        N = base.max_degree

        self.Pc_ = [base.level_values(n, self.c_)[0] for n in range(N + 1)]
        Kcc = np.cumsum([v @ v for v in self.Pc_])
        self.Kcc_ = np.concatenate([[0.0], Kcc])  # index n + 1, K_{-1} = 0
        self.lambda_seq_ = 1.0 + self.lam_ * self.Kcc_
        return self

    # -- quasi-definiteness -------------------------------------------------

    def functional(self):
        check_is_fitted(self, "base_")
        rule = CubatureRule(self.n_features_in_, self.nodes_, self.weights_, 2 * self.max_degree)
        if self.lam_ == 0:
            return MomentFunctional(rule)
        return MomentFunctional(rule, (self.lam_, self.c_))

    def lambda_n(self, n):
        check_is_fitted(self, "base_")
        if not (-1 <= n <= self.max_degree):
            raise ValueError(f"n={n} outside [-1, {self.max_degree}]")
        return float(self.lambda_seq_[n + 1])

    def _margin(self, n):
        scale = 1.0 + abs(self.lam_) * self.Kcc_[n + 1]
        return abs(self.lambda_seq_[n + 1]) / scale

    def _ok(self, n):
        return n < 0 or self._margin(n) > self.tol

    def is_quasi_definite(self, N=None):
        check_is_fitted(self, "base_")
        N = self.max_degree if N is None else N
        if not (0 <= N <= self.max_degree):
            raise ValueError(f"N={N} outside [0, {self.max_degree}]")
        margins = [float(self._margin(n)) for n in range(N + 1)]
        failures = [n for n in range(N + 1) if not self._ok(n)]
        first = failures[0] if failures else None
        return QuasiDefiniteReport(ok=first is None, first_failure=first, margins=margins)

    def _require(self, n):
        if not self._ok(n):
            raise QuasiDefinitenessError(n, self.lambda_seq_[n + 1])

    # -- the perturbed basis --------------------------------------------------

    def q_coef(self, n):
        """Coefficient rows (over monomials of degree <= n) of the members of ``Q_n``."""
        check_is_fitted(self, "base_")
        self.base_._check_level(n)
        self._require(n - 1)
        d = self.n_features_in_
        width = monomial_count(n, d)
        P = self.base_.coef_[self.base_.level_slices_[n], :width]
        if n == 0 or self.lam_ == 0:
            return P.copy()
        k = np.zeros(width)
        k[: monomial_count(n - 1, d)] = self.base_.kernel_poly(n - 1, self.c_).coeffs
        gamma = self.lam_ / self.lambda_seq_[n]
        return P - gamma * np.outer(self.Pc_[n], k)

    def build_Q(self, n):
        """The degree-``n`` members ``Q_alpha^n`` as :class:`MultiPoly` values."""
        d = self.n_features_in_
        return [MultiPoly(d, n, row) for row in self.q_coef(n)]

    def q_values(self, n, X):
        X = check_points(X, self.n_features_in_)
        return monomial_matrix(X, n) @ self.q_coef(n).T

    def transform(self, X):
        check_is_fitted(self, "base_")
        return np.hstack([self.q_values(n, X) for n in range(self.max_degree + 1)])

    # -- Gram matrices --------------------------------------------------------

    def htilde(self, k):
        """``<v, Q_k Q_k^T> = I + lam / lam_{k-1} P_k(c) P_k(c)^T``."""
        check_is_fitted(self, "base_")
        self.base_._check_level(k)
        self._require(k - 1)
        pc = self.Pc_[k]
        return np.eye(pc.shape[0]) + (self.lam_ / self.lambda_seq_[k]) * np.outer(pc, pc)

    def htilde_inv(self, k):
        """Inverse of :meth:`htilde`: ``I - lam / lam_k P_k(c) P_k(c)^T``."""
        check_is_fitted(self, "base_")
        self.base_._check_level(k)
        self._require(k - 1)
        self._require(k)
        pc = self.Pc_[k]
        return np.eye(pc.shape[0]) - (self.lam_ / self.lambda_seq_[k + 1]) * np.outer(pc, pc)

    def gram(self, n, m=None):
        """Quadrature value of ``<v, Q_n Q_m^T>``."""
        m = n if m is None else m
        A = self.q_values(n, self.nodes_)
        B = self.q_values(m, self.nodes_)
        G = (A * self.weights_[:, None]).T @ B
        if self.lam_ != 0:
            G = G + self.lam_ * np.outer(self.q_values(n, self.c_)[0], self.q_values(m, self.c_)[0])
        return G

    def full_gram(self, N=None):
        """``<v, Q Q^T>`` over every member through degree ``N``, with level offsets."""
        N = self.max_degree if N is None else N
        A = np.hstack([self.q_values(n, self.nodes_) for n in range(N + 1)])
        G = (A * self.weights_[:, None]).T @ A
        if self.lam_ != 0:
            ac = np.concatenate([self.q_values(n, self.c_)[0] for n in range(N + 1)])
            G = G + self.lam_ * np.outer(ac, ac)
        offsets = np.cumsum([0] + [monomial_count(n, self.n_features_in_, True) for n in range(N + 1)])
        return G, offsets

    # -- kernels ------------------------------------------------------------

    def _paired(self, x, y):
        single = np.ndim(x) == 1 and np.ndim(y) == 1
        X = check_points(x, self.n_features_in_)
        Y = check_points(y, self.n_features_in_)
        return single, X, Y

    def kernel_Ptilde(self, k, x, y):
        """Per-degree kernel of ``v`` from the kernels of ``u`` (closed form)."""
        check_is_fitted(self, "base_")
        self._require(k - 1)
        self._require(k)
        single, X, Y = self._paired(x, y)
        b, c = self.base_, self.c_
        out = (
            b.kernel_P(k, X, Y)
            - self.lam_ / self.lambda_seq_[k + 1] * b.kernel_K(k, X, c) * b.kernel_K(k, c, Y)
            + self.lam_ / self.lambda_seq_[k] * b.kernel_K(k - 1, X, c) * b.kernel_K(k - 1, c, Y)
        )
        return float(out[0]) if single else out

    def kernel_Ptilde_direct(self, k, x, y, gram=None):
        """``Q_k(x)^T G^{-1} Q_k(y)`` with ``G`` the quadrature Gram matrix of ``Q_k``."""
        single, X, Y = self._paired(x, y)
        G = self.gram(k) if gram is None else gram
        qx = self.q_values(k, X)
        qy = self.q_values(k, Y)
        out = np.sum(qx * np.linalg.solve(G, qy.T).T, axis=1)
        return float(out[0]) if single else out

    def kernel_Ktilde(self, n, x, y):
        """Cumulative kernel of ``v``: ``K_n(x,y) - lam/lam_n K_n(x,c) K_n(c,y)``."""
        check_is_fitted(self, "base_")
        self._require(n)
        single, X, Y = self._paired(x, y)
        b, c = self.base_, self.c_
        out = b.kernel_K(n, X, Y) - self.lam_ / self.lambda_seq_[n + 1] * b.kernel_K(
            n, X, c
        ) * b.kernel_K(n, c, Y)
        return float(out[0]) if single else out

    def kernel_Ktilde_sum(self, n, x, y):
        """``sum_{k <= n}`` of :meth:`kernel_Ptilde`."""
        single, X, Y = self._paired(x, y)
        out = sum(self.kernel_Ptilde(k, X, Y) for k in range(n + 1))
        return float(out[0]) if single else out

    def kernel_Ktilde_direct(self, n, x, y):
        """``sum_{k <= n}`` of :meth:`kernel_Ptilde_direct`."""
        single, X, Y = self._paired(x, y)
        out = sum(self.kernel_Ptilde_direct(k, X, Y) for k in range(n + 1))
        return float(out[0]) if single else out

    def reproduce_residual(self, n, p, x):
        """``<v, Ktilde_n(x, .) p> - p(x)`` using the closed-form kernel."""
        x = np.asarray(x, dtype=float)
        kx = self.kernel_Ktilde(n, np.broadcast_to(x, self.nodes_.shape), self.nodes_)
        val = float(np.sum(self.weights_ * kx * p(self.nodes_)))
        if self.lam_ != 0:
            val += self.lam_ * self.kernel_Ktilde(n, x, self.c_) * p(self.c_)
        return val - p(x)

    # -- reports ------------------------------------------------------------

    def audit(self, N=None):
        """Orthogonality audit as a JSON-ready dict."""
        N = self.max_degree if N is None else N
        report = self.is_quasi_definite(N)
        out = {
            "N": N,
            "lambda": self.lam_,
            "c": self.c_.tolist(),
            "margins": report.margins,
            "first_failure": report.first_failure,
        }
        if report.ok:
            G, off = self.full_gram(N)
            mask = np.ones_like(G, dtype=bool)
            for n in range(N + 1):
                mask[off[n] : off[n + 1], off[n] : off[n + 1]] = False
            out["max_offdiag"] = float(np.max(np.abs(G[mask]))) if mask.any() else 0.0
            out["max_htilde_err"] = max(
                float(np.max(np.abs(G[off[k] : off[k + 1], off[k] : off[k + 1]] - self.htilde(k))))
                for k in range(N + 1)
            )
        else:
            out["max_offdiag"] = None
            out["max_htilde_err"] = None
        return out
