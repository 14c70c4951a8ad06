"""Orthogonal polynomials on the unit ball with a point mass at the origin.

The weight is ``c_mu (1 - |x|^2)^(mu - 1/2)`` on ``B^d`` (``d`` in 2, 3),
normalized to total mass one.  Its orthonormal basis is built from
spherical harmonics times radial Jacobi polynomials,

    P^n_{j,nu}(x) = p_j^{(mu-1/2, n-2j+(d-2)/2)}(2|x|^2 - 1) Y^{n-2j}_nu(x) / h,

and adding ``lam * delta_0`` only modifies the radial members of even
degree.  Kernels at the origin have one-term Jacobi closed forms.
"""
from __future__ import annotations

from functools import cached_property, lru_cache
from math import comb

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.special import gammaln

from ._validation import check_points
from .classical import (
    JacobiFamily,
    binom_real,
    gauss_jacobi_rule,
    jacobi_coefficients,
    jacobi_eval,
    jacobi_norm_squared,
    jacobi_orthonormal_eval,
    pochhammer,
)
from .moments import MomentFunctional, ball_rule, sphere_rule
from .mop import OrthonormalPolynomialBasis
from .polybase import MultiPoly, monomial_count, poly_from_univariate, poly_mul, squared_norm_poly


def harmonic_dimension(m, d):
    """``dim H_m^d``: harmonic homogeneous polynomials of degree ``m`` in ``d`` variables."""
    if m < 0:
        return 0
    lower = comb(m + d - 3, m - 2) if m >= 2 else 0
    return comb(m + d - 1, m) - lower


def _complex_power(m):
    """Real and imaginary parts of ``(x + i y)^m`` as polynomials in the first two variables."""
    re = np.zeros(m + 1)
    im = np.zeros(m + 1)
    for k in range(m + 1):
        # term binom(m, k) x^(m-k) (i y)^k
        coef = comb(m, k)
        if k % 4 == 0:
            re[k] = coef
        elif k % 4 == 1:
            im[k] = coef
        elif k % 4 == 2:
            re[k] = -coef
        else:
            im[k] = -coef
    return re, im


def _xy_poly(coefs, m, d):
    """``sum_k coefs[k] x^(m-k) y^k`` embedded in ``d`` variables."""
    out = MultiPoly.zero(d, m)
    for k, c in enumerate(coefs):
        if c:
            alpha = [0] * d
            alpha[0], alpha[1] = m - k, k
            out = out + MultiPoly.monomial(alpha, c)
    return out


def _raw_harmonics(m, d):
    if m == 0:
        return [MultiPoly.constant(d, 1.0)]
    if d == 2:
        re, im = _complex_power(m)
        return [_xy_poly(re, m, 2), _xy_poly(im, m, 2)]
    if d != 3:
        raise NotImplementedError("closed-form harmonics are provided for d in (2, 3)")
    r2 = squared_norm_poly(3)
    z = MultiPoly.variable(2, 3)
    out = []
    leg = npleg.leg2poly(np.eye(m + 1)[m])  # P_m in monomial coefficients
    for k in range(m + 1):
        dk = np.polynomial.polynomial.polyder(leg, k) if k else leg
        # homogenize r^(m-k) P_m^{(k)}(z / r); only powers of matching parity survive
        radial = MultiPoly.zero(3, m - k)
        for p, c in enumerate(dk):
            if c == 0 or (m - k - p) % 2:
                continue
            term = MultiPoly.constant(3, c)
            for _ in range(p):
                term = poly_mul(term, z)
            for _ in range((m - k - p) // 2):
                term = poly_mul(term, r2)
            radial = radial + term
        if k == 0:
            out.append(radial)
        else:
            re, im = _complex_power(k)
            out.append(poly_mul(_xy_poly(re, k, 3), radial))
            out.append(poly_mul(_xy_poly(im, k, 3), radial))
    return out


@lru_cache(maxsize=64)
def spherical_harmonics(m, d):
    """Real spherical harmonics of degree ``m``, orthonormal for the normalized sphere measure.

    Normalization is by quadrature on the sphere.
    """
    dirs, w, _ = sphere_rule(d, 2 * m + 2)
    out = []
    for p in _raw_harmonics(m, d):
        norm = np.sqrt(np.sum(w * p(dirs) ** 2))
        out.append(p * (1.0 / norm))
    return tuple(out)


class BallKernelClosedForm:
    """``K_n(x, 0)`` and ``K_n(0, 0)`` for the ball weight as one-term Jacobi expressions.

    With ``m = floor(n / 2)``,

        K_n(x, 0) = (mu + (d+1)/2)_m / (mu + 1/2)_m * P_m^{(d/2, mu-1/2)}(1 - 2|x|^2).
    """

    def __init__(self, d, mu, n):
        if not mu > -0.5:
            raise ValueError(f"mu must exceed -1/2, got {mu}")
        if n < 0:
            raise ValueError("n must be nonnegative")
        self.d, self.mu, self.n = d, float(mu), int(n)
        self.m = self.n // 2
        self.family = JacobiFamily(d / 2, self.mu - 0.5)

    @property
    def pochhammer_ratio(self):
        return pochhammer(self.mu + (self.d + 1) / 2, self.m) / pochhammer(self.mu + 0.5, self.m)

    def jacobi_factor(self, x):
        X = check_points(x, self.d)
        out = jacobi_eval(self.family, self.m, 1 - 2 * np.sum(X * X, axis=1))
        return float(out[0]) if np.ndim(x) == 1 else out

    def k_x0(self, x):
        return self.pochhammer_ratio * self.jacobi_factor(x)

    def k_00(self):
        return self.pochhammer_ratio * binom_real(self.m + self.d / 2, self.m)


def k_x0_closed(f, x):
    return f.k_x0(x)


def k_00_closed(f):
    return f.k_00()


def integral_constant(n, mu, d):
    """The constant ``A_n^mu`` in front of the integral representation of ``K_n``."""
    log_a = (
        np.log(2.0)
        + gammaln(mu + 0.5)
        + gammaln(mu + (d + 2) / 2)
        + gammaln(n + 2 * mu + d)
        - 0.5 * np.log(np.pi)
        - gammaln(mu)
        - gammaln(n + mu + d / 2)
        - gammaln(2 * mu + d + 1)
    )
    return float(np.exp(log_a))


class BallModel:
    """Explicit bases and kernels for ``<f, g>_mu + lam f(0) g(0)`` on ``B^d``.

    Parameters
    ----------
    d : {2, 3}
    mu : float, > -1/2
    lam : float, > 0
    N : int
        Highest degree for which bases and kernels are requested.
    """

    def __init__(self, d, mu, lam=1.0, N=8):
        if d not in (2, 3):
            raise NotImplementedError("the closed-form ball model supports d in (2, 3)")
        if not mu > -0.5:
            raise ValueError(f"mu must exceed -1/2, got {mu}")
        if lam < 0:
            raise ValueError("the ball model takes lam >= 0")
        if N < 0:
            raise ValueError("N must be nonnegative")
        self.d, self.mu, self.lam, self.N = d, float(mu), float(lam), int(N)

    # -- ingredients ----------------------------------------------------------

    @cached_property
    def functional(self):
        return MomentFunctional(ball_rule(self.d, self.mu, 2 * self.N + 4))

    def harmonics(self, m):
        return spherical_harmonics(m, self.d)

    def radial_family(self, m):
        return JacobiFamily(self.mu - 0.5, m + (self.d - 2) / 2)

    def radial_coefficients(self, j, m):
        """Ascending coefficients of the unit-mass orthonormal ``p_j`` for harmonic degree ``m``."""
        fam = self.radial_family(m)
        return jacobi_coefficients(fam, j) / np.sqrt(
            jacobi_norm_squared(fam.alpha, fam.beta, j, True)
        )

    def radial_at_minus_one(self, j):
        """``p_j^{(mu-1/2, (d-2)/2)}(-1)``, the origin value of the radial members."""
        return float(jacobi_orthonormal_eval(self.radial_family(0), True, j, -1.0))

    def h_constant(self, n, j):
        """``h^n_j = sqrt((d/2)_m / (mu + (d+1)/2)_m)`` with ``m = n - 2j``."""
        self._check_nj(n, j)
        m = n - 2 * j
        return float(np.sqrt(pochhammer(self.d / 2, m) / pochhammer(self.mu + (self.d + 1) / 2, m)))

    def _check_nj(self, n, j, nu=None):
        if n < 0 or j < 0 or 2 * j > n:
            raise ValueError(f"need 0 <= 2j <= n, got n={n}, j={j}")
        if nu is not None and not 1 <= nu <= harmonic_dimension(n - 2 * j, self.d):
            raise ValueError(f"nu={nu} outside 1..{harmonic_dimension(n - 2 * j, self.d)}")

    def raw_member(self, n, j, nu):
        """``p_j(2|x|^2 - 1) Y_nu^{n-2j}(x)`` before dividing by its norm."""
        self._check_nj(n, j, nu)
        m = n - 2 * j
        s = squared_norm_poly(self.d) * 2.0 - 1.0
        radial = poly_from_univariate(self.radial_coefficients(j, m), s)
        return poly_mul(radial, self.harmonics(m)[nu - 1])

    def indices(self, n):
        """``(j, nu)`` pairs of degree ``n`` in storage order."""
        return [
            (j, nu)
            for j in range(n // 2 + 1)
            for nu in range(1, harmonic_dimension(n - 2 * j, self.d) + 1)
        ]

    # -- the orthonormal basis of <.,.>_mu --------------------------------------

    @lru_cache(maxsize=None)
    def ball_orthonormal_member(self, n, j, nu):
        """``P^n_{j,nu}``, normalized by its quadrature norm under ``<.,.>_mu``."""
        raw = self.raw_member(n, j, nu)
        rule = ball_rule(self.d, self.mu, 2 * n + 2)
        norm = np.sqrt(float(rule.integrate(raw(rule.nodes) ** 2)))
        return raw * (1.0 / norm)

    def level(self, n):
        return [self.ball_orthonormal_member(n, j, nu) for j, nu in self.indices(n)]

    @cached_property
    def basis(self):
        """The explicit basis wrapped as an :class:`OrthonormalPolynomialBasis`."""
        levels = [[p.coeffs.tolist() for p in self.level(n)] for n in range(self.N + 1)]
        return OrthonormalPolynomialBasis.from_dict({"dim": self.d, "max_degree": self.N, "levels": levels})

    def kernel_K(self, n, x, y):
        """``K_n(x, y)`` summed over the explicit basis."""
        return self.basis.kernel_K(n, x, y)

    def kernel_origin_poly(self, n):
        """``K_n(x, 0)`` as a polynomial: only the radial members contribute."""
        out = MultiPoly.zero(self.d, max(n, 0))
        for i in range(n // 2 + 1 if n >= 0 else 0):
            out = out + self.ball_orthonormal_member(2 * i, i, 1) * self.radial_at_minus_one(i)
        return out

    def k00_sum(self, n):
        """``K_n(0, 0) = sum_{i <= n/2} p_i(-1)^2``."""
        if n < 0:
            return 0.0
        return float(sum(self.radial_at_minus_one(i) ** 2 for i in range(n // 2 + 1)))

    # -- origin-mass modification ---------------------------------------------

    def lambda_n(self, n):
        return 1.0 + self.lam * self.k00_sum(n)

    def rho(self, n):
        """Coefficient of ``K_{n-1}(x, 0)`` in the modified radial member of even degree ``n``."""
        if n % 2:
            return 0.0
        return self.lam * self.radial_at_minus_one(n // 2) / self.lambda_n(n - 1)

    def ball_Q_member(self, n, j, nu):
        """Member of the orthogonal basis for ``<.,.>_mu + lam delta_0``."""
        P = self.ball_orthonormal_member(n, j, nu)
        if n % 2 or 2 * j != n:
            return P
        return P - self.kernel_origin_poly(n - 1) * self.rho(n)

    def q_level(self, n):
        return [self.ball_Q_member(n, j, nu) for j, nu in self.indices(n)]

    # -- closed-form kernels -------------------------------------------------

    def closed_form(self, n):
        return BallKernelClosedForm(self.d, self.mu, n)

    def kernel_integral(self, n, x, y, nodes=None):
        """``K_n(x, y)`` through its one-dimensional integral representation (``mu > 0``)."""
        if not self.mu > 0:
            raise ValueError("the integral representation needs mu > 0")
        X = check_points(x, self.d)
        Y = check_points(y, self.d)
        single = np.ndim(x) == 1 and np.ndim(y) == 1
        rule = gauss_jacobi_rule(self.mu - 1, self.mu - 1, nodes or n + 2)
        base = np.sum(X * Y, axis=1)
        spread = np.sqrt(np.clip(1 - np.sum(X * X, axis=1), 0, None)) * np.sqrt(
            np.clip(1 - np.sum(Y * Y, axis=1), 0, None)
        )
        z = base[:, None] + spread[:, None] * rule.nodes[None, :]
        a = self.mu + self.d / 2
        vals = jacobi_eval(JacobiFamily(a, a - 1), n, z)
        out = integral_constant(n, self.mu, self.d) * (vals @ rule.weights)
        return float(out[0]) if single else out

    def d_n(self, n):
        f = self.closed_form(n)
        return self.lam / (1 + self.lam * f.k_00()) * f.pochhammer_ratio**2

    def ktilde_closed(self, n, x, y):
        """Reproducing kernel of the perturbed inner product, closed form in the origin terms."""
        f = self.closed_form(n)
        single = np.ndim(x) == 1 and np.ndim(y) == 1
        out = self.kernel_K(n, x, y) - self.d_n(n) * f.jacobi_factor(
            check_points(x, self.d)
        ) * f.jacobi_factor(check_points(y, self.d))
        return float(np.ravel(out)[0]) if single else out
