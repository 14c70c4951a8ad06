"""Quadrature-backed moment functionals and their Dirac-mass perturbations."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .classical import gauss_jacobi_rule


class ExactnessError(ValueError):
    """A polynomial's degree exceeds what the cubature rule integrates exactly."""


@dataclass(frozen=True, eq=False)
class CubatureRule:
    """Positive cubature rule on R^d.

    ``exact_degree`` is the total degree up to which the rule reproduces the
    target measure.  ``mu`` records the ball-weight parameter when the rule
    came from :func:`ball_rule` and is ``None`` otherwise.
    """

    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    mu: float | None = None

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float).reshape(-1, self.dim)
        weights = np.array(self.weights, dtype=float).ravel()
        if nodes.shape[0] != weights.shape[0]:
            raise ValueError("nodes and weights differ in length")
        if np.any(weights <= 0):
            raise ValueError("cubature weights must be positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def integrate(self, values):
        """Sum ``w_i * values_i``; ``values`` may carry trailing axes."""
        values = np.asarray(values, dtype=float)
        w = self.weights.reshape((-1,) + (1,) * (values.ndim - 1))
        return np.sum(w * values, axis=0)

    def to_dict(self):
        return {
            "dim": self.dim,
            "mu": self.mu,
            "exact_degree": self.exact_degree,
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        return cls(
            dim=int(data["dim"]),
            nodes=data["nodes"],
            weights=data["weights"],
            exact_degree=int(data["exact_degree"]),
            mu=data.get("mu"),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def rule_from_1d(rule1d, normalize=False):
    """Wrap a :class:`QuadRule1D` as a one-dimensional :class:`CubatureRule`."""
    w = np.asarray(rule1d.weights, dtype=float)
    if normalize:
        w = w / w.sum()
    return CubatureRule(1, np.asarray(rule1d.nodes)[:, None], w, rule1d.exact_degree)


def sphere_rule(d, degree):
    """Rule for the normalized surface measure on S^{d-1}, ``d`` in (2, 3).

    Returns ``(directions, weights, exact_degree)``.
    """
    if d not in (2, 3):
        raise NotImplementedError(f"sphere_rule supports d in (2, 3); got d={d}")
    n_phi = 2 * int(degree) + 4
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    w_phi = np.full(n_phi, 1.0 / n_phi)
    if d == 2:
        return np.stack([np.cos(phi), np.sin(phi)], axis=1), w_phi, n_phi - 1
    zrule = gauss_jacobi_rule(0.0, 0.0, int(degree) + 2)
    z = zrule.nodes
    sin_t = np.sqrt(1 - z * z)
    dirs = np.stack(
        [
            np.outer(sin_t, np.cos(phi)).ravel(),
            np.outer(sin_t, np.sin(phi)).ravel(),
            np.repeat(z, n_phi),
        ],
        axis=1,
    )
    w_dir = np.outer(zrule.weights / 2, w_phi).ravel()
    return dirs, w_dir, min(zrule.exact_degree, n_phi - 1)


def ball_rule(d, mu, target_degree):
    """Product rule for the normalized weight ``c_mu (1 - |x|^2)^(mu - 1/2)`` on the unit ball.

    The radial factor ``r^(d-1) (1 - r^2)^(mu - 1/2) dr`` becomes, under
    ``s = 2 r^2 - 1``, the Jacobi weight ``(1-s)^(mu-1/2) (1+s)^((d-2)/2)``.
    The angular factor is a trapezoidal rule on the circle (``d = 2``) or
    Gauss-Legendre in ``cos(theta)`` times trapezoidal in ``phi`` (``d = 3``).
    """
    if d not in (2, 3):
        raise NotImplementedError(f"ball_rule supports d in (2, 3); got d={d}, pass a rule instead")
    if not mu > -0.5:
        raise ValueError(f"mu must exceed -1/2, got {mu}")
    if target_degree < 0:
        raise ValueError("target_degree must be nonnegative")
    D = int(target_degree)

    m_r = D // 4 + 2
    radial = gauss_jacobi_rule(mu - 0.5, (d - 2) / 2, m_r)
    r = np.sqrt((1 + radial.nodes) / 2)
    w_r = radial.weights / radial.weights.sum()
    radial_exact = 2 * radial.exact_degree + 1

    dirs, w_dir, angular_exact = sphere_rule(d, D)
    nodes = (r[:, None, None] * dirs[None, :, :]).reshape(-1, d)
    weights = np.outer(w_r, w_dir).ravel()
    return CubatureRule(d, nodes, weights, min(radial_exact, angular_exact), mu=float(mu))


class MomentFunctional:
    """``<u, p> = sum_i w_i p(x_i)``, optionally plus ``lam * p(c)``.

    ``mass`` is ``None`` or a pair ``(lam, c)``; ``lam`` may be negative, in
    which case the functional need not be positive definite.
    """

    def __init__(self, rule, mass=None):
        self.rule = rule
        if mass is not None:
            lam, c = mass
            c = np.asarray(c, dtype=float).ravel()
            if c.shape[0] != rule.dim:
                raise ValueError(f"mass point has {c.shape[0]} coordinates, rule has dim {rule.dim}")
            if lam == 0:
                raise ValueError("mass must be nonzero; omit it for the unperturbed functional")
            mass = (float(lam), c)
        self.mass = mass

    @property
    def dim(self):
        return self.rule.dim

    @property
    def exact_degree(self):
        return self.rule.exact_degree

    def perturbed(self, lam, c):
        return MomentFunctional(self.rule, (lam, c))

    def _check_degree(self, deg):
        if deg > self.rule.exact_degree:
            raise ExactnessError(
                f"degree {deg} exceeds the rule's exact degree {self.rule.exact_degree}"
            )

    def apply(self, p):
        if p.dim != self.dim:
            raise ValueError("dimension mismatch")
        self._check_degree(p.effective_degree())
        val = float(self.rule.integrate(p(self.rule.nodes)))
        if self.mass is not None:
            lam, c = self.mass
            val += lam * p(c)
        return val

    def inner(self, p, q):
        return self.apply(p * q)

    def gram(self, A, B=None, A_c=None, B_c=None):
        """Gram matrix from values at the nodes.

        ``A`` and ``B`` are ``(n_nodes, r)`` value arrays; ``A_c``/``B_c``
        their values at the mass point (required when a mass is present).
        """
        if B is None:
            B, B_c = A, A_c
        G = (A * self.rule.weights[:, None]).T @ B
        if self.mass is not None:
            if A_c is None or B_c is None:
                raise ValueError("values at the mass point are required")
            G = G + self.mass[0] * np.outer(A_c, B_c)
        return G
