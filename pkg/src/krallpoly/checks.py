"""Two-path numerical comparisons shared by the CLI and the acceptance suite.

Each check returns a flat dict with at least ``max_abs_err``; the caller
decides the tolerance.
"""
from __future__ import annotations

import numpy as np

from .ball import BallModel
from .krall import KrallBasis
from .moments import MomentFunctional, ball_rule
from .mop import build_basis
from .polybase import MultiPoly, monomial_count

CHECKS = (
    "htilde",
    "ptilde",
    "ktilde",
    "reproduce",
    "ball-basis",
    "ball-kx0",
    "ball-k00",
    "ball-integral",
    "ball-ktilde",
)

DEFAULT_TOL = {
    "htilde": 1e-8,
    "ptilde": 1e-8,
    "ktilde": 1e-8,
    "reproduce": 1e-8,
    "ball-basis": 1e-8,
    "ball-kx0": 1e-8,
    "ball-k00": 1e-8,
    "ball-integral": 1e-6,
    "ball-ktilde": 1e-8,
}


def sample_ball(rng, m, d):
    """``m`` points uniform in the open unit ball, by rejection from the cube."""
    out = np.empty((0, d))
    while out.shape[0] < m:
        cand = rng.uniform(-1.0, 1.0, size=(2 * m, d))
        out = np.vstack([out, cand[np.sum(cand * cand, axis=1) < 1.0]])
    return out[:m]


def ball_functional(d, mu, N):
    return MomentFunctional(ball_rule(d, mu, 2 * N + 4))


def random_poly(rng, d, n):
    return MultiPoly(d, n, rng.standard_normal(monomial_count(n, d)))


def check_htilde(system, N):
    gram_err = 0.0
    inv_err = 0.0
    for k in range(N + 1):
        H = system.htilde(k)
        gram_err = max(gram_err, float(np.max(np.abs(H - system.gram(k)))))
        inv_err = max(inv_err, float(np.max(np.abs(H @ system.htilde_inv(k) - np.eye(H.shape[0])))))
    return {"max_abs_err": gram_err, "gram_err": gram_err, "inverse_err": inv_err}


def check_ptilde(system, N, X, Y):
    err = 0.0
    for k in range(N + 1):
        err = max(err, float(np.max(np.abs(system.kernel_Ptilde(k, X, Y) - system.kernel_Ptilde_direct(k, X, Y)))))
    return {"max_abs_err": err}


def check_ktilde(system, N, X, Y):
    closed_vs_sum = 0.0
    closed_vs_direct = 0.0
    for n in range(N + 1):
        closed = system.kernel_Ktilde(n, X, Y)
        closed_vs_sum = max(closed_vs_sum, float(np.max(np.abs(closed - system.kernel_Ktilde_sum(n, X, Y)))))
        closed_vs_direct = max(
            closed_vs_direct, float(np.max(np.abs(closed - system.kernel_Ktilde_direct(n, X, Y))))
        )
    return {
        "max_abs_err": max(closed_vs_sum, closed_vs_direct),
        "closed_vs_sum": closed_vs_sum,
        "closed_vs_direct": closed_vs_direct,
    }


def check_reproduce(system, functional, N, X, rng):
    """Residuals of the reproducing property for the kernels of ``u`` and ``v``."""
    u_err = 0.0
    v_err = 0.0
    for n in range(N + 1):
        p = random_poly(rng, functional.dim, n)
        for x in X:
            scale = 1.0 + abs(p(x))
            u_err = max(u_err, abs(system.base_.reproduce_check(functional, n, p, x)) / scale)
            v_err = max(v_err, abs(system.reproduce_residual(n, p, x)) / scale)
    return {"max_abs_err": max(u_err, v_err), "u_residual": u_err, "v_residual": v_err}


def check_ball_basis(model):
    u = model.functional
    V = model.basis.transform(u.rule.nodes)
    G = u.gram(V)
    gram_err = float(np.max(np.abs(G - np.eye(G.shape[0]))))
    generic = build_basis(u, model.N)
    cross_err = 0.0
    h_err = 0.0
    for n in range(model.N + 1):
        A = model.basis.level_values(n, u.rule.nodes)
        B = generic.level_values(n, u.rule.nodes)
        O = u.gram(A, B)
        cross_err = max(cross_err, float(np.max(np.abs(O @ O.T - np.eye(O.shape[0])))))
        for j in range(n // 2 + 1):
            raw = model.raw_member(n, j, 1)
            norm = np.sqrt(float(u.rule.integrate(raw(u.rule.nodes) ** 2)))
            h_err = max(h_err, abs(norm - model.h_constant(n, j)))
    return {"max_abs_err": max(gram_err, cross_err, h_err), "gram_err": gram_err, "cross_err": cross_err, "h_err": h_err}


def check_ball_kx0(model, generic, X):
    zero = np.zeros_like(X)
    err = 0.0
    for n in range(model.N + 1):
        err = max(err, float(np.max(np.abs(model.closed_form(n).k_x0(X) - generic.kernel_K(n, X, zero)))))
    return {"max_abs_err": err}


def check_ball_k00(model, generic):
    z = np.zeros(model.d)
    values = []
    err = 0.0
    for n in range(model.N + 1):
        closed = model.closed_form(n).k_00()
        direct = generic.kernel_K(n, z, z)
        values.append(closed)
        err = max(err, abs(closed - direct), abs(closed - model.closed_form(n).k_x0(z)))
    return {"max_abs_err": err, "values": values}


def check_ball_integral(model, generic, X, Y):
    err = 0.0
    for n in range(model.N + 1):
        err = max(err, float(np.max(np.abs(model.kernel_integral(n, X, Y) - generic.kernel_K(n, X, Y)))))
    return {"max_abs_err": err}


def check_ball_ktilde(model, system, X, Y):
    err = 0.0
    for n in range(model.N + 1):
        err = max(err, float(np.max(np.abs(model.ktilde_closed(n, X, Y) - system.kernel_Ktilde(n, X, Y)))))
    return {"max_abs_err": err}


def run_check(check, d, mu, lam, c, N, grid, seed, rule=None):
    """Run one named check; returns the measurement dict.

    ``rule`` replaces the ball rule for the non-ball checks (any dimension).
    """
    if check not in CHECKS:
        raise ValueError(f"unknown check {check!r}")
    rng = np.random.default_rng(seed)
    X = sample_ball(rng, grid, d)
    Y = sample_ball(rng, grid, d)

    if check.startswith("ball-"):
        if check == "ball-integral" and not mu > 0:
            raise ValueError("ball-integral needs mu > 0")
        model = BallModel(d, mu, lam, N)
        if check == "ball-basis":
            return check_ball_basis(model)
        generic = build_basis(model.functional, N)
        if check == "ball-kx0":
            return check_ball_kx0(model, generic, X)
        if check == "ball-k00":
            return check_ball_k00(model, generic)
        if check == "ball-integral":
            return check_ball_integral(model, generic, X, Y)
        system = KrallBasis.from_basis(generic, model.functional, lam, np.zeros(d))
        return check_ball_ktilde(model, system, X, Y)

    u = ball_functional(d, mu, N) if rule is None else MomentFunctional(rule)
    system = KrallBasis.from_basis(build_basis(u, N), u, lam, c)
    if check == "htilde":
        return check_htilde(system, N)
    if check == "ptilde":
        return check_ptilde(system, N, X, Y)
    if check == "ktilde":
        return check_ktilde(system, N, X, Y)
    return check_reproduce(system, u, N, X[: min(grid, 20)], rng)
