"""Command-line driver: ``krallpoly basis | verify <check> | ineq <family>``.

Exit codes: 0 every audit within tolerance, 1 tolerance failure, 2 usage or
configuration error.  Reports are JSON (``"schema": 1``) or CSV and depend
only on the arguments, so reruns with the same seed are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import inequalities as ineq
from .checks import CHECKS, DEFAULT_TOL, ball_functional, run_check, sample_ball
from .krall import KrallBasis
from .moments import CubatureRule, MomentFunctional
from .mop import GramBreakdownError, build_basis

SCHEMA = 1
INVERSE_TOL = 1e-11
THREADS_ENV = "KRALL_MOP_THREADS"


class ConfigError(ValueError):
    pass


def _point(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_common(p, *, lam_default=None):
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--lambda", dest="lam", type=float, default=lam_default)
    p.add_argument("--c", type=_point, default=None, help="mass point x1,x2[,x3]")
    p.add_argument("--N", type=int, default=6)
    p.add_argument("--grid", type=int, default=50, help="number of random point pairs")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rule", default=None, help="JSON cubature rule replacing the ball rule")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser():
    parser = argparse.ArgumentParser(prog="krallpoly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="build and audit an orthonormal basis (and its point-mass modification)")
    _add_common(p)
    p.add_argument("--save-rule", default=None, help="also write the cubature rule as JSON")

    p = sub.add_parser("verify", help="run a two-path identity check")
    p.add_argument("check", choices=CHECKS)
    _add_common(p, lam_default=1.0)

    p = sub.add_parser("ineq", help="sweep an inequality and report margins")
    p.add_argument("family", choices=("jacobi", "laguerre", "chebyshev", "general"))
    _add_common(p)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--xmax", type=float, default=40.0)
    p.add_argument("--points", type=int, default=None, help="grid points per sweep")
    return parser


def _threads():
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _validate(args):
    if args.N < 0:
        raise ConfigError(f"--N must be >= 0, got {args.N}")
    if args.grid < 1:
        raise ConfigError("--grid must be >= 1")
    if not args.mu > -0.5:
        raise ConfigError(f"--mu must exceed -1/2, got {args.mu}")
    if args.tol is not None and not args.tol > 0:
        raise ConfigError("--tol must be positive")
    if args.rule is None and args.dim not in (2, 3):
        raise ConfigError("--dim must be 2 or 3 unless --rule supplies a cubature rule")
    if args.c is not None and len(args.c) != args.dim:
        raise ConfigError(f"--c has {len(args.c)} coordinates, --dim is {args.dim}")


def _functional(args):
    if args.rule is None:
        return ball_functional(args.dim, args.mu, args.N)
    with open(args.rule) as fh:
        rule = CubatureRule.from_json(fh.read())
    if rule.dim != args.dim:
        raise ConfigError(f"rule dimension {rule.dim} differs from --dim {args.dim}")
    if rule.exact_degree < 2 * args.N:
        raise ConfigError(f"rule is exact to degree {rule.exact_degree}; --N {args.N} needs {2 * args.N}")
    return MomentFunctional(rule)


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _config(args):
    cfg = {k: v for k, v in vars(args).items() if k not in ("out", "format", "save_rule")}
    cfg["lambda"] = cfg.pop("lam")
    return cfg


def cmd_basis(args):
    _validate(args)
    u = _functional(args)
    tol = args.tol if args.tol is not None else 1e-9
    if args.save_rule:
        with open(args.save_rule, "w") as fh:
            fh.write(u.rule.to_json())
    basis = build_basis(u, args.N)
    V = basis.transform(u.rule.nodes)
    G = u.gram(V)
    identity_err = float(np.max(np.abs(G - np.eye(G.shape[0]))))
    report = {
        "schema": SCHEMA,
        "command": "basis",
        "config": _config(args),
        "basis": basis.to_dict(),
        "audit": {"identity_err": identity_err, "tolerance": tol},
    }
    ok = identity_err <= tol
    if args.lam is not None:
        c = np.zeros(args.dim) if args.c is None else np.asarray(args.c)
        system = KrallBasis.from_basis(basis, u, args.lam, c)
        audit = system.audit()
        krall_tol = args.tol if args.tol is not None else 1e-8
        audit["tolerance"] = krall_tol
        if audit["first_failure"] is None:
            audit["q_levels"] = [system.q_coef(n).tolist() for n in range(args.N + 1)]
            ok = ok and audit["max_offdiag"] <= krall_tol and audit["max_htilde_err"] <= krall_tol
        else:
            ok = False
        report["krall"] = audit
    report["pass"] = bool(ok)
    _emit(_dump(report), args.out)
    return 0 if ok else 1


def cmd_verify(args):
    _validate(args)
    if args.check.startswith("ball-"):
        if args.rule is not None:
            raise ConfigError("ball checks use the built-in ball rule; drop --rule")
        if args.check == "ball-integral" and not args.mu > 0:
            raise ConfigError("ball-integral needs --mu > 0")
        if args.lam is not None and args.lam < 0:
            raise ConfigError("ball checks take --lambda >= 0")
    rule = _functional(args).rule if args.rule is not None else None
    lam = 1.0 if args.lam is None else args.lam
    c = np.zeros(args.dim) if args.c is None else np.asarray(args.c)
    tol = args.tol if args.tol is not None else DEFAULT_TOL[args.check]
    result = run_check(args.check, args.dim, args.mu, lam, c, args.N, args.grid, args.seed, rule=rule)
    ok = result["max_abs_err"] <= tol
    if args.check == "htilde":
        ok = ok and result["inverse_err"] <= INVERSE_TOL
    report = {
        "schema": SCHEMA,
        "command": "verify",
        "check": args.check,
        "d": args.dim,
        "mu": args.mu,
        "lambda": lam,
        "c": c.tolist(),
        "n": args.N,
        "grid": args.grid,
        "seed": args.seed,
        "tolerance": tol,
        **result,
        "pass": bool(ok),
    }
    _emit(_dump(report), args.out)
    return 0 if ok else 1


def _sweeps(args):
    fam = args.family
    params = ineq.DEFAULT_JACOBI_PARAMS
    if fam == "jacobi":
        alphas = params if args.alpha is None else (args.alpha,)
        betas = params if args.beta is None else (args.beta,)
        for a in alphas + betas:
            if not a > -1:
                raise ConfigError("Jacobi parameters must exceed -1")
        nmax = 20 if args.nmax is None else args.nmax
        pts = 1001 if args.points is None else args.points
        return [lambda a=a, b=b: ineq.jacobi_sweep(a, b, nmax, pts) for a in alphas for b in betas]
    if fam == "laguerre":
        alphas = ineq.DEFAULT_LAGUERRE_PARAMS if args.alpha is None else (args.alpha,)
        if any(not a > -1 for a in alphas):
            raise ConfigError("Laguerre parameter must exceed -1")
        if not args.xmax > 0:
            raise ConfigError("--xmax must be positive")
        nmax = 20 if args.nmax is None else args.nmax
        pts = 1001 if args.points is None else args.points
        return [lambda a=a: ineq.laguerre_sweep(a, nmax, args.xmax, pts) for a in alphas]
    if fam == "chebyshev":
        nmax = 50 if args.nmax is None else args.nmax
        pts = 2001 if args.points is None else args.points
        return [lambda: ineq.chebyshev_sweep(nmax, pts)]
    _validate(args)
    u = _functional(args)
    nmax = args.N if args.nmax is None else args.nmax
    if nmax > args.N:
        raise ConfigError("--nmax cannot exceed --N for the general inequality")
    basis = build_basis(u, args.N)
    c = np.zeros(args.dim) if args.c is None else np.asarray(args.c)
    X = sample_ball(np.random.default_rng(args.seed), args.grid, args.dim)
    return [lambda: ineq.general_sweep(basis, c, X, nmax)]


def cmd_ineq(args):
    if args.nmax is not None and args.nmax < 1:
        raise ConfigError("--nmax must be >= 1")
    if args.points is not None and args.points < 2:
        raise ConfigError("--points must be >= 2")
    jobs = _sweeps(args)
    tol = args.tol
    if tol is None:
        tol = 1e-12 if args.family == "chebyshev" else 1e-10
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        reports = list(pool.map(lambda job: job(), jobs))
    ok = all(r.holds(tol) and r.anchor_detected() for r in reports)
    if args.format == "csv":
        _emit(ineq.reports_to_csv(reports), args.out)
        summary = {"schema": SCHEMA, "family": args.family, "min_margin": min(r.min_margin for r in reports), "pass": ok}
        sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")
    else:
        report = {
            "schema": SCHEMA,
            "command": "ineq",
            "family": args.family,
            "tolerance": tol,
            "eq_tol": ineq.EQ_TOL,
            "min_margin": min(r.min_margin for r in reports),
            "sweeps": [r.summary() for r in reports],
            "pass": bool(ok),
        }
        _emit(_dump(report), args.out)
    return 0 if ok else 1


COMMANDS = {"basis": cmd_basis, "verify": cmd_verify, "ineq": cmd_ineq}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, GramBreakdownError, OSError) as exc:
        sys.stderr.write(f"krallpoly: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
