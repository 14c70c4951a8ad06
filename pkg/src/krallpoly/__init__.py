"""Orthogonal polynomials in several variables, point-mass (Krall-type) modifications,
kernel inequalities and the ball weight."""
from .ball import BallKernelClosedForm, BallModel, integral_constant, k_00_closed, k_x0_closed
from .classical import (
    JacobiFamily,
    LaguerreFamily,
    QuadRule1D,
    gauss_jacobi_rule,
    gauss_laguerre_rule,
    jacobi_eval,
    laguerre_eval,
)
from .inequalities import (
    IneqMarginReport,
    chebyshev_margin,
    chebyshev_sweep,
    general_margin,
    general_sweep,
    jacobi_margin,
    jacobi_sweep,
    laguerre_margin,
    laguerre_sweep,
    specialization_crosscheck,
)
from .krall import KrallBasis, QuasiDefiniteReport, QuasiDefinitenessError
from .moments import CubatureRule, ExactnessError, MomentFunctional, ball_rule
from .mop import GramBreakdownError, OrthonormalPolynomialBasis, build_basis
from .polybase import MultiPoly, graded_lex_exponents, monomial_count

__version__ = "0.1.0"

__all__ = [
    "BallKernelClosedForm",
    "BallModel",
    "CubatureRule",
    "ExactnessError",
    "GramBreakdownError",
    "IneqMarginReport",
    "JacobiFamily",
    "KrallBasis",
    "LaguerreFamily",
    "MomentFunctional",
    "MultiPoly",
    "OrthonormalPolynomialBasis",
    "QuadRule1D",
    "QuasiDefiniteReport",
    "QuasiDefinitenessError",
    "ball_rule",
    "build_basis",
    "chebyshev_margin",
    "chebyshev_sweep",
    "gauss_jacobi_rule",
    "gauss_laguerre_rule",
    "general_margin",
    "general_sweep",
    "graded_lex_exponents",
    "integral_constant",
    "jacobi_eval",
    "jacobi_margin",
    "jacobi_sweep",
    "k_00_closed",
    "k_x0_closed",
    "laguerre_eval",
    "laguerre_margin",
    "laguerre_sweep",
    "monomial_count",
    "specialization_crosscheck",
]
