"""Fractional Schrödinger-type blow-up toolkit.

Numerical fractional calculus (Caputo and Riemann-Liouville operators,
Mittag-Leffler function, fractional Laplacian of the algebraic bump), a
scalar fractional ODE solver with blow-up brackets, a desk-scale
pseudospectral solver for the space-time fractional equation, the explicit
constants of the test-function method and a regime classifier.
"""

from .constants import ConstantBundle, ProblemParams, M_R_zero, testfn_method_constants, thm6_constants
from .errors import AccuracyError, DomainError, HypothesisError, NoBlowupError, StepSizeError
from .fode import FodeProblem, check_sandwich, detect_blowup, solve_fode
from .frac_core import GridFunction1D, caputo_derivative, mittag_leffler, rl_integral
from .pde_sim import SpatialGrid, ComplexField, simulate
from .regime import DataProfile, InitialData, classify
from .test_functions import SpaceTestFn, TimeTestFn

__all__ = [
    "AccuracyError", "ComplexField", "ConstantBundle", "DataProfile", "DomainError", "FodeProblem",
    "GridFunction1D", "HypothesisError", "InitialData", "M_R_zero", "NoBlowupError", "ProblemParams",
    "SpaceTestFn", "SpatialGrid", "StepSizeError", "TimeTestFn", "caputo_derivative", "check_sandwich",
    "classify", "detect_blowup", "mittag_leffler", "rl_integral", "simulate", "solve_fode",
    "testfn_method_constants", "thm6_constants",
]
