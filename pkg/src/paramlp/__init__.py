"""Exact simplex, rank-one parametric LP analysis and parametric path following."""
from .errors import ParamLPError
from .model import (
    KktCertificate,
    LinearProgram,
    ParametricCertificate,
    ParametricPair,
    build_parametric_pair,
    kkt_check,
    orthogonal_complement,
    parametric_kkt_check,
    validate_standard_form,
)
from .parametric import Interval, phi, psi, ratio_test_single_row, sweep, theta_interval
from .pivotpath import bound_report, parametric_path_solve, synthesize_embedding
from .scalar import EXACT_ARITH, FLOAT_ARITH, Arithmetic
from .simplex import brute_force_optimum, phase1, reduced_costs, solve

__version__ = "0.1.0"

__all__ = [
    "Arithmetic", "EXACT_ARITH", "FLOAT_ARITH", "Interval", "KktCertificate", "LinearProgram",
    "ParamLPError", "ParametricCertificate", "ParametricPair", "bound_report", "brute_force_optimum",
    "build_parametric_pair", "kkt_check", "orthogonal_complement", "parametric_kkt_check",
    "parametric_path_solve", "phase1", "phi", "psi", "ratio_test_single_row", "reduced_costs",
    "solve", "sweep", "synthesize_embedding", "theta_interval", "validate_standard_form",
]
