"""Numerical laboratory for fractional Hermite-Hadamard inequalities."""
from .bounds import BoundRecord, TheoremParams
from .expr import DualValue, ExprNode, FuncSpec, evaluate, evaluate_dual, parse
from .fracint import FracParams, hh_gap, j_minus, j_plus, lemma1_rhs
from .quad import QuadConfig, QuadResult, integrate, integrate_power_kernel
from .special import gamma, psi_cap, psi_ratio

__all__ = [
    "BoundRecord", "DualValue", "ExprNode", "FracParams", "FuncSpec", "QuadConfig",
    "QuadResult", "TheoremParams", "evaluate", "evaluate_dual", "gamma", "hh_gap",
    "integrate", "integrate_power_kernel", "j_minus", "j_plus", "lemma1_rhs", "parse",
    "psi_cap", "psi_ratio",
]
