"""Certified environmental CSR in a price/quantity duopoly.

Third-stage market equilibria, adoption thresholds and certifier standards,
the first-stage contract game, and grid verification of analytical claims.
"""

from .closed_form import solve, solve_pp, solve_pq, solve_qp, solve_qq
from .contract_game import GameMatrix, NashResult, payoff_matrix, pure_nash, spne_under_uniform_standard
from .model import CertProfile, Equilibrium, ModelParams, ParameterError, Regime, evaluate_outcome
from .oracle import ConvergenceError, OracleConfig, OracleError, nash_fixed_point
from .standards import StandardsBundle, adoption_threshold, optimal_standard, standards_bundle
from .verifier import ClaimReport, Grid, default_grid, full_report, verify_claim

__version__ = "0.1.0"

__all__ = [
    "CertProfile",
    "ClaimReport",
    "ConvergenceError",
    "Equilibrium",
    "GameMatrix",
    "Grid",
    "ModelParams",
    "NashResult",
    "OracleConfig",
    "OracleError",
    "ParameterError",
    "Regime",
    "StandardsBundle",
    "adoption_threshold",
    "default_grid",
    "evaluate_outcome",
    "full_report",
    "nash_fixed_point",
    "optimal_standard",
    "payoff_matrix",
    "pure_nash",
    "solve",
    "solve_pp",
    "solve_pq",
    "solve_qp",
    "solve_qq",
    "spne_under_uniform_standard",
    "standards_bundle",
    "verify_claim",
]
