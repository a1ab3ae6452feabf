"""Certification standards: feasibility, adoption thresholds, optimal and equilibrium levels.

Every adoption threshold exists in two modes.  ``paper_literal`` evaluates the
literal closed forms; ``derived`` finds the root of the firm's profit gain
numerically (see :func:`ecsrgame.oracle.profit_threshold`).  The modes agree
for the Bertrand and Cournot markets and disagree in the mixed market, and
both are kept so that the disagreement stays visible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import oracle
from .model import ModelParams, Regime

PAPER_LITERAL = "paper_literal"
DERIVED = "derived"
MODES = (PAPER_LITERAL, DERIVED)

#: Gap below which two standards count as tied in a ranking.
RANK_TOLERANCE = 1e-9
#: Denominators smaller than this in magnitude are treated as poles.
POLE_TOLERANCE = 1e-12


class FormulaPoleError(ArithmeticError):
    """A literal closed form is evaluated at (or next to) a pole."""


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _divide(num: float, den: float, what: str) -> float:
    if abs(den) < POLE_TOLERANCE:
        raise FormulaPoleError(f"{what}: denominator {den:.3g} at pole")
    return num / den


def _pq_firm(regime: Regime, firm: int) -> int:
    """Firm index in the PQ labelling (1 = price setter, 2 = quantity setter)."""
    if regime is Regime.QP:
        return 3 - firm
    return firm


def _check_firm(firm: int) -> None:
    if firm not in (1, 2):
        raise ValueError(f"firm must be 1 or 2, got {firm}")


# --- feasibility -------------------------------------------------------------


def feasibility_bound(regime: Regime | str, firm: int, params: ModelParams) -> float:
    """Standard at which the firm's certified output equals its ECSR spending."""
    regime = Regime(regime)
    _check_firm(firm)
    A, a, g = params.A, params.alpha, params.gamma
    if regime is Regime.PP:
        return A / (2 - a + g - g * g)
    if regime is Regime.QQ:
        return A / (2 - a + g)
    if _pq_firm(regime, firm) == 1:
        return A * (2 - g - g * g) / (4 - 2 * a + a * g - 3 * g * g + a * g * g)
    return A * (2 - g) / (4 - 2 * a + a * g - 3 * g * g)


# --- adoption thresholds -----------------------------------------------------


def literal_threshold(regime: Regime | str, firm: int, params: ModelParams) -> float:
    """Literal adoption thresholds (PPU, QQU, PQU1, PQU2)."""
    regime = Regime(regime)
    _check_firm(firm)
    A, a, g = params.A, params.alpha, params.gamma
    if regime is Regime.PP:
        den = 4 - a * a + a * a * g - 3 * g * g + g ** 3
        return _divide(2 * A * a * (1 - g), den, "s_PPU")
    if regime is Regime.QQ:
        den = 4 - a * a + 4 * g + g * g
        return _divide(2 * A * a, den, "s_QQU")
    c = 2 - g - g * g
    if _pq_firm(regime, firm) == 1:
        den = 4 - 2 * a + a * g - 3 * g * g + a * g * g
        return _divide(A * c, den, "s_PQU1")
    den = (4 - 3 * g * g) ** 2 - a * a * c * c
    return _divide(A * a * c * c, den, "s_PQU2")


def adoption_threshold(
    regime: Regime | str, firm: int, params: ModelParams, mode: str = PAPER_LITERAL
) -> float:
    """Highest standard the firm is willing to meet.

    Raises:
        FormulaPoleError: literal denominator vanishes (``paper_literal``).
        ValueError: literal denominator is negative, i.e. the formula does
            not describe a positive threshold at these parameters.
        ecsrgame.oracle.OracleError: no positive root (``derived``).
    """
    _check_mode(mode)
    regime = Regime(regime)
    if mode == DERIVED:
        return oracle.profit_threshold(regime, firm, params)
    value = literal_threshold(regime, firm, params)
    if value <= 0:
        raise ValueError(f"infeasible parameterization: threshold {value:.6g} <= 0")
    return value


# --- certifier ---------------------------------------------------------------


def _pq_terms(params: ModelParams) -> Tuple[float, float, float]:
    """(K, b + c, M) for the mixed-market certifier formulas."""
    a, g = params.alpha, params.gamma
    K = 8 - 10 * g * g + 3 * g ** 4
    bc = 4 - g * (2 + g)
    M = 8 - 6 * g * g - a * bc
    return K, bc, M


def optimal_standard(regime: Regime | str, params: ModelParams) -> float:
    """Literal unconstrained NCS-maximizing standard.

    Below :func:`d_positivity_threshold` the value is negative (the literal
    expression is then a minimizer of a convex NCS).
    """
    regime = Regime(regime)
    A, a, g, d = params.A, params.alpha, params.gamma, params.d
    if regime is Regime.PP:
        m = a - (2 - g) * (1 + g)
        num = A * (a + a * g - 2 * d * m)
        den = 2 * d * m * m - a * a * (1 + g)
        return _divide(num, den, "s_PP*")
    if regime is Regime.QQ:
        k = 2 - a + g
        num = A * (a + a * g + 2 * d * k)
        den = 2 * d * k * k - a * a * (1 + g)
        return _divide(num, den, "s_QQ*")
    K, bc, M = _pq_terms(params)
    num = A * (a * K + d * bc * M)
    den = -a * a * K + d * M * M
    return _divide(num, den, "s_PQ*")


def d_positivity_threshold(regime: Regime | str, params: ModelParams) -> float:
    """Damage level above which the literal optimal standard is positive."""
    regime = Regime(regime)
    a, g = params.alpha, params.gamma
    if regime is Regime.PP:
        return (a * a + a * a * g) / (2 * (a - (2 - g) * (1 + g)) ** 2)
    if regime is Regime.QQ:
        return (a * a + a * a * g) / (2 * (2 - a + g) ** 2)
    K, _, M = _pq_terms(params)
    return a * a * K / (M * M)


def _binding_thresholds(regime: Regime, params: ModelParams, mode: str) -> Tuple[float, ...]:
    if regime in (Regime.PP, Regime.QQ):
        return (adoption_threshold(regime, 1, params, mode),)
    return (
        adoption_threshold(Regime.PQ, 1, params, mode),
        adoption_threshold(Regime.PQ, 2, params, mode),
    )


def equilibrium_standard(
    regime: Regime | str, params: ModelParams, mode: str = PAPER_LITERAL
) -> Tuple[float, ...]:
    """Participation-constrained certifier standard(s).

    Returns one value for PP and QQ.  For the mixed market the certifier
    chooses between two candidates: the price setter's threshold (only it
    certifies) and the quantity setter's threshold (both certify); both are
    returned in that order.
    """
    regime = Regime(regime)
    opt = optimal_standard(regime, params)
    return tuple(min(opt, u) for u in _binding_thresholds(regime, params, mode))


# --- rankings ----------------------------------------------------------------


@dataclass
class Ranking:
    """Standards sorted in decreasing order and compared with a claimed chain."""

    claimed: Tuple[str, ...]
    values: Dict[str, float]
    order: Tuple[str, ...]
    ties: List[Tuple[str, str]]
    matches: bool

    def as_dict(self) -> dict:
        return {
            "claimed": list(self.claimed),
            "values": dict(self.values),
            "order": list(self.order),
            "ties": [list(t) for t in self.ties],
            "matches": self.matches,
        }


def rank(values: Dict[str, float], claimed: Tuple[str, ...], tol: float = RANK_TOLERANCE) -> Ranking:
    """Rank ``values`` and check the strict chain ``claimed[0] > claimed[1] > ...``."""
    order = tuple(sorted(values, key=lambda k: (-values[k], k)))
    ties = [
        (hi, lo) for hi, lo in zip(order, order[1:]) if values[hi] - values[lo] <= tol
    ]
    matches = all(values[hi] - values[lo] > tol for hi, lo in zip(claimed, claimed[1:]))
    return Ranking(claimed, dict(values), order, ties, matches)


OPTIMAL_CHAIN = ("PP", "PQ", "QQ")
EQUILIBRIUM_CHAIN = ("PQ1", "QQ", "PP", "PQ2")


def rank_optimal_standards(params: ModelParams) -> Ranking:
    values = {r: optimal_standard(r, params) for r in OPTIMAL_CHAIN}
    return rank(values, OPTIMAL_CHAIN)


def equilibrium_thresholds(params: ModelParams, mode: str = PAPER_LITERAL) -> Dict[str, float]:
    """The four candidate uniform standards keyed PQ1, QQ, PP, PQ2."""
    return {
        "PQ1": adoption_threshold(Regime.PQ, 1, params, mode),
        "QQ": adoption_threshold(Regime.QQ, 1, params, mode),
        "PP": adoption_threshold(Regime.PP, 1, params, mode),
        "PQ2": adoption_threshold(Regime.PQ, 2, params, mode),
    }


def rank_equilibrium_standards(params: ModelParams, mode: str = PAPER_LITERAL) -> Ranking:
    return rank(equilibrium_thresholds(params, mode), EQUILIBRIUM_CHAIN)


# --- bundle ------------------------------------------------------------------


@dataclass
class StandardsBundle:
    """Every certification quantity for one economy, in both modes."""

    params: ModelParams
    feasibility: Dict[str, float]
    thresholds: Dict[str, Dict[str, Optional[float]]]
    optimal: Dict[str, Optional[float]]
    optimal_valid: Dict[str, bool]
    d_min: Dict[str, float]
    equilibrium: Dict[str, Dict[str, Optional[List[float]]]]
    rankings: Dict[str, Optional[dict]]
    warnings: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        p = self.params
        return {
            "params": {"A": p.A, "alpha": p.alpha, "gamma": p.gamma, "d": p.d},
            "feasibility": self.feasibility,
            "thresholds": self.thresholds,
            "optimal": self.optimal,
            "optimal_valid": self.optimal_valid,
            "d_min": self.d_min,
            "equilibrium": self.equilibrium,
            "rankings": self.rankings,
            "warnings": list(self.warnings),
        }


_THRESHOLD_KEYS = {"pp": (Regime.PP, 1), "qq": (Regime.QQ, 1), "pq1": (Regime.PQ, 1), "pq2": (Regime.PQ, 2)}
_REGIME_KEYS = {"pp": Regime.PP, "qq": Regime.QQ, "pq": Regime.PQ}


def _denominator_warnings(params: ModelParams) -> List[str]:
    """Sign scan of the literal denominators."""
    A, a, g, d = params.A, params.alpha, params.gamma, params.d
    m = a - (2 - g) * (1 + g)
    k = 2 - a + g
    K, _, M = _pq_terms(params)
    c = 2 - g - g * g
    dens = {
        "s_PPU": 4 - a * a + a * a * g - 3 * g * g + g ** 3,
        "s_QQU": 4 - a * a + 4 * g + g * g,
        "s_PQU1": 4 - 2 * a + a * g - 3 * g * g + a * g * g,
        "s_PQU2": (4 - 3 * g * g) ** 2 - a * a * c * c,
        "s_PP*": 2 * d * m * m - a * a * (1 + g),
        "s_QQ*": 2 * d * k * k - a * a * (1 + g),
        "s_PQ*": -a * a * K + d * M * M,
    }
    out = []
    for name, den in dens.items():
        if abs(den) < 1e-9:
            out.append(f"{name}: denominator {den:.3g} is at a pole")
        elif den < 0:
            out.append(f"{name}: denominator {den:.6g} is negative")
    return out


def standards_bundle(params: ModelParams) -> StandardsBundle:
    """Compute all standards for ``params``; failures become warnings."""
    warnings = _denominator_warnings(params)
    feasibility = {
        "pp": feasibility_bound(Regime.PP, 1, params),
        "qq": feasibility_bound(Regime.QQ, 1, params),
        "pq1": feasibility_bound(Regime.PQ, 1, params),
        "pq2": feasibility_bound(Regime.PQ, 2, params),
    }
    thresholds: Dict[str, Dict[str, Optional[float]]] = {}
    for key, (regime, firm) in _THRESHOLD_KEYS.items():
        thresholds[key] = {}
        for mode in MODES:
            try:
                thresholds[key][mode] = adoption_threshold(regime, firm, params, mode)
            except (ArithmeticError, ValueError, oracle.OracleError) as exc:
                thresholds[key][mode] = None
                warnings.append(f"threshold {key} ({mode}): {exc}")

    d_min = {key: d_positivity_threshold(r, params) for key, r in _REGIME_KEYS.items()}
    optimal: Dict[str, Optional[float]] = {}
    optimal_valid: Dict[str, bool] = {}
    for key, regime in _REGIME_KEYS.items():
        try:
            optimal[key] = optimal_standard(regime, params)
        except FormulaPoleError as exc:
            optimal[key] = None
            warnings.append(str(exc))
        optimal_valid[key] = optimal[key] is not None and optimal[key] > 0 and params.d > d_min[key]
        if not optimal_valid[key]:
            warnings.append(f"optimal standard {key} invalid: d={params.d:g} <= d_min={d_min[key]:.6g}")

    equilibrium: Dict[str, Dict[str, Optional[List[float]]]] = {}
    for key, regime in _REGIME_KEYS.items():
        equilibrium[key] = {}
        for mode in MODES:
            try:
                equilibrium[key][mode] = list(equilibrium_standard(regime, params, mode))
            except (ArithmeticError, ValueError, oracle.OracleError) as exc:
                equilibrium[key][mode] = None
                warnings.append(f"equilibrium standard {key} ({mode}): {exc}")

    rankings: Dict[str, Optional[dict]] = {}
    try:
        rankings["optimal"] = rank_optimal_standards(params).as_dict()
    except FormulaPoleError as exc:
        rankings["optimal"] = None
        warnings.append(f"optimal ranking: {exc}")
    for mode in MODES:
        try:
            rankings[f"equilibrium_{mode}"] = rank_equilibrium_standards(params, mode).as_dict()
        except (ArithmeticError, ValueError, oracle.OracleError) as exc:
            rankings[f"equilibrium_{mode}"] = None
            warnings.append(f"equilibrium ranking ({mode}): {exc}")

    return StandardsBundle(
        params=params,
        feasibility=feasibility,
        thresholds=thresholds,
        optimal=optimal,
        optimal_valid=optimal_valid,
        d_min=d_min,
        equilibrium=equilibrium,
        rankings=rankings,
        warnings=warnings,
    )
