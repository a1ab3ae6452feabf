"""Numerical ground truth for the closed forms.

Stage-3 equilibria are found by Gauss-Seidel iterated best response, each
best response by golden-section search on the firm's profit built from the
demand primitives.  The certifier's problem and the adoption thresholds are
solved numerically as well (golden section on NCS, bisection on the profit
gain), without touching any literal threshold or optimal-standard formula.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

from scipy import optimize

from . import closed_form
from .model import (
    CertProfile,
    Equilibrium,
    ModelParams,
    Regime,
    demand_from_prices,
    evaluate_outcome,
    intercepts,
    inverse_demand,
)

log = logging.getLogger(__name__)

_INV_PHI = (math.sqrt(5) - 1) / 2


class OracleError(RuntimeError):
    """A numerical routine failed (bracketing, non-concavity, no root)."""


class ConvergenceError(OracleError):
    """Iterated best response hit ``max_iterations``."""


@dataclass(frozen=True)
class OracleConfig:
    """Tolerances for the numerical oracle.

    ``bracket_scale`` sets the best-response search interval
    ``[0, bracket_scale * max(A, a1, a2)]`` where ``a_i`` are the certified
    demand intercepts.  ``polish_fraction`` is the relative bracket width at
    which golden-section hands over to a single parabolic step.
    """

    br_tolerance: float = 1e-12
    max_iterations: int = 10_000
    bracket_scale: float = 2.0
    golden_tolerance: float = 1e-12
    polish_fraction: float = 1e-2

    def __post_init__(self) -> None:
        if min(self.br_tolerance, self.golden_tolerance, self.polish_fraction) <= 0:
            raise ValueError("tolerances must be positive")
        if self.bracket_scale <= 0:
            raise ValueError("bracket upper bound must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


DEFAULT_CONFIG = OracleConfig()


def golden_section_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float = 1e-12,
    polish_fraction: Optional[float] = 1e-2,
    max_iter: int = 500,
) -> Tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[lo, hi]``.

    Plain golden-section compares function values, which cannot locate a
    smooth maximum more finely than about ``sqrt(eps)``.  With
    ``polish_fraction`` set, the search stops once the bracket has shrunk by
    that factor and finishes with one parabolic-interpolation step through
    well separated points, exact for quadratic objectives.

    Returns:
        ``(argmax, max)``.
    """
    if not hi > lo:
        raise OracleError(f"empty bracket [{lo}, {hi}]")
    stop = tol
    if polish_fraction is not None:
        stop = max(tol, polish_fraction * (hi - lo))
    a, b = lo, hi
    fa, fb = f(a), f(b)
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= stop:
            break
        if f1 < f2:
            a, fa = x1, f1
            x1, f1 = x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, fb = x2, f2
            x2, f2 = x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)

    points = sorted([(a, fa), (x1, f1), (x2, f2), (b, fb)])
    best_i = max(range(4), key=lambda i: points[i][1])
    best_x, best_f = points[best_i]
    if polish_fraction is None:
        return best_x, best_f

    # Parabola through the best point and its neighbours (or the three
    # leftmost/rightmost points when the best point is an endpoint).
    i = min(max(best_i, 1), 2)
    (xa, ya), (xb, yb), (xc, yc) = points[i - 1], points[i], points[i + 1]
    num = (xb - xa) ** 2 * (yb - yc) - (xb - xc) ** 2 * (yb - ya)
    den = (xb - xa) * (yb - yc) - (xb - xc) * (yb - ya)
    if den == 0:
        return best_x, best_f
    vertex = xb - 0.5 * num / den
    vertex = min(max(vertex, a), b)
    fv = f(vertex)
    if fv >= best_f - 1e-15 * max(1.0, abs(best_f)):
        return vertex, fv
    return best_x, best_f


# --- stage 3 -----------------------------------------------------------------


def market_point(
    regime: Regime | str, x1: float, x2: float, cert: CertProfile, params: ModelParams
) -> Tuple[float, float, float, float]:
    """Quantities and prices ``(q1, q2, p1, p2)`` given both strategic values.

    ``x_i`` is firm i's price or quantity according to ``regime``.  No value
    is clipped.
    """
    if not isinstance(regime, Regime):
        regime = Regime(regime)
    g = params.gamma
    if regime is Regime.QQ:
        q1, q2 = x1, x2
        p1, p2 = inverse_demand(q1, q2, cert, params)
        return q1, q2, p1, p2
    if regime is Regime.PP:
        p1, p2 = x1, x2
        q1, q2 = demand_from_prices(p1, p2, cert, params)
        return q1, q2, p1, p2
    a1, a2 = intercepts(cert, params)
    if regime is Regime.PQ:
        p1, q2 = x1, x2
        q1 = a1 - g * q2 - p1
        p2 = a2 - q2 - g * q1
        return q1, q2, p1, p2
    q1, p2 = x1, x2
    q2 = a2 - g * q1 - p2
    p1 = a1 - q1 - g * q2
    return q1, q2, p1, p2


def _regime_for(firm: int, own_variable: str, opponent_variable: str) -> Regime:
    if firm == 1:
        return Regime.from_choices(own_variable, opponent_variable)
    if firm == 2:
        return Regime.from_choices(opponent_variable, own_variable)
    raise ValueError(f"firm must be 1 or 2, got {firm}")


def profit_given(
    firm: int,
    own_variable: str,
    own_value: float,
    opponent_value: float,
    opponent_variable: str,
    cert: CertProfile,
    params: ModelParams,
) -> float:
    """Profit of ``firm`` when it plays ``own_value`` against ``opponent_value``."""
    regime = _regime_for(firm, own_variable, opponent_variable)
    if firm == 1:
        q1, q2, p1, p2 = market_point(regime, own_value, opponent_value, cert, params)
        return p1 * q1 - cert.e1 * cert.s * cert.s
    q1, q2, p1, p2 = market_point(regime, opponent_value, own_value, cert, params)
    return p2 * q2 - cert.e2 * cert.s * cert.s


def best_response_line(
    firm: int,
    own_variable: str,
    opponent_variable: str,
    cert: CertProfile,
    params: ModelParams,
) -> Tuple[float, float]:
    """Intercept and slope of the (unclipped) analytic best response.

    The profit is quadratic in the firm's own variable, so its vertex is
    affine in the opponent's strategic value.
    """
    a1, a2 = intercepts(cert, params)
    own_a, opp_a = (a1, a2) if firm == 1 else (a2, a1)
    g = params.gamma
    key = own_variable + opponent_variable
    if key == "QQ":
        return own_a / 2, -g / 2
    if key == "PQ":
        return own_a / 2, -g / 2
    if key == "PP":
        return (own_a - g * opp_a) / 2, g / 2
    if key == "QP":
        k = 2 * (1 - g * g)
        return (own_a - g * opp_a) / k, g / k
    raise ValueError(f"unknown strategic variables {key!r}")


def analytic_best_response(
    firm: int,
    own_variable: str,
    opponent_value: float,
    opponent_variable: str,
    cert: CertProfile,
    params: ModelParams,
) -> float:
    u, v = best_response_line(firm, own_variable, opponent_variable, cert, params)
    return max(0.0, u + v * opponent_value)


def best_response(
    firm: int,
    own_variable: str,
    opponent_value: float,
    opponent_variable: str,
    cert: CertProfile,
    params: ModelParams,
    config: OracleConfig = DEFAULT_CONFIG,
) -> float:
    """Profit-maximizing own price or quantity, found numerically."""
    if opponent_value < 0:
        raise ValueError("opponent strategy must be non-negative")
    hi = config.bracket_scale * max(params.A, *intercepts(cert, params))
    regime = _regime_for(firm, own_variable, opponent_variable)
    fee = cert.s * cert.s * (cert.e1 if firm == 1 else cert.e2)

    if firm == 1:

        def objective(x: float) -> float:
            q1, _, p1, _ = market_point(regime, x, opponent_value, cert, params)
            return p1 * q1 - fee

    else:

        def objective(x: float) -> float:
            _, q2, _, p2 = market_point(regime, opponent_value, x, cert, params)
            return p2 * q2 - fee

    x, _ = golden_section_max(
        objective, 0.0, hi, tol=config.golden_tolerance, polish_fraction=config.polish_fraction
    )
    return x


def strategies_of(regime: Regime | str, eq: Equilibrium) -> Tuple[float, float]:
    regime = Regime(regime)
    x1 = eq.p1 if regime.variables[0] == "P" else eq.q1
    x2 = eq.p2 if regime.variables[1] == "P" else eq.q2
    return x1, x2


_SWEEPS = 40


def nash_fixed_point(
    regime: Regime | str,
    cert: CertProfile,
    params: ModelParams,
    config: OracleConfig = DEFAULT_CONFIG,
    *,
    method: str = "golden",
) -> Equilibrium:
    """Stage-3 Nash equilibrium by iterated best response.

    ``method="golden"`` alternates numerically searched best responses
    (firm 1, then firm 2).  In the mixed markets with close substitutes that
    iteration cycles outward, so after ``_SWEEPS`` rounds without convergence
    the fixed point of the composed reaction ``x1 -> BR1(BR2(x1))`` is found
    by bracketing instead.  Either way the result is accepted only if a
    further round of best responses moves both strategies by less than
    ``config.br_tolerance`` relative to their size (best responses grow steep
    as ``gamma -> 1`` and amplify rounding).  ``method="direct"`` intersects the two
    analytic best-response lines, which is exact and fast enough for grid
    sweeps.
    """
    regime = Regime(regime)
    v1, v2 = regime.variables
    if method == "direct":
        u1, s1 = best_response_line(1, v1, v2, cert, params)
        u2, s2 = best_response_line(2, v2, v1, cert, params)
        x1 = (u1 + s1 * u2) / (1 - s1 * s2)
        x2 = u2 + s2 * x1
    elif method == "golden":

        def br1(x: float) -> float:
            return best_response(1, v1, x, v2, cert, params, config)

        def br2(x: float) -> float:
            return best_response(2, v2, x, v1, cert, params, config)

        x1 = x2 = 0.0
        converged = False
        for _ in range(min(_SWEEPS, config.max_iterations)):
            n1 = br1(x2)
            n2 = br2(n1)
            moved = max(abs(n1 - x1), abs(n2 - x2))
            x1, x2 = n1, n2
            if moved < config.br_tolerance:
                converged = True
                break
        if not converged:
            hi = config.bracket_scale * max(params.A, *intercepts(cert, params))
            gap = lambda x: br1(br2(x)) - x  # noqa: E731
            try:
                x1 = optimize.brentq(gap, 0.0, hi, xtol=1e-15, maxiter=config.max_iterations)
            except (ValueError, RuntimeError) as exc:
                raise ConvergenceError(f"no reaction fixed point in [0, {hi:g}]: {exc}") from exc
            x2 = br2(x1)
        n1 = br1(x2)
        n2 = br2(n1)
        moved = max(abs(n1 - x1), abs(n2 - x2))
        if moved >= config.br_tolerance * max(1.0, abs(x1), abs(x2)):
            raise ConvergenceError(
                f"best responses still move by {moved:.3g} "
                f"(regime={regime.value}, params={params})"
            )
    else:
        raise ValueError(f"unknown method {method!r}")
    q1, q2, p1, p2 = market_point(regime, x1, x2, cert, params)
    return evaluate_outcome(q1, q2, p1, p2, cert, params, check=False)


# --- stage 2 -----------------------------------------------------------------


def _stage3(stage3: str) -> Callable[[Regime, CertProfile, ModelParams], Equilibrium]:
    if stage3 == "closed_form":
        return lambda r, c, p: closed_form.solve(r, c, p)
    if stage3 in ("golden", "direct"):
        return lambda r, c, p: nash_fixed_point(r, c, p, method=stage3)
    raise ValueError(f"unknown stage-3 solver {stage3!r}")


def ncs_of_standard(
    regime: Regime | str, s: float, params: ModelParams, *, stage3: str = "closed_form"
) -> float:
    """NCS when both firms certify at standard ``s``."""
    return _stage3(stage3)(Regime(regime), CertProfile.both(s), params).ncs


def maximize_ncs_over_s(
    regime: Regime | str,
    params: ModelParams,
    constraint: Optional[float] = None,
    config: OracleConfig = DEFAULT_CONFIG,
    *,
    stage3: str = "closed_form",
    max_expansions: int = 40,
) -> Tuple[float, float]:
    """Certifier's NCS-maximizing standard with both firms certified.

    Searches ``[0, constraint]`` when a constraint is given, else
    ``[0, 2A/alpha]``, doubling the upper end while the maximizer sits on it.

    Raises:
        OracleError: NCS is not concave in ``s`` or no interior maximizer
            was found.
    """
    regime = Regime(regime)
    solver = _stage3(stage3)

    def ncs(s: float) -> float:
        return solver(regime, CertProfile.both(s), params).ncs

    if constraint is not None:
        if constraint < 0:
            raise ValueError("constraint must be non-negative")
        if constraint == 0:
            return 0.0, ncs(0.0)
        hi = constraint
    else:
        hi = 2 * params.A / params.alpha

    # NCS is quadratic in s; reject convex or flat cases up front.
    mid = hi / 2
    curvature = ncs(0.0) - 2 * ncs(mid) + ncs(hi)
    if curvature >= 0:
        raise OracleError(
            f"NCS is not concave in s for regime {regime.value} at {params}"
        )

    for _ in range(max_expansions + 1):
        s_star, value = golden_section_max(
            ncs, 0.0, hi, tol=config.golden_tolerance, polish_fraction=config.polish_fraction
        )
        if constraint is not None or s_star < hi * (1 - 1e-9):
            return s_star, value
        hi *= 2
    raise OracleError(
        f"no interior NCS maximizer below {hi} for regime {regime.value} at {params}"
    )


def profit_gain(
    regime: Regime | str,
    firm: int,
    s: float,
    params: ModelParams,
    *,
    stage3: str = "closed_form",
) -> float:
    """Firm's profit with both firms certified at ``s`` minus its profit with neither."""
    solver = _stage3(stage3)
    regime = Regime(regime)
    certified = solver(regime, CertProfile.both(s), params).profit(firm)
    plain = solver(regime, CertProfile.none(), params).profit(firm)
    return certified - plain


@lru_cache(maxsize=4096)
def profit_threshold(
    regime: Regime | str,
    firm: int,
    params: ModelParams,
    *,
    stage3: str = "closed_form",
    eps: float = 1e-12,
) -> float:
    """Standard at which ``firm`` is indifferent between certifying or not.

    Bracketed root search on the profit gain over ``[eps, 2A/alpha]``
    (Brent's method, which falls back to bisection steps).

    Raises:
        OracleError: the gain does not turn negative inside the bracket.
    """
    lo, hi = eps, 2 * params.A / params.alpha
    solver = _stage3(stage3)
    regime = Regime(regime)
    plain = solver(regime, CertProfile.none(), params).profit(firm)

    def gain(s: float) -> float:
        return solver(regime, CertProfile.both(s), params).profit(firm) - plain

    g_lo, g_hi = gain(lo), gain(hi)
    if not (g_lo > 0 > g_hi):
        raise OracleError(
            f"no positive adoption threshold for firm {firm} in regime "
            f"{Regime(regime).value} at {params} (gain {g_lo:.3g} .. {g_hi:.3g})"
        )
    return optimize.brentq(gain, lo, hi, xtol=1e-15, maxiter=400)
