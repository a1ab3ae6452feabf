"""Closed-form third-stage equilibria for the four contract regimes.

Only symmetric certification profiles have closed forms.  Profits,
surplus and NCS are always rebuilt from the equilibrium quantities and prices
with :func:`ecsrgame.model.evaluate_outcome`, so an error in a literal profit
expression cannot leak into results.
"""

from __future__ import annotations

from .model import CertProfile, Equilibrium, ModelParams, ParameterError, Regime, evaluate_outcome


def _require_symmetric(cert: CertProfile, who: str) -> float:
    if not cert.symmetric:
        raise ParameterError(f"{who} has no closed form for one-sided certification")
    return cert.s * cert.e1


def _intercept(cert: CertProfile, params: ModelParams) -> float:
    return params.A + params.alpha * cert.s * cert.e1


def solve_pp(cert: CertProfile, params: ModelParams) -> Equilibrium:
    """Bertrand equilibrium (both firms set prices)."""
    _require_symmetric(cert, "solve_pp")
    a = _intercept(cert, params)
    g = params.gamma
    q = a / (2 + g - g * g)
    p = (1 - g) * a / (2 - g)
    return evaluate_outcome(q, q, p, p, cert, params, check=False)


def solve_qq(cert: CertProfile, params: ModelParams) -> Equilibrium:
    """Cournot equilibrium (both firms set quantities)."""
    _require_symmetric(cert, "solve_qq")
    a = _intercept(cert, params)
    q = a / (2 + params.gamma)
    return evaluate_outcome(q, q, q, q, cert, params, check=False)


def solve_pq(cert: CertProfile, params: ModelParams) -> Equilibrium:
    """Mixed market: firm 1 sets its price, firm 2 its quantity."""
    _require_symmetric(cert, "solve_pq")
    a = _intercept(cert, params)
    g = params.gamma
    den = 4 - 3 * g * g
    q1 = (2 - g - g * g) * a / den
    q2 = (2 - g) * a / den
    p2 = (2 - g) * (1 - g) * (1 + g) * a / den
    return evaluate_outcome(q1, q2, q1, p2, cert, params, check=False)


def solve_qp(cert: CertProfile, params: ModelParams) -> Equilibrium:
    """Mirror of :func:`solve_pq`: firm 1 sets quantity, firm 2 price."""
    return solve_pq(cert.swapped(), params).swapped()


_SOLVERS = {
    Regime.PP: solve_pp,
    Regime.QQ: solve_qq,
    Regime.PQ: solve_pq,
    Regime.QP: solve_qp,
}


def solve(
    regime: Regime | str, cert: CertProfile, params: ModelParams, *, method: str = "direct"
) -> Equilibrium:
    """Equilibrium for any regime and certification profile.

    Symmetric profiles use the closed forms; one-sided certification has no
    closed form and is handed to :func:`ecsrgame.oracle.nash_fixed_point`
    with the given ``method``.
    """
    if not isinstance(regime, Regime):
        regime = Regime(regime)
    if cert.symmetric:
        return _SOLVERS[regime](cert, params)
    from . import oracle

    return oracle.nash_fixed_point(regime, cert, params, method=method)
