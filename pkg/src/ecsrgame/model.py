"""Primitives of the certified differentiated duopoly.

A representative consumer buys two substitute goods.  A firm holding the
ECSR certificate (``e_i = 1``) raises its demand intercept by ``alpha * s``
and pays ``s**2`` for the ECSR spending; production is costless and each unit
of output emits one unit of pollution, of which certified firms abate ``s``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

#: Absolute tolerance for equality checks on quantities scaled by A = O(1).
ABS_TOL = 1e-9


class ParameterError(ValueError):
    """Raised when an economy or certification profile is not admissible."""


@dataclass(frozen=True)
class ModelParams:
    """Exogenous parameters of one economy.

    Attributes:
        A: demand intercept, ``A > 0``.
        alpha: consumer preference for certified ECSR, in ``(0, 1)``.
        gamma: product substitutability, in ``(0, 1)``.
        d: marginal environmental damage, ``d > 0``.
    """

    A: float = 1.0
    alpha: float = 0.5
    gamma: float = 0.5
    d: float = 1.0

    def __post_init__(self) -> None:
        for name in ("A", "alpha", "gamma", "d"):
            value = getattr(self, name)
            real = isinstance(value, numbers.Real) and not isinstance(value, bool)
            if not real or not math.isfinite(value):
                raise ParameterError(f"{name} must be a finite number, got {value!r}")
        if self.A <= 0:
            raise ParameterError("A must be positive")
        if not 0 < self.alpha < 1:
            raise ParameterError("alpha out of (0,1)")
        if not 0 < self.gamma < 1:
            raise ParameterError("gamma out of (0,1)")
        if self.d <= 0:
            raise ParameterError("d must be positive")

    def replace(self, **changes: float) -> "ModelParams":
        fields = {"A": self.A, "alpha": self.alpha, "gamma": self.gamma, "d": self.d}
        fields.update(changes)
        return ModelParams(**fields)


@dataclass(frozen=True)
class CertProfile:
    """Which firms hold the certificate, and the standard they meet."""

    e1: int = 0
    e2: int = 0
    s: float = 0.0

    def __post_init__(self) -> None:
        if self.e1 not in (0, 1) or self.e2 not in (0, 1):
            raise ParameterError("certification indicators must be 0 or 1")
        if not math.isfinite(self.s) or self.s < 0:
            raise ParameterError("standard s must be non-negative")

    @property
    def flags(self) -> Tuple[int, int]:
        return (self.e1, self.e2)

    @property
    def symmetric(self) -> bool:
        return self.e1 == self.e2

    def swapped(self) -> "CertProfile":
        return CertProfile(self.e2, self.e1, self.s)

    @classmethod
    def none(cls) -> "CertProfile":
        return cls(0, 0, 0.0)

    @classmethod
    def both(cls, s: float) -> "CertProfile":
        return cls(1, 1, s)


class Regime(str, Enum):
    """Firm 1's strategic variable followed by firm 2's (P = price, Q = quantity)."""

    PP = "PP"
    QQ = "QQ"
    PQ = "PQ"
    QP = "QP"

    @property
    def variables(self) -> Tuple[str, str]:
        return (self.value[0], self.value[1])

    @classmethod
    def from_choices(cls, first: str, second: str) -> "Regime":
        return cls(first + second)


@dataclass(frozen=True)
class Equilibrium:
    """Third-stage market outcome.

    ``admissible`` is False when some quantity or price is not strictly
    positive (no interior solution); the numbers are still reported.
    """

    q1: float
    q2: float
    p1: float
    p2: float
    pi1: float
    pi2: float
    cs: float
    emissions: float
    ncs: float
    admissible: bool = True

    def profit(self, firm: int) -> float:
        return self.pi1 if firm == 1 else self.pi2

    def swapped(self) -> "Equilibrium":
        return Equilibrium(
            q1=self.q2, q2=self.q1, p1=self.p2, p2=self.p1,
            pi1=self.pi2, pi2=self.pi1, cs=self.cs,
            emissions=self.emissions, ncs=self.ncs, admissible=self.admissible,
        )

    def as_dict(self) -> dict:
        return {
            "q1": self.q1, "q2": self.q2, "p1": self.p1, "p2": self.p2,
            "pi1": self.pi1, "pi2": self.pi2, "cs": self.cs,
            "emissions": self.emissions, "ncs": self.ncs,
            "admissible": self.admissible,
        }


NUMERIC_FIELDS = ("q1", "q2", "p1", "p2", "pi1", "pi2", "cs", "emissions", "ncs")


def max_field_deviation(a: Equilibrium, b: Equilibrium) -> float:
    return max(abs(getattr(a, f) - getattr(b, f)) for f in NUMERIC_FIELDS)


def intercepts(cert: CertProfile, params: ModelParams) -> Tuple[float, float]:
    """Effective demand intercepts ``A + alpha * e_i * s``."""
    shift = params.alpha * cert.s
    return params.A + shift * cert.e1, params.A + shift * cert.e2


def _check_quantities(q1: float, q2: float) -> None:
    if q1 < 0 or q2 < 0:
        raise ParameterError("quantities must be non-negative")


def utility(q1: float, q2: float, cert: CertProfile, params: ModelParams) -> float:
    """Quasi-linear utility of the representative consumer."""
    _check_quantities(q1, q2)
    a1, a2 = intercepts(cert, params)
    g = params.gamma
    return a1 * q1 + a2 * q2 - (q1 * q1 + 2 * g * q1 * q2 + q2 * q2) / 2


def demand_from_prices(
    p1: float, p2: float, cert: CertProfile, params: ModelParams
) -> Tuple[float, float]:
    """Direct demands.  Negative values are returned as-is."""
    a1, a2 = intercepts(cert, params)
    g = params.gamma
    det = 1 - g * g
    q1 = (a1 - g * a2 - p1 + g * p2) / det
    q2 = (a2 - g * a1 - p2 + g * p1) / det
    return q1, q2


def inverse_demand(
    q1: float, q2: float, cert: CertProfile, params: ModelParams
) -> Tuple[float, float]:
    """Inverse demands ``p_i = A - q_i - gamma q_j + alpha e_i s``."""
    _check_quantities(q1, q2)
    a1, a2 = intercepts(cert, params)
    g = params.gamma
    return a1 - q1 - g * q2, a2 - q2 - g * q1


def consumer_surplus(q1: float, q2: float, params: ModelParams) -> float:
    g = params.gamma
    return (q1 * q1 + 2 * g * q1 * q2 + q2 * q2) / 2


def net_emissions(q1: float, q2: float, cert: CertProfile) -> float:
    return q1 + q2 - (cert.e1 + cert.e2) * cert.s


def evaluate_outcome(
    q1: float,
    q2: float,
    p1: float,
    p2: float,
    cert: CertProfile,
    params: ModelParams,
    *,
    check: bool = True,
) -> Equilibrium:
    """Fill profits, consumer surplus, emissions and NCS for a market point.

    With ``check=True`` negative quantities or prices raise
    :class:`ParameterError`; solvers pass ``check=False`` and record
    admissibility on the result instead.
    """
    if check and min(q1, q2, p1, p2) < 0:
        raise ParameterError("quantities and prices must be non-negative")
    cost = cert.s * cert.s
    pi1 = p1 * q1 - cert.e1 * cost
    pi2 = p2 * q2 - cert.e2 * cost
    cs = consumer_surplus(q1, q2, params)
    emissions = net_emissions(q1, q2, cert)
    ncs = cs - params.d * emissions * emissions / 2
    admissible = min(q1, q2, p1, p2) > 0
    return Equilibrium(q1, q2, p1, p2, pi1, pi2, cs, emissions, ncs, admissible)
