"""First-stage price/quantity contract game under a uniform standard.

Each cell of the 2x2 game holds the stage-3 profits of the regime the two
contract choices induce.  In ``literal`` participation every cell uses
both-certified payoffs at the standard.  In
``aware`` participation each cell first solves a 2x2 certification game
(certify or not, given the rival's choice) and uses the payoffs of the
selected profile.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import closed_form
from .model import CertProfile, ModelParams, Regime

LITERAL = "literal"
AWARE = "aware"
PARTICIPATION_MODES = (LITERAL, AWARE)
CHOICES = ("P", "Q")
TIE_TOLERANCE = 1e-9

PROP5A = "Prop5a pattern"
PROP5B = "Prop5b pattern"
OTHER = "other"

Profile = Tuple[str, str]
Payoffs = Tuple[float, float]


@dataclass(frozen=True)
class CellProvenance:
    solver: str
    profile: Tuple[int, int]
    flag: Optional[str] = None

    def as_dict(self) -> dict:
        return {"solver": self.solver, "profile": list(self.profile), "flag": self.flag}


@dataclass
class GameMatrix:
    """Payoff pairs indexed by (firm 1 choice, firm 2 choice)."""

    cells: Dict[Profile, Payoffs]
    provenance: Dict[Profile, CellProvenance]
    s: float
    participation: str

    def payoff(self, c1: str, c2: str) -> Payoffs:
        return self.cells[(c1, c2)]

    def swapped(self) -> "GameMatrix":
        """Relabel firms: cell (a, b) becomes cell (b, a) with payoffs swapped."""
        cells = {(b, a): (v[1], v[0]) for (a, b), v in self.cells.items()}
        prov = {
            (b, a): CellProvenance(p.solver, (p.profile[1], p.profile[0]), p.flag)
            for (a, b), p in self.provenance.items()
        }
        return GameMatrix(cells, prov, self.s, self.participation)

    def as_dict(self) -> dict:
        return {
            "s": self.s,
            "participation": self.participation,
            "cells": [
                {
                    "firm1": a,
                    "firm2": b,
                    "pi1": self.cells[(a, b)][0],
                    "pi2": self.cells[(a, b)][1],
                    "provenance": self.provenance[(a, b)].as_dict(),
                }
                for a in CHOICES
                for b in CHOICES
            ],
        }


@dataclass
class NashResult:
    equilibria: List[Profile]
    weak: List[Profile] = field(default_factory=list)
    dominant: Dict[int, Optional[str]] = field(default_factory=dict)
    tie_tolerance: float = TIE_TOLERANCE

    @property
    def profiles(self) -> frozenset:
        return frozenset(self.equilibria)

    def as_dict(self) -> dict:
        return {
            "equilibria": ["".join(p) for p in self.equilibria],
            "weak": ["".join(p) for p in self.weak],
            "dominant": {str(k): v for k, v in sorted(self.dominant.items())},
            "tie_tolerance": self.tie_tolerance,
        }


def _pure_equilibria(
    payoffs: Dict[tuple, Payoffs],
    actions: Sequence,
    tol: float,
) -> Tuple[List[tuple], List[tuple]]:
    """Pure profiles where no unilateral deviation gains more than ``tol``.

    Returns ``(equilibria, weak)``; weak equilibria have some deviation within
    ``tol`` of the equilibrium payoff.
    """
    eq, weak = [], []
    for a1 in actions:
        for a2 in actions:
            u1, u2 = payoffs[(a1, a2)]
            gains1 = [payoffs[(b, a2)][0] - u1 for b in actions if b != a1]
            gains2 = [payoffs[(a1, b)][1] - u2 for b in actions if b != a2]
            gains = gains1 + gains2
            if all(g <= tol for g in gains):
                eq.append((a1, a2))
                if any(g > -tol for g in gains):
                    weak.append((a1, a2))
    return eq, weak


def _strictly_dominant(
    payoffs: Dict[tuple, Payoffs], actions: Sequence, firm: int, tol: float
) -> Optional[str]:
    for x in actions:
        others = [y for y in actions if y != x]
        ok = True
        for opp in actions:
            for y in others:
                if firm == 1:
                    ok &= payoffs[(x, opp)][0] > payoffs[(y, opp)][0] + tol
                else:
                    ok &= payoffs[(opp, x)][1] > payoffs[(opp, y)][1] + tol
        if ok:
            return x
    return None


def pure_nash(matrix: GameMatrix, tie_tolerance: float = TIE_TOLERANCE) -> NashResult:
    """All pure-strategy Nash equilibria of the contract game."""
    eq, weak = _pure_equilibria(matrix.cells, CHOICES, tie_tolerance)
    dominant = {f: _strictly_dominant(matrix.cells, CHOICES, f, tie_tolerance) for f in (1, 2)}
    return NashResult(eq, weak, dominant, tie_tolerance)


# --- participation stage -----------------------------------------------------

_INNER_ORDER = ((1, 1), (1, 0), (0, 1), (0, 0))


def participation_game(
    regime: Regime | str, s: float, params: ModelParams, tie_tolerance: float = TIE_TOLERANCE
) -> Tuple[Tuple[int, int], Payoffs, Optional[str]]:
    """Solve the certify-or-not game inside one regime.

    Returns the selected profile ``(e1, e2)``, its payoffs and a flag
    (``None``, ``"ambiguous"`` or ``"no_pure_equilibrium"``).  Among several
    equilibria the one Pareto-dominant for the firms is selected.
    """
    regime = Regime(regime)
    payoffs = {}
    for e1, e2 in _INNER_ORDER:
        eq = closed_form.solve(regime, CertProfile(e1, e2, s), params)
        payoffs[(e1, e2)] = (eq.pi1, eq.pi2)
    eqs, _ = _pure_equilibria(payoffs, (1, 0), tie_tolerance)
    eqs = sorted(eqs, key=_INNER_ORDER.index)
    if not eqs:
        return (0, 0), payoffs[(0, 0)], "no_pure_equilibrium"
    if len(eqs) == 1:
        return eqs[0], payoffs[eqs[0]], None
    for cand in eqs:
        u = payoffs[cand]
        if all(u[0] >= payoffs[o][0] - tie_tolerance and u[1] >= payoffs[o][1] - tie_tolerance for o in eqs):
            return cand, u, None
    return eqs[0], payoffs[eqs[0]], "ambiguous"


def payoff_matrix(s: float, params: ModelParams, participation: str = LITERAL) -> GameMatrix:
    """Contract-game payoffs at a uniform standard ``s``."""
    if s < 0:
        raise ValueError("standard must be non-negative")
    if participation not in PARTICIPATION_MODES:
        raise ValueError(f"participation must be one of {PARTICIPATION_MODES}")
    cells: Dict[Profile, Payoffs] = {}
    prov: Dict[Profile, CellProvenance] = {}
    for c1 in CHOICES:
        for c2 in CHOICES:
            regime = Regime.from_choices(c1, c2)
            if participation == LITERAL:
                eq = closed_form.solve(regime, CertProfile.both(s), params)
                cells[(c1, c2)] = (eq.pi1, eq.pi2)
                prov[(c1, c2)] = CellProvenance("closed_form", (1, 1))
            else:
                profile, pay, flag = participation_game(regime, s, params)
                cells[(c1, c2)] = pay
                solver = "closed_form" if profile[0] == profile[1] else "oracle"
                prov[(c1, c2)] = CellProvenance(solver, profile, flag)
    return GameMatrix(cells, prov, s, participation)


@dataclass
class SpneResult:
    matrix: GameMatrix
    nash: NashResult
    tag: str

    def as_dict(self) -> dict:
        return {"matrix": self.matrix.as_dict(), "nash": self.nash.as_dict(), "tag": self.tag}


def classify(nash: NashResult) -> str:
    if nash.profiles == {("Q", "Q")}:
        return PROP5A
    if nash.profiles == {("P", "Q"), ("Q", "P")}:
        return PROP5B
    return OTHER


def spne_under_uniform_standard(
    s: float,
    params: ModelParams,
    participation: str = LITERAL,
    tie_tolerance: float = TIE_TOLERANCE,
) -> SpneResult:
    """Contract-choice equilibrium when the certifier fixes ``s`` for every regime."""
    matrix = payoff_matrix(s, params, participation)
    nash = pure_nash(matrix, tie_tolerance)
    return SpneResult(matrix, nash, classify(nash))


def deviation_check(matrix: GameMatrix, profiles: Iterable[Profile], tol: float = TIE_TOLERANCE) -> bool:
    """Brute-force check that no firm gains by deviating from any given profile."""
    for a1, a2 in profiles:
        u1, u2 = matrix.payoff(a1, a2)
        for b in CHOICES:
            if matrix.payoff(b, a2)[0] > u1 + tol or matrix.payoff(a1, b)[1] > u2 + tol:
                return False
    return True
