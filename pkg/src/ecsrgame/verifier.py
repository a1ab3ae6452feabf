"""Grid scans that confirm or refute each analytical claim about the model.

A claim is a function of one economy returning whether its hypothesis holds
there, whether its conclusion holds, and the numbers involved.  Scanning a
grid produces a :class:`ClaimReport` per (claim, mode, participation).
"""

from __future__ import annotations

import itertools
import math
import os
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import closed_form, contract_game, oracle
from . import standards as st
from .model import CertProfile, ModelParams, Regime

#: Relative margin by which d must exceed a positivity bound.  Grid points
#: sitting exactly on a bound are poles of the literal optimal standards.
D_MARGIN = 1e-9
STRICT_TOL = 1e-12
THRESHOLD_AGREEMENT = 1e-9
OPTIMUM_AGREEMENT = 1e-6
FOC_STEP = 1e-6
FOC_TOLERANCE = 1e-5
DEFAULT_MAX_COUNTEREXAMPLES = 10
WORKERS_ENV = "ECSRGAME_WORKERS"

HOLDS_EVERYWHERE = "holds-everywhere"
HOLDS_ON_REGION = "holds-on-region"
FAILS_EVERYWHERE = "fails-everywhere"
VACUOUS = "vacuous"


# --- grids -------------------------------------------------------------------


def frange(start: float, stop: float, step: float) -> Tuple[float, ...]:
    """Inclusive arithmetic range with values rounded to 12 decimals."""
    if step <= 0:
        raise ValueError("step must be positive")
    if stop < start:
        raise ValueError("range stop is below start")
    n = int(math.floor((stop - start) / step + 1e-9))
    return tuple(round(start + i * step, 12) for i in range(n + 1))


def parse_range(text: str) -> Tuple[float, ...]:
    """Parse ``start:stop:step`` (or a single number) into grid values."""
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"malformed range {text!r}") from None
    if len(nums) == 1:
        return (nums[0],)
    if len(nums) != 3:
        raise ValueError(f"malformed range {text!r}; expected start:stop:step")
    return frange(*nums)


@dataclass(frozen=True)
class Grid:
    A: Tuple[float, ...] = (1.0,)
    alpha: Tuple[float, ...] = frange(0.1, 0.9, 0.1)
    gamma: Tuple[float, ...] = frange(0.05, 0.95, 0.05)
    d: Tuple[float, ...] = frange(0.1, 3.0, 0.1)

    def points(self) -> List[ModelParams]:
        """Every admissible point, sorted by (alpha, gamma, d, A)."""
        out = []
        for a, g, d, A in itertools.product(
            sorted(self.alpha), sorted(self.gamma), sorted(self.d), sorted(self.A)
        ):
            out.append(ModelParams(A=A, alpha=a, gamma=g, d=d))
        return out

    def __len__(self) -> int:
        return len(self.A) * len(self.alpha) * len(self.gamma) * len(self.d)

    def as_dict(self) -> dict:
        return {k: list(getattr(self, k)) for k in ("A", "alpha", "gamma", "d")}


def default_grid() -> Grid:
    return Grid()


# --- cached building blocks --------------------------------------------------


@lru_cache(maxsize=32768)
def _thresholds(params: ModelParams, mode: str) -> Dict[str, float]:
    return st.equilibrium_thresholds(params, mode)


@lru_cache(maxsize=32768)
def _spne(s: float, params: ModelParams, participation: str) -> contract_game.SpneResult:
    return contract_game.spne_under_uniform_standard(s, params, participation)


@lru_cache(maxsize=32768)
def _eq_standard(regime: Regime, params: ModelParams, mode: str) -> Tuple[float, ...]:
    return st.equilibrium_standard(regime, params, mode)


@lru_cache(maxsize=32768)
def _numeric_optimum(regime: Regime, params: ModelParams) -> Tuple[float, float]:
    return oracle.maximize_ncs_over_s(regime, params)


def _above(params: ModelParams, *regimes: Regime) -> bool:
    return all(params.d > st.d_positivity_threshold(r, params) * (1 + D_MARGIN) for r in regimes)


def clear_caches() -> None:
    for fn in (_thresholds, _spne, _eq_standard, _numeric_optimum, oracle.profit_threshold):
        fn.cache_clear()


# --- claims ------------------------------------------------------------------


@dataclass
class Outcome:
    condition_met: bool
    passed: bool
    values: Dict[str, object]


ClaimFn = Callable[[ModelParams, str, str], Outcome]


@dataclass(frozen=True)
class Claim:
    id: str
    description: str
    fn: ClaimFn
    participations: Tuple[str, ...] = (contract_game.LITERAL,)
    conditioned: bool = False


def _lemma1(p: ModelParams, mode: str, participation: str) -> Outcome:
    th = _thresholds(p, mode)
    return Outcome(True, th["PQ1"] > th["PQ2"] + STRICT_TOL, {"PQ1": th["PQ1"], "PQ2": th["PQ2"]})


def _cell_values(res: contract_game.SpneResult) -> Dict[str, object]:
    out: Dict[str, object] = {}
    for (a, b), (u1, u2) in sorted(res.matrix.cells.items()):
        out[f"pi1_{a}{b}"] = u1
        out[f"pi2_{a}{b}"] = u2
    out["equilibria"] = ["".join(x) for x in res.nash.equilibria]
    return out


def _lemma2(p: ModelParams, mode: str, participation: str) -> Outcome:
    res = _spne(0.0, p, participation)
    ok = res.nash.profiles == {("Q", "Q")} and res.nash.dominant == {1: "Q", 2: "Q"}
    return Outcome(True, ok, _cell_values(res))


def _prop1(p: ModelParams, mode: str, participation: str) -> Outcome:
    cond = _above(p, Regime.PP, Regime.QQ)
    th = _thresholds(p, mode)
    values: Dict[str, object] = {}
    ok = True
    for key, regime in (("PP", Regime.PP), ("QQ", Regime.QQ)):
        opt = st.optimal_standard(regime, p)
        eq = _eq_standard(regime, p, mode)[0]
        values.update({f"opt_{key}": opt, f"eq_{key}": eq, f"u_{key}": th[key]})
        ok &= abs(eq - th[key]) <= STRICT_TOL and opt > th[key]
    return Outcome(cond, ok, values)


def _beneficial(regime: Regime) -> ClaimFn:
    key = regime.value

    def claim(p: ModelParams, mode: str, participation: str) -> Outcome:
        cond = _above(p, regime)
        u = _thresholds(p, mode)[key]
        opt = st.optimal_standard(regime, p)
        cert = closed_form.solve(regime, CertProfile.both(u), p)
        plain = closed_form.solve(regime, CertProfile.none(), p)
        ok = opt > u and cert.ncs > plain.ncs and cert.pi1 >= plain.pi1 - THRESHOLD_AGREEMENT
        return Outcome(cond, ok, {
            "opt": opt, "u": u, "ncs_C": cert.ncs, "ncs_N": plain.ncs,
            "pi_C": cert.pi1, "pi_N": plain.pi1,
        })

    return claim


def _prop2a(p: ModelParams, mode: str, participation: str) -> Outcome:
    th = _thresholds(p, mode)
    opt = st.optimal_standard(Regime.PQ, p)
    ok = opt > th["PQ1"] and opt > th["PQ2"]
    return Outcome(_above(p, Regime.PQ), ok, {"opt_PQ": opt, "PQ1": th["PQ1"], "PQ2": th["PQ2"]})


def _prop2b(p: ModelParams, mode: str, participation: str) -> Outcome:
    s = _thresholds(p, mode)["PQ1"]
    profile, _, flag = contract_game.participation_game(Regime.PQ, s, p)
    eq = closed_form.solve(Regime.PQ, CertProfile(*profile, s), p)
    ok = profile == (1, 0) and eq.pi2 > eq.pi1
    return Outcome(True, ok, {"s": s, "profile": list(profile), "flag": flag, "pi1": eq.pi1, "pi2": eq.pi2})


def _prop2c(p: ModelParams, mode: str, participation: str) -> Outcome:
    s = _thresholds(p, mode)["PQ2"]
    profile, _, flag = contract_game.participation_game(Regime.PQ, s, p)
    cert = closed_form.solve(Regime.PQ, CertProfile.both(s), p)
    plain = closed_form.solve(Regime.PQ, CertProfile.none(), p)
    ok = (
        profile == (1, 1)
        and cert.ncs > plain.ncs
        and cert.pi1 >= plain.pi1 - THRESHOLD_AGREEMENT
        and cert.pi2 >= plain.pi2 - THRESHOLD_AGREEMENT
        and cert.pi2 > cert.pi1
    )
    return Outcome(True, ok, {
        "s": s, "profile": list(profile), "flag": flag,
        "ncs_C": cert.ncs, "ncs_N": plain.ncs,
        "pi1_C": cert.pi1, "pi1_N": plain.pi1, "pi2_C": cert.pi2, "pi2_N": plain.pi2,
    })


def _prop3(p: ModelParams, mode: str, participation: str) -> Outcome:
    r = st.rank_optimal_standards(p)
    return Outcome(_above(p, Regime.PP, Regime.PQ, Regime.QQ), r.matches, {**r.values, "order": list(r.order)})


def _prop4(p: ModelParams, mode: str, participation: str) -> Outcome:
    r = st.rank(_thresholds(p, mode), st.EQUILIBRIUM_CHAIN)
    return Outcome(True, r.matches, {**r.values, "order": list(r.order)})


def _a3_inequalities(res: contract_game.SpneResult) -> Dict[str, float]:
    c = res.matrix.cells
    return {
        "pi1_QP_minus_PP": c[("Q", "P")][0] - c[("P", "P")][0],
        "pi1_QQ_minus_PQ": c[("Q", "Q")][0] - c[("P", "Q")][0],
        "pi2_PQ_minus_PP": c[("P", "Q")][1] - c[("P", "P")][1],
        "pi2_QQ_minus_QP": c[("Q", "Q")][1] - c[("Q", "P")][1],
    }


def _prop5a(p: ModelParams, mode: str, participation: str) -> Outcome:
    th = _thresholds(p, mode)
    values: Dict[str, object] = {}
    ok = True
    for key in ("PQ2", "PP", "QQ"):
        res = _spne(th[key], p, participation)
        ineq = _a3_inequalities(res)
        values[f"s_{key}"] = th[key]
        values[f"tag_{key}"] = res.tag
        values.update({f"{k}@{key}": v for k, v in ineq.items()})
        ok &= res.tag == contract_game.PROP5A and all(v > STRICT_TOL for v in ineq.values())
    return Outcome(True, ok, values)


def _prop5b(p: ModelParams, mode: str, participation: str) -> Outcome:
    s = _thresholds(p, mode)["PQ1"]
    res = _spne(s, p, participation)
    values: Dict[str, object] = {"s": s, "tag": res.tag}
    values.update(_a3_inequalities(res))
    values.update(_cell_values(res))
    return Outcome(True, res.tag == contract_game.PROP5B, values)


def _pq_orders(attr: str) -> ClaimFn:
    def claim(p: ModelParams, mode: str, participation: str) -> Outcome:
        th = _thresholds(p, mode)
        values: Dict[str, object] = {}
        ok = True
        for label, cert in (
            ("N", CertProfile.none()),
            ("C@PQ1", CertProfile.both(th["PQ1"])),
            ("C@PQ2", CertProfile.both(th["PQ2"])),
        ):
            eq = closed_form.solve(Regime.PQ, cert, p)
            one, two = getattr(eq, attr + "1"), getattr(eq, attr + "2")
            values[f"{attr}1_{label}"] = one
            values[f"{attr}2_{label}"] = two
            ok &= two > one + STRICT_TOL
        return Outcome(True, ok, values)

    return claim


def _ncs_gain(p: ModelParams, mode: str, participation: str) -> Outcome:
    if not _above(p, Regime.PP, Regime.QQ):
        # Below the bound the literal optimum is negative; no standard to test.
        return Outcome(False, False, {})
    values: Dict[str, object] = {}
    ok = True
    for regime in (Regime.PP, Regime.QQ):
        s = _eq_standard(regime, p, mode)[0]
        cert = closed_form.solve(regime, CertProfile.both(s), p)
        plain = closed_form.solve(regime, CertProfile.none(), p)
        values[f"s_{regime.value}"] = s
        values[f"ncs_C_{regime.value}"] = cert.ncs
        values[f"ncs_N_{regime.value}"] = plain.ncs
        ok &= cert.ncs > plain.ncs
    return Outcome(True, ok, values)


def _threshold_audit(keys: Sequence[str]) -> ClaimFn:
    def claim(p: ModelParams, mode: str, participation: str) -> Outcome:
        lit = _thresholds(p, st.PAPER_LITERAL)
        der = _thresholds(p, st.DERIVED)
        values: Dict[str, object] = {}
        ok = True
        for k in keys:
            values[f"{k}_literal"] = lit[k]
            values[f"{k}_derived"] = der[k]
            ok &= abs(lit[k] - der[k]) <= THRESHOLD_AGREEMENT
        return Outcome(True, ok, values)

    return claim


def ncs_derivative(regime: Regime, s: float, params: ModelParams, h: float = FOC_STEP) -> float:
    """Central finite difference of NCS (both firms certified) in the standard.

    When NCS is so large that float cancellation could reach the FOC
    tolerance, the difference is formed in exact rational arithmetic from
    the float inputs instead.
    """
    lo = oracle.ncs_of_standard(regime, s - h, params)
    hi = oracle.ncs_of_standard(regime, s + h, params)
    if 8 * 2.2e-16 * max(abs(lo), abs(hi), 1.0) / (2 * h) < FOC_TOLERANCE * 1e-3:
        return (hi - lo) / (2 * h)
    exact = ModelParams(*(Fraction(getattr(params, k)) for k in ("A", "alpha", "gamma", "d")))
    s, h = Fraction(s), Fraction(h)

    def f(x: Fraction) -> Fraction:
        return closed_form.solve(regime, CertProfile.both(x), exact).ncs

    return float((f(s + h) - f(s - h)) / (2 * h))


def _optimum_audit(p: ModelParams, mode: str, participation: str) -> Outcome:
    """Literal optimal standards satisfy the FOC and the min rule."""
    values: Dict[str, object] = {}
    ok = True
    th = _thresholds(p, mode)
    conds = []
    for regime, keys in ((Regime.PP, ("PP",)), (Regime.QQ, ("QQ",)), (Regime.PQ, ("PQ1", "PQ2"))):
        if not _above(p, regime):
            continue
        conds.append(regime.value)
        opt = st.optimal_standard(regime, p)
        numeric, _ = _numeric_optimum(regime, p)
        slope = ncs_derivative(regime, opt, p)
        values[f"opt_{regime.value}"] = opt
        values[f"numeric_{regime.value}"] = numeric
        values[f"dncs_{regime.value}"] = slope
        ok &= abs(opt - numeric) <= OPTIMUM_AGREEMENT * max(1.0, abs(opt))
        ok &= abs(slope) < FOC_TOLERANCE
        for key, eq in zip(keys, _eq_standard(regime, p, mode)):
            constrained, _ = oracle.maximize_ncs_over_s(regime, p, constraint=th[key])
            values[f"constrained_{key}"] = constrained
            ok &= abs(constrained - eq) <= THRESHOLD_AGREEMENT
    return Outcome(bool(conds), ok, values)


_BOTH = (contract_game.LITERAL, contract_game.AWARE)

CLAIMS: Tuple[Claim, ...] = (
    Claim("lemma1", "price setter's adoption threshold exceeds the quantity setter's", _lemma1),
    Claim("lemma2", "without certification, quantity contracts are strictly dominant", _lemma2, _BOTH),
    Claim("prop1", "certifier sets PP and QQ standards at the adoption thresholds", _prop1, conditioned=True),
    Claim("propA1", "Bertrand: optimum above threshold, NCS and profits gain at the threshold",
          _beneficial(Regime.PP), conditioned=True),
    Claim("propA2", "Cournot: optimum above threshold, NCS and profits gain at the threshold",
          _beneficial(Regime.QQ), conditioned=True),
    Claim("prop2a", "mixed market: optimal standard exceeds both adoption thresholds", _prop2a, conditioned=True),
    Claim("prop2b", "at the price setter's threshold only the price setter certifies and earns less",
          _prop2b, (contract_game.AWARE,)),
    Claim("prop2c", "at the quantity setter's threshold both certify and gain", _prop2c, (contract_game.AWARE,)),
    Claim("prop3", "optimal standards rank PP > PQ > QQ", _prop3, conditioned=True),
    Claim("prop4", "equilibrium standards rank PQ1 > QQ > PP > PQ2", _prop4),
    Claim("prop5a", "uniform standards PQ2, PP, QQ give unique SPNE {Q,Q}", _prop5a, _BOTH),
    Claim("prop5b", "uniform standard PQ1 gives SPNE {P,Q} and {Q,P}", _prop5b, _BOTH),
    Claim("pq_quantity_order", "mixed market: quantity setter sells more", _pq_orders("q")),
    Claim("pq_profit_order", "mixed market: quantity setter earns more", _pq_orders("pi")),
    Claim("ncs_gain", "NCS with certification at the equilibrium standard exceeds NCS without (PP, QQ)",
          _ncs_gain, conditioned=True),
    Claim("threshold_audit_pp_qq", "literal PP and QQ thresholds equal the profit-indifference roots",
          _threshold_audit(("PP", "QQ"))),
    Claim("threshold_audit_pq", "literal PQ thresholds equal the profit-indifference roots",
          _threshold_audit(("PQ1", "PQ2"))),
    Claim("optimum_audit", "literal optimal standards solve the certifier FOC; constrained optimum is min rule",
          _optimum_audit, conditioned=True),
)

CLAIM_IDS = tuple(c.id for c in CLAIMS)
_BY_ID = {c.id: c for c in CLAIMS}


def get_claim(claim_id: str) -> Claim:
    try:
        return _BY_ID[claim_id]
    except KeyError:
        raise ValueError(f"unknown claim {claim_id!r}; known: {', '.join(CLAIM_IDS)}") from None


# --- reports -----------------------------------------------------------------


def _params_dict(p: ModelParams) -> Dict[str, float]:
    return {"A": p.A, "alpha": p.alpha, "gamma": p.gamma, "d": p.d}


@dataclass
class ClaimReport:
    claim_id: str
    description: str
    mode: str
    participation: str
    grid_points: int
    grid_points_tested: int
    pass_count: int
    error_count: int
    status: str
    pass_fraction: Optional[float]
    counterexamples: List[dict] = field(default_factory=list)
    failure_box: Optional[Dict[str, List[float]]] = None
    pass_examples: List[dict] = field(default_factory=list)
    errors: List[dict] = field(default_factory=list)
    outside_condition: Optional[Dict[str, int]] = None

    def as_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "description": self.description,
            "mode": self.mode,
            "participation": self.participation,
            "grid_points": self.grid_points,
            "grid_points_tested": self.grid_points_tested,
            "pass_count": self.pass_count,
            "error_count": self.error_count,
            "status": self.status,
            "pass_fraction": self.pass_fraction,
            "counterexamples": self.counterexamples,
            "failure_box": self.failure_box,
            "pass_examples": self.pass_examples,
            "errors": self.errors,
            "outside_condition": self.outside_condition,
        }


_EXPECTED_ERRORS = (ArithmeticError, ValueError, oracle.OracleError)

Task = Tuple[str, str, str]  # (claim_id, mode, participation)


def evaluate_point(claim: Claim, params: ModelParams, mode: str, participation: str) -> Outcome:
    return claim.fn(params, mode, participation)


def _evaluate_chunk(args: Tuple[Sequence[Task], Sequence[ModelParams]]) -> List[List[Tuple[str, object]]]:
    """Evaluate every task at every point, point by point.

    Caches are per point, so they are cleared after each one to keep
    memory flat on large grids.
    """
    tasks, points = args
    claims = [get_claim(t[0]) for t in tasks]
    out: List[List[Tuple[str, object]]] = [[] for _ in tasks]
    for p in points:
        for i, ((_, mode, participation), claim) in enumerate(zip(tasks, claims)):
            try:
                out[i].append(("ok", evaluate_point(claim, p, mode, participation)))
            except _EXPECTED_ERRORS as exc:
                out[i].append(("error", f"{type(exc).__name__}: {exc}"))
        clear_caches()
    return out


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _evaluate_all(tasks: Sequence[Task], points: List[ModelParams], workers: int):
    if workers <= 1 or len(points) < 64:
        return _evaluate_chunk((tasks, points))
    size = math.ceil(len(points) / workers)
    chunks = [(tasks, points[i:i + size]) for i in range(0, len(points), size)]
    results: List[List[Tuple[str, object]]] = [[] for _ in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_evaluate_chunk, chunks):
            for acc, chunk in zip(results, part):
                acc.extend(chunk)
    return results


def _summarize(
    task: Task,
    points: Sequence[ModelParams],
    results: Sequence[Tuple[str, object]],
    max_counterexamples: int,
) -> ClaimReport:
    claim_id, mode, participation = task
    claim = get_claim(claim_id)
    tested = passed = errors = 0
    outside_tested = outside_passed = 0
    failures: List[ModelParams] = []
    counterexamples: List[dict] = []
    pass_examples: List[dict] = []
    error_list: List[dict] = []
    for p, (kind, payload) in zip(points, results):
        if kind == "error":
            errors += 1
            if len(error_list) < max_counterexamples:
                error_list.append({"params": _params_dict(p), "error": payload})
            continue
        outcome: Outcome = payload
        if not outcome.condition_met:
            outside_tested += 1
            outside_passed += outcome.passed
            continue
        tested += 1
        if outcome.passed:
            passed += 1
            if len(pass_examples) < max_counterexamples:
                pass_examples.append({"params": _params_dict(p), "values": outcome.values})
        else:
            failures.append(p)
            if len(counterexamples) < max_counterexamples:
                counterexamples.append({"params": _params_dict(p), "values": outcome.values})

    if tested == 0:
        status = VACUOUS
    elif passed == tested:
        status = HOLDS_EVERYWHERE
    elif passed == 0:
        status = FAILS_EVERYWHERE
    else:
        status = HOLDS_ON_REGION
    box = None
    if failures:
        box = {
            k: [min(getattr(f, k) for f in failures), max(getattr(f, k) for f in failures)]
            for k in ("A", "alpha", "gamma", "d")
        }
    return ClaimReport(
        claim_id=claim.id,
        description=claim.description,
        mode=mode,
        participation=participation,
        grid_points=len(points),
        grid_points_tested=tested,
        pass_count=passed,
        error_count=errors,
        status=status,
        pass_fraction=(passed / tested) if tested else None,
        counterexamples=counterexamples,
        failure_box=box,
        pass_examples=pass_examples if status == HOLDS_ON_REGION else [],
        errors=error_list,
        outside_condition=(
            {"tested": outside_tested, "pass_count": outside_passed} if claim.conditioned else None
        ),
    )


def _grid_points(grid: Grid | Sequence[ModelParams]) -> List[ModelParams]:
    points = grid.points() if isinstance(grid, Grid) else list(grid)
    if not points:
        raise ValueError("empty grid")
    return points


def verify_claim(
    claim_id: str,
    grid: Grid | Sequence[ModelParams],
    mode: str = st.PAPER_LITERAL,
    participation: Optional[str] = None,
    *,
    max_counterexamples: int = DEFAULT_MAX_COUNTEREXAMPLES,
    workers: Optional[int] = None,
) -> ClaimReport:
    """Evaluate one claim at every grid point."""
    claim = get_claim(claim_id)
    if mode not in st.MODES:
        raise ValueError(f"mode must be one of {st.MODES}")
    task = (claim.id, mode, participation or claim.participations[0])
    points = _grid_points(grid)
    (results,) = _evaluate_all([task], points, workers or _workers())
    return _summarize(task, points, results, max_counterexamples)


def recheck_counterexample(report: ClaimReport, example: dict) -> bool:
    """True when recomputing ``example`` still fails the claim."""
    params = ModelParams(**example["params"])
    clear_caches()
    outcome = evaluate_point(get_claim(report.claim_id), params, report.mode, report.participation)
    return outcome.condition_met and not outcome.passed


def report_tasks(modes: Iterable[str] = st.MODES, claims: Optional[Iterable[str]] = None) -> List[Task]:
    """(claim, mode, participation) triples ordered by claim, then mode."""
    ids = list(CLAIM_IDS) if claims is None else [get_claim(c).id for c in claims]
    ids = sorted(set(ids), key=CLAIM_IDS.index)
    wanted = set(modes)
    unknown = wanted - set(st.MODES)
    if unknown:
        raise ValueError(f"unknown modes {sorted(unknown)}")
    return [
        (cid, mode, participation)
        for cid in ids
        for mode in st.MODES
        if mode in wanted
        for participation in get_claim(cid).participations
    ]


def full_report(
    grid: Grid | Sequence[ModelParams],
    modes: Iterable[str] = st.MODES,
    claims: Optional[Iterable[str]] = None,
    *,
    max_counterexamples: int = DEFAULT_MAX_COUNTEREXAMPLES,
    workers: Optional[int] = None,
) -> List[ClaimReport]:
    """Reports for every claim x mode x participation, in a fixed order."""
    points = _grid_points(grid)
    tasks = report_tasks(modes, claims)
    results = _evaluate_all(tasks, points, workers or _workers())
    return [_summarize(t, points, r, max_counterexamples) for t, r in zip(tasks, results)]
