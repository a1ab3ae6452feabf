"""Command-line front end.

Subcommands ``solve``, ``standards``, ``game``, ``verify`` and ``sweep`` print
JSON (or CSV for ``sweep``) on standard output.  Exit codes: 0 success,
2 usage or validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Dict, List, Optional, Sequence

import jsonschema

from . import closed_form, contract_game, oracle, serialization, verifier
from . import standards as st
from .model import CertProfile, ModelParams, Regime, max_field_deviation

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

SWEEP_COLUMNS = (
    "A",
    "alpha",
    "gamma",
    "d",
    "s_ppu_literal",
    "s_qqu_literal",
    "s_pqu1_literal",
    "s_pqu2_literal",
    "s_ppu_derived",
    "s_qqu_derived",
    "s_pqu1_derived",
    "s_pqu2_derived",
    "s_pp_opt",
    "s_qq_opt",
    "s_pq_opt",
    "d_min_pp",
    "d_min_qq",
    "d_min_pq",
    "optimal_ranking_holds",
    "equilibrium_ranking_holds_literal",
    "equilibrium_ranking_holds_derived",
    "tag_s0",
    "tag_pqu2",
    "tag_ppu",
    "tag_qqu",
    "warnings",
    "error",
)

_PARAM_DEFAULTS = {"A": 1.0, "alpha": 0.5, "gamma": 0.5, "d": 1.0}


class UsageError(ValueError):
    pass


# --- argument helpers --------------------------------------------------------


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    for name in ("A", "alpha", "gamma", "d"):
        p.add_argument(f"--{name}", type=float, default=None, help=f"default {_PARAM_DEFAULTS[name]}")
    p.add_argument("--scenario", help="JSON scenario file; explicit flags override it")


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    for name in ("A", "alpha", "gamma", "d"):
        p.add_argument(f"--{name}", default=None, help="value or start:stop:step (default grid if omitted)")


def _load_scenario(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read scenario: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"scenario is not valid JSON: {exc}") from exc
    try:
        serialization.validate(data, "scenario_file")
    except jsonschema.ValidationError as exc:
        raise UsageError(f"invalid scenario: {exc.message}") from exc
    return data


def _params(args: argparse.Namespace, scenario: dict) -> ModelParams:
    values = dict(_PARAM_DEFAULTS)
    values.update(scenario.get("params", {}))
    for name in values:
        flag = getattr(args, name)
        if flag is not None:
            values[name] = flag
    return ModelParams(**values)


def _pick(args: argparse.Namespace, scenario: dict, name: str, default=None):
    flag = getattr(args, name, None)
    if flag is not None:
        return flag
    return scenario.get(name, default)


def _grid(args: argparse.Namespace) -> verifier.Grid:
    base = verifier.default_grid()
    ranges = {}
    for name in ("A", "alpha", "gamma", "d"):
        text = getattr(args, name)
        ranges[name] = verifier.parse_range(text) if text is not None else getattr(base, name)
    return verifier.Grid(**ranges)


def _emit(document: dict, schema: str, out) -> None:
    text = serialization.dumps(document)
    serialization.validate(json.loads(text), schema)
    out.write(text)


# --- subcommands -------------------------------------------------------------


def cmd_solve(args: argparse.Namespace, out) -> int:
    scenario = _load_scenario(args.scenario)
    params = _params(args, scenario)
    regime = _pick(args, scenario, "regime")
    if regime is None:
        raise UsageError("--regime is required")
    regime = Regime(regime)
    cert = CertProfile(
        int(_pick(args, scenario, "e1", 0)),
        int(_pick(args, scenario, "e2", 0)),
        float(_pick(args, scenario, "s", 0.0)),
    )
    eq = closed_form.solve(regime, cert, params)
    doc = {
        "params": {"A": params.A, "alpha": params.alpha, "gamma": params.gamma, "d": params.d},
        "regime": regime.value,
        "cert": {"e1": cert.e1, "e2": cert.e2, "s": cert.s},
        "equilibrium": eq,
    }
    if args.oracle:
        fixed = oracle.nash_fixed_point(regime, cert, params, method="golden")
        doc["oracle"] = fixed
        doc["max_field_deviation"] = max_field_deviation(eq, fixed)
    _emit(doc, "solve_output", out)
    return EXIT_OK


def cmd_standards(args: argparse.Namespace, out) -> int:
    scenario = _load_scenario(args.scenario)
    params = _params(args, scenario)
    bundle = st.standards_bundle(params).as_dict()
    mode = _pick(args, scenario, "mode", "both")
    if mode != "both":
        other = st.DERIVED if mode == st.PAPER_LITERAL else st.PAPER_LITERAL
        for entry in bundle["thresholds"].values():
            entry[other] = None
        for entry in bundle["equilibrium"].values():
            entry[other] = None
        bundle["rankings"][f"equilibrium_{other}"] = None
    _emit(bundle, "standards_bundle", out)
    return EXIT_OK


def cmd_game(args: argparse.Namespace, out) -> int:
    scenario = _load_scenario(args.scenario)
    params = _params(args, scenario)
    s = float(_pick(args, scenario, "s", 0.0))
    participation = _pick(args, scenario, "participation", contract_game.LITERAL)
    res = contract_game.spne_under_uniform_standard(s, params, participation)
    doc = {
        "params": {"A": params.A, "alpha": params.alpha, "gamma": params.gamma, "d": params.d},
        "matrix": res.matrix,
        "nash": res.nash,
        "tag": res.tag,
    }
    _emit(doc, "game_output", out)
    return EXIT_OK


def _claim_list(text: str) -> Optional[List[str]]:
    if text.strip() == "all":
        return None
    ids = [c.strip() for c in text.split(",") if c.strip()]
    if not ids:
        raise UsageError("--claims needs 'all' or a comma-separated list")
    for cid in ids:
        verifier.get_claim(cid)
    return ids


def cmd_verify(args: argparse.Namespace, out) -> int:
    grid = _grid(args)
    claims = _claim_list(args.claims)
    modes = st.MODES if args.mode == "all" else (args.mode,)
    reports = verifier.full_report(grid, modes, claims)
    doc = {
        "grid": grid.as_dict(),
        "grid_points": len(grid),
        "modes": list(modes),
        "claims": sorted({r.claim_id for r in reports}, key=verifier.CLAIM_IDS.index),
        "reports": reports,
    }
    _emit(doc, "verify_output", out)
    return EXIT_OK


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        y = serialization.round_sig(x)
        return "" if y is None else format(y, ".12g")
    return str(x)


def sweep_row(params: ModelParams) -> Dict[str, object]:
    """One CSV row of standards and contract-game tags.

    A failure at this point fills ``error`` and leaves later columns empty.
    """
    row: Dict[str, object] = {"A": params.A, "alpha": params.alpha, "gamma": params.gamma, "d": params.d}
    try:
        b = st.standards_bundle(params)
        th = b.thresholds
        for key in ("pp", "qq", "pq1", "pq2"):
            short = key.replace("pq", "pqu") if key.startswith("pq") else f"{key}u"
            row[f"s_{short}_literal"] = th[key][st.PAPER_LITERAL]
            row[f"s_{short}_derived"] = th[key][st.DERIVED]
        for key in ("pp", "qq", "pq"):
            row[f"s_{key}_opt"] = b.optimal[key]
            row[f"d_min_{key}"] = b.d_min[key]
        for col, rkey in (
            ("optimal_ranking_holds", "optimal"),
            ("equilibrium_ranking_holds_literal", "equilibrium_paper_literal"),
            ("equilibrium_ranking_holds_derived", "equilibrium_derived"),
        ):
            ranking = b.rankings.get(rkey)
            row[col] = None if ranking is None else ranking["matches"]
        row["tag_s0"] = contract_game.spne_under_uniform_standard(0.0, params).tag
        for col, key in (("tag_pqu2", "pq2"), ("tag_ppu", "pp"), ("tag_qqu", "qq")):
            s = th[key][st.PAPER_LITERAL]
            row[col] = None if s is None else contract_game.spne_under_uniform_standard(s, params).tag
        if b.warnings:
            row["warnings"] = "; ".join(b.warnings)
    except (ArithmeticError, ValueError, oracle.OracleError) as exc:
        row["error"] = str(exc)
    return row


def cmd_sweep(args: argparse.Namespace, out) -> int:
    grid = _grid(args)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for params in grid.points():
        row = sweep_row(params)
        writer.writerow({c: _fmt(row.get(c)) for c in SWEEP_COLUMNS})
    out.write(buf.getvalue())
    return EXIT_OK


# --- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecsrgame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="third-stage equilibrium of one regime")
    _add_param_flags(p)
    p.add_argument("--regime", choices=[r.value for r in Regime])
    p.add_argument("--s", type=float, default=None, help="standard (default 0)")
    p.add_argument("--e1", type=int, choices=(0, 1), default=None)
    p.add_argument("--e2", type=int, choices=(0, 1), default=None)
    p.add_argument("--oracle", action="store_true", help="cross-check against iterated best responses")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("standards", help="thresholds, optimal and equilibrium standards")
    _add_param_flags(p)
    p.add_argument("--mode", choices=("both",) + st.MODES, default=None)
    p.set_defaults(func=cmd_standards)

    p = sub.add_parser("game", help="contract game under a uniform standard")
    _add_param_flags(p)
    p.add_argument("--s", type=float, default=None, help="uniform standard (default 0)")
    p.add_argument("--participation", choices=contract_game.PARTICIPATION_MODES, default=None)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("verify", help="scan claims over a parameter grid")
    _add_grid_flags(p)
    p.add_argument("--claims", default="all", help="'all' or comma-separated claim ids")
    p.add_argument("--mode", choices=("all",) + st.MODES, default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="CSV of standards and tags over a grid")
    _add_grid_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (oracle.OracleError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
