"""JSON output with fixed precision, plus schema validation of documents."""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema
from referencing import Registry, Resource

SIGNIFICANT_DIGITS = 12

SCHEMAS = (
    "equilibrium",
    "standards_bundle",
    "game_matrix",
    "nash_result",
    "claim_report",
    "scenario_file",
    "solve_output",
    "game_output",
    "verify_output",
)


def round_sig(x: float, digits: int = SIGNIFICANT_DIGITS) -> float | None:
    """Round to ``digits`` significant digits; non-finite values become None."""
    if not math.isfinite(x):
        return None
    y = float(format(x, f".{digits}g"))
    return 0.0 if y == 0 else y


def to_jsonable(obj: Any) -> Any:
    """Recursively convert to plain JSON types, rounding every float."""
    if hasattr(obj, "as_dict"):
        obj = obj.as_dict()
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return round_sig(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "__float__"):
        return round_sig(float(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=False) + "\n"


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    if name not in SCHEMAS:
        raise KeyError(f"unknown schema {name!r}")
    text = resources.files("ecsrgame.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=1)
def _registry() -> Registry:
    pairs = [(f"{n}.schema.json", Resource.from_contents(load_schema(n))) for n in SCHEMAS]
    return Registry().with_resources(pairs)


def validate(document: Any, name: str) -> None:
    """Raise :class:`jsonschema.ValidationError` if ``document`` breaks schema ``name``."""
    schema = load_schema(name)
    cls = jsonschema.validators.validator_for(schema)
    cls(schema, registry=_registry()).validate(document)
