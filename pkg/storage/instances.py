"""OdeInstance persistence: JSON validated against INSTANCE_SCHEMA before construction."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from jsonschema import ValidationError, validate

from config.constants import ERROR_INSTANCE_READ, ERROR_INSTANCE_SCHEMA
from core.errors import ConfigError, ExprParseError, GrowthLabError
from core.expr import ZERO_EXPR, to_string
from core.parser import parse
from indicator.phase import ExpPolyFactorization, PolyP
from odelab.instance import OdeInstance

logger = logging.getLogger("growth_lab.corpus")

_COMPLEX_SCHEMA = {
    "type": "object",
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "required": ["re"],
    "additionalProperties": False,
}

INSTANCE_SCHEMA = {
    "type": "object",
    "properties": {
        "label": {"type": "string", "minLength": 1},
        "A": {"type": "string", "minLength": 1},
        "B": {"type": "string", "minLength": 1},
        "H": {"type": "string", "minLength": 1},
        "f": {"type": ["string", "null"]},
        "factorization": {
            "type": ["object", "null"],
            "properties": {
                "v": {"type": "string", "minLength": 1},
                "P": {"type": "array", "items": _COMPLEX_SCHEMA, "minItems": 2},
            },
            "required": ["v", "P"],
        },
    },
    "required": ["label", "A", "B"],
}


def validate_instance_dict(data: Any) -> None:
    try:
        validate(instance=data, schema=INSTANCE_SCHEMA)
    except ValidationError as exc:
        raise ConfigError(ERROR_INSTANCE_SCHEMA.format(details=exc.message)) from exc


def _parse_field(data: dict, key: str):
    try:
        return parse(data[key])
    except ExprParseError as exc:
        raise ConfigError(ERROR_INSTANCE_SCHEMA.format(details=f"field '{key}': {exc}")) from exc


def instance_from_dict(data: dict, build_factorization: bool = True) -> OdeInstance:
    """Construct an OdeInstance; the factorization order check runs unless disabled."""
    validate_instance_dict(data)
    a_expr = _parse_field(data, "A")
    b_expr = _parse_field(data, "B")
    h_expr = _parse_field(data, "H") if data.get("H") else ZERO_EXPR
    f_expr = _parse_field(data, "f") if data.get("f") else None
    factorization = None
    factorization_data = data.get("factorization")
    if factorization_data:
        v_expr = _parse_field(factorization_data, "v")
        try:
            poly = PolyP.from_coefficients(factorization_data["P"])
            if build_factorization:
                factorization = ExpPolyFactorization.build(v_expr, poly)
            else:
                factorization = ExpPolyFactorization(v_expr, poly)
        except GrowthLabError as exc:
            raise ConfigError(ERROR_INSTANCE_SCHEMA.format(details=f"factorization: {exc}")) from exc
    try:
        return OdeInstance(data["label"], a_expr, b_expr, h_expr, f_expr, factorization)
    except GrowthLabError as exc:
        raise ConfigError(ERROR_INSTANCE_SCHEMA.format(details=str(exc))) from exc


def instance_to_dict(inst: OdeInstance) -> dict:
    return {
        "label": inst.label,
        "A": to_string(inst.A),
        "B": to_string(inst.B),
        "H": to_string(inst.H),
        "f": to_string(inst.f) if inst.f is not None else None,
        "factorization": inst.factorization_A.to_dict() if inst.factorization_A else None,
    }


def read_json(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(ERROR_INSTANCE_READ.format(path=path, details=exc)) from exc


def load_instance(path: Path, build_factorization: bool = True) -> OdeInstance:
    inst = instance_from_dict(read_json(path), build_factorization)
    logger.info("Loaded instance %s from %s", inst.label, path)
    return inst


def save_instance(inst: OdeInstance, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(instance_to_dict(inst), indent=2, sort_keys=True), encoding="utf-8")
