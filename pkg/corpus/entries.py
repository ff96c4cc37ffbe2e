from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from jsonschema import ValidationError, validate

from config.constants import ERROR_INSTANCE_SCHEMA
from config.paths import CORPUS_PATH
from core.errors import ConfigError
from odelab.instance import OdeInstance
from storage.instances import INSTANCE_SCHEMA, instance_from_dict, read_json

logger = logging.getLogger("growth_lab.corpus")

FAIL_TAGS = ("orders", "H", "orders+H")
PROVENANCE = ("PUBLISHED", "DERIVED")
ROLES = ("A", "B", "H", "f")

EXPECTED_SCHEMA = {
    "type": "object",
    "properties": {
        "orders": {
            "type": "object",
            "properties": {role: {"enum": [0, 0.5, 1, 2]} for role in ROLES},
            "required": list(ROLES),
        },
        "provenance": {"type": "object", "additionalProperties": {"enum": list(PROVENANCE)}},
        "fails": {"enum": list(FAIL_TAGS)},
        "narrative": {"type": "string"},
    },
    "required": ["orders", "fails", "narrative"],
}

CORPUS_SCHEMA = {
    "type": "object",
    "properties": {
        "entries": {
            "type": "array",
            "items": {
                "allOf": [
                    INSTANCE_SCHEMA,
                    {"properties": {"expected": EXPECTED_SCHEMA}, "required": ["expected"]},
                ]
            },
        }
    },
    "required": ["entries"],
}


@dataclass
class CorpusEntry:
    instance: OdeInstance
    expected_orders: dict[str, float]
    fails: str
    narrative: str
    provenance: dict[str, str] = field(default_factory=dict)
    position: int = 0
    raw: dict[str, Any] = field(default_factory=dict, repr=False)

    @property
    def label(self) -> str:
        return self.instance.label

    @classmethod
    def from_dict(cls, data: dict, build_factorization: bool = True) -> CorpusEntry:
        expected = data["expected"]
        return cls(
            instance=instance_from_dict(data, build_factorization),
            expected_orders={role: float(value) for role, value in expected["orders"].items()},
            fails=expected["fails"],
            narrative=expected["narrative"],
            provenance=dict(expected.get("provenance", {})),
            position=int(data.get("position", 0)),
            raw=dict(data),
        )

    def to_dict(self) -> dict:
        return dict(self.raw)


def load_corpus(path: Path | None = None, build_factorization: bool = True) -> list[CorpusEntry]:
    path = Path(path or CORPUS_PATH)
    data = read_json(path)
    try:
        validate(instance=data, schema=CORPUS_SCHEMA)
    except ValidationError as exc:
        raise ConfigError(ERROR_INSTANCE_SCHEMA.format(details=exc.message)) from exc
    entries = [CorpusEntry.from_dict(item, build_factorization) for item in data["entries"]]
    logger.info("Loaded %d corpus entries from %s", len(entries), path)
    return entries


def mutate_entry(entry: CorpusEntry, **overrides: Any) -> CorpusEntry:
    """A copy of ``entry`` with instance fields (A, B, H, f, label, ...) or ``expected`` replaced."""
    data = dict(entry.raw)
    for key, value in overrides.items():
        if key == "expected":
            data["expected"] = {**data["expected"], **value}
        else:
            data[key] = value
    factorization = entry.instance.factorization_A
    rebuild = factorization is not None and factorization.v_order is not None
    return CorpusEntry.from_dict(data, build_factorization=rebuild)
