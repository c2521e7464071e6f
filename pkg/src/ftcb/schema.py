"""Validation of stats documents against the shipped schema file."""
from __future__ import annotations

import json
from importlib import resources


class SchemaError(ValueError):
    pass


def load_schema() -> dict:
    text = resources.files("ftcb").joinpath("stats_schema.json").read_text()
    return json.loads(text)


def _check_type(value, expected: str, path: str):
    ok = {
        "int": lambda v: isinstance(v, int) and not isinstance(v, bool),
        "number": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
        "number_or_null": lambda v: v is None or (
            isinstance(v, (int, float)) and not isinstance(v, bool)),
        "object": lambda v: isinstance(v, dict),
        "object_or_null": lambda v: v is None or isinstance(v, dict),
        "array": lambda v: isinstance(v, list),
    }[expected]
    if not ok(value):
        raise SchemaError(f"{path}: expected {expected}, got {type(value).__name__}")


def validate_stats(doc: dict, schema: dict | None = None):
    """Raise SchemaError if the document misses keys or has wrong shapes."""
    schema = schema or load_schema()
    if not isinstance(doc, dict):
        raise SchemaError("stats document must be an object")
    for key, expected in schema["required"].items():
        if key not in doc:
            raise SchemaError(f"missing required key {key!r}")
        _check_type(doc[key], expected, key)
    for section in ("clifford_t", "pbc"):
        spec = schema["sections"][section]
        for key, expected in spec.items():
            if key not in doc[section]:
                raise SchemaError(f"missing {section}.{key}")
            _check_type(doc[section][key], expected, f"{section}.{key}")
    graph_spec = schema["sections"]["interaction_graph"]
    for section in ("clifford_t", "pbc"):
        graph = doc[section]["interaction_graph"]
        for key, expected in graph_spec.items():
            if key not in graph:
                raise SchemaError(f"missing {section}.interaction_graph.{key}")
            _check_type(graph[key], expected, f"{section}.interaction_graph.{key}")
