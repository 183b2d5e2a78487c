"""JSON config files for columns and networks.

A file holds either a single column (top-level ``"p"``) or a network
(top-level ``"layers"``). Loading runs three checks, each with its own
exception: the file exists, it matches ``SCHEMA``, and the decoded objects
satisfy their invariants. Messages carry the JSON path and a best-effort
line number.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

import jsonschema

from tnnsim.column import ColumnConfig
from tnnsim.errors import (
    ConfigInvariantError,
    ConfigNotFoundError,
    ConfigSchemaError,
    DimensionError,
)
from tnnsim.network import LayerSpec, NetworkSpec

_prob = {"type": "number", "minimum": 0, "maximum": 1}

COLUMN_SCHEMA = {
    "type": "object",
    "required": ["p", "q", "threshold"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "p": {"type": "integer", "description": "synapses per neuron"},
        "q": {"type": "integer", "description": "neurons in the column"},
        "threshold": {"type": "integer", "description": "body potential that fires a neuron"},
        "weight_bits": {"type": "integer", "default": 3},
        "gamma_period_ticks": {"type": "integer", "default": 64},
        "stabilization_probs": {
            "type": "array",
            "items": _prob,
            "description": "update probability selected by each weight value",
        },
        "case_probs": {
            "type": "array",
            "items": _prob,
            "minItems": 4,
            "maxItems": 4,
            "description": "BRV probability per STDP case: causal, acausal, input-only, output-only",
        },
        "seed": {"type": "integer", "default": 0},
        "learning_enabled": {"type": "boolean", "default": True},
        "initial_weight": {"type": ["integer", "null"], "default": None},
    },
}

LAYER_SCHEMA = {
    "type": "object",
    "required": ["columns", "column_config"],
    "additionalProperties": False,
    "properties": {
        "columns": {"type": "integer"},
        "column_config": COLUMN_SCHEMA,
        "fanin_map": {
            "type": ["array", "null"],
            "items": {"type": "array", "items": {"type": "integer"}},
            "description": "per column, the upstream output index feeding each of its p inputs",
        },
    },
}

NETWORK_SCHEMA = {
    "type": "object",
    "required": ["input_dim", "layers"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "input_dim": {"type": "integer"},
        "layers": {"type": "array", "items": LAYER_SCHEMA},
    },
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "tnnsim column or network config",
    "oneOf": [COLUMN_SCHEMA, NETWORK_SCHEMA],
}


def _line_of(text: str, path) -> int | None:
    """Line of the last object key in ``path``, found by scanning keys in order."""
    pos, found = 0, None
    for part in path:
        if isinstance(part, str):
            i = text.find(f'"{part}"', pos)
            if i < 0:
                break
            pos, found = i, i
    return None if found is None else text.count("\n", 0, found) + 1


def _where(source: str, text: str, path) -> str:
    dotted = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path).lstrip(".") or "<root>"
    line = _line_of(text, path)
    return f"{source}:{line}: {dotted}" if line else f"{source}: {dotted}"


# ---------------------------------------------------------------------------
# dict <-> objects
# ---------------------------------------------------------------------------


def column_to_dict(cfg: ColumnConfig) -> dict:
    return {
        "p": cfg.p,
        "q": cfg.q,
        "threshold": cfg.threshold,
        "weight_bits": cfg.weight_bits,
        "gamma_period_ticks": cfg.gamma_period_ticks,
        "stabilization_probs": list(cfg.stabilization_probs),
        "case_probs": list(cfg.case_probs),
        "seed": cfg.seed,
        "learning_enabled": cfg.learning_enabled,
        "initial_weight": cfg.initial_weight,
    }


def network_to_dict(spec: NetworkSpec) -> dict:
    layers = []
    for layer in spec.layers:
        d: dict[str, Any] = {"columns": layer.columns, "column_config": column_to_dict(layer.column_config)}
        if layer.fanin_map is not None:
            d["fanin_map"] = [list(r) for r in layer.fanin_map]
        layers.append(d)
    return {"input_dim": spec.input_dim, "layers": layers}


def _column_from_dict(d: dict, seed_override, where) -> ColumnConfig:
    kw = {k: v for k, v in d.items() if k != "name"}
    if seed_override is not None:
        kw["seed"] = seed_override
    try:
        return ColumnConfig(**kw)
    except ValueError as exc:
        field, _, msg = str(exc).partition(": ")
        raise ConfigInvariantError(f"{where(field)}: {msg or exc}") from None


def from_dict(d: dict, seed_override: int | None = None, source: str = "<config>", text: str = ""):
    """Build a ColumnConfig or NetworkSpec from an already schema-valid dict."""
    if "layers" not in d:
        return _column_from_dict(d, seed_override, lambda f: _where(source, text, [f]))
    layers = []
    for li, ld in enumerate(d["layers"]):
        cfg = _column_from_dict(
            ld["column_config"], seed_override,
            lambda f, li=li: _where(source, text, ["layers", li, "column_config", f]),
        )
        if ld["columns"] < 1:
            raise ConfigInvariantError(f"{_where(source, text, ['layers', li, 'columns'])}: columns ≥ 1 required")
        fanin = ld.get("fanin_map")
        layers.append(LayerSpec(ld["columns"], cfg, None if fanin is None else tuple(map(tuple, fanin))))
    if d["input_dim"] < 1:
        raise ConfigInvariantError(f"{_where(source, text, ['input_dim'])}: input_dim ≥ 1 required")
    spec = NetworkSpec(d["input_dim"], tuple(layers))
    for li, (layer, upstream) in enumerate(zip(spec.layers, spec.upstream_sizes())):
        try:
            layer.resolve_fanin(upstream)
        except DimensionError as exc:
            raise ConfigInvariantError(f"{_where(source, text, ['layers', li, 'fanin_map'])}: {exc}") from None
    return spec


def loads(text: str, seed_override: int | None = None, source: str = "<string>"):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigSchemaError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = list(validator.iter_errors(data))
    if errors:
        err = errors[0]
        # oneOf failures: report against the branch the file was aiming for
        if err.context:
            want_net = isinstance(data, dict) and "layers" in data
            branch = 1 if want_net else 0
            sub = [e for e in err.context if e.relative_schema_path[0] == branch] or err.context
            err = jsonschema.exceptions.best_match(sub)
        raise ConfigSchemaError(f"{_where(source, text, list(err.absolute_path))}: {err.message}")
    return from_dict(data, seed_override, source, text)


def parse_config(path, seed_override: int | None = None) -> Union[ColumnConfig, NetworkSpec]:
    p = Path(path)
    try:
        text = p.read_text()
    except FileNotFoundError:
        raise ConfigNotFoundError(f"{p}: config file not found") from None
    except OSError as exc:
        raise ConfigNotFoundError(f"{p}: cannot read config: {exc.strerror}") from None
    return loads(text, seed_override, str(p))


def dumps(obj: Union[ColumnConfig, NetworkSpec]) -> str:
    d = column_to_dict(obj) if isinstance(obj, ColumnConfig) else network_to_dict(obj)
    return json.dumps(d, indent=2) + "\n"


def save_config(obj, path) -> None:
    Path(path).write_text(dumps(obj))
