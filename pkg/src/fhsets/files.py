"""JSON design files, CSV export and content hashes.

Every file has the same envelope::

    {
      "schema_version": 1,
      "kind": "fhs-set" | "block-family" | "bncdp" | "bncrdp" | "cdm",
      "modulus": <int>,
      "payload": {...},
      "claimed": {"lambda": <int or null>, "parameters": {...}},
      "provenance": {...},
      "hash": "<sha256 of the canonical kind + payload>"
    }

Files are written with sorted keys and no timestamps, so identical objects
always serialize to identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

import jsonschema

from .correlation import FhsSet
from .designs import BlockFamily, Bncdp, Bncrdp, Cdm
from .exceptions import SchemaError

SCHEMA_VERSION = 1

Design = Union[FhsSet, BlockFamily, Bncdp, Bncrdp, Cdm]

_int_rows = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}

_PAYLOADS = {
    "fhs-set": {
        "type": "object",
        "required": ["n", "M", "l", "sequences"],
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "M": {"type": "integer", "minimum": 1},
            "l": {"type": "integer", "minimum": 1},
            "sequences": {**_int_rows, "minItems": 1},
        },
    },
    "block-family": {
        "type": "object",
        "required": ["blocks", "partition"],
        "properties": {"blocks": _int_rows, "partition": {"type": "boolean"}},
    },
    "bncdp": {
        "type": "object",
        "required": ["families"],
        "properties": {
            "families": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["blocks", "partition"],
                    "properties": {"blocks": _int_rows, "partition": {"type": "boolean"}},
                },
            },
        },
    },
    "bncrdp": {
        "type": "object",
        "required": ["m", "families", "partition"],
        "properties": {
            "m": {"type": "integer", "minimum": 1},
            "partition": {"type": "boolean"},
            "families": {"type": "array", "minItems": 1, "items": _int_rows},
        },
    },
    "cdm": {
        "type": "object",
        "required": ["entries", "homogeneous"],
        "properties": {"entries": _int_rows, "homogeneous": {"type": "boolean"}},
    },
}

ENVELOPE_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "kind", "modulus", "payload", "claimed"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"enum": sorted(_PAYLOADS)},
        "modulus": {"type": "integer", "minimum": 1},
        "payload": {"type": "object"},
        "claimed": {
            "type": "object",
            "required": ["lambda"],
            "properties": {
                "lambda": {"type": ["integer", "null"], "minimum": 0},
                "parameters": {"type": "object"},
            },
        },
        "provenance": {"type": "object"},
        "hash": {"type": "string"},
    },
}


@dataclass
class DesignFile:
    kind: str
    obj: Design
    claimed_lambda: int | None = None
    parameters: dict[str, Any] = field(default_factory=dict)
    provenance: dict[str, Any] = field(default_factory=dict)

    @property
    def content_hash(self) -> str:
        return content_hash(self.obj)


def kind_of(obj: Design) -> str:
    if isinstance(obj, FhsSet):
        return "fhs-set"
    if isinstance(obj, BlockFamily):
        return "block-family"
    if isinstance(obj, Bncdp):
        return "bncdp"
    if isinstance(obj, Bncrdp):
        return "bncrdp"
    if isinstance(obj, Cdm):
        return "cdm"
    raise TypeError(f"not a design object: {type(obj).__name__}")


def _payload(obj: Design) -> tuple[int, dict[str, Any]]:
    if isinstance(obj, FhsSet):
        return obj.n, {"n": obj.n, "M": obj.M, "l": obj.l, "sequences": obj.rows()}
    if isinstance(obj, BlockFamily):
        return obj.modulus, {"blocks": [list(b) for b in obj.blocks], "partition": obj.partition}
    if isinstance(obj, Bncdp):
        return obj.modulus, {"families": [
            {"blocks": [list(b) for b in f.blocks], "partition": f.partition} for f in obj.families]}
    if isinstance(obj, Bncrdp):
        return obj.modulus, {"m": obj.m, "partition": obj.partition,
                             "families": [[list(b) for b in f.blocks] for f in obj.families]}
    if isinstance(obj, Cdm):
        return obj.modulus, {"entries": [list(r) for r in obj.entries], "homogeneous": obj.homogeneous}
    raise TypeError(f"not a design object: {type(obj).__name__}")


def _canonical(data: Any) -> bytes:
    return json.dumps(data, sort_keys=True, separators=(",", ":")).encode()


def content_hash(obj: Design) -> str:
    """SHA-256 of the kind and payload; provenance and claims do not affect it."""
    modulus, payload = _payload(obj)
    return hashlib.sha256(_canonical({"kind": kind_of(obj), "modulus": modulus, "payload": payload})).hexdigest()


def _claimed_lambda(obj: Design) -> int | None:
    if isinstance(obj, FhsSet):
        return obj.claimed_lambda
    return getattr(obj, "lam", None)


def to_document(obj: Design, parameters: dict[str, Any] | None = None,
                provenance: dict[str, Any] | None = None, claimed_lambda: int | None = None) -> dict:
    modulus, payload = _payload(obj)
    if provenance is None:
        provenance = dict(obj.provenance) if isinstance(obj, FhsSet) else {}
    lam = claimed_lambda if claimed_lambda is not None else _claimed_lambda(obj)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind_of(obj),
        "modulus": modulus,
        "payload": payload,
        "claimed": {"lambda": lam, "parameters": dict(parameters or {})},
        "provenance": provenance,
        "hash": content_hash(obj),
    }


def dumps(obj: Design, **kwargs) -> str:
    return json.dumps(to_document(obj, **kwargs), sort_keys=True, indent=1) + "\n"


def save(obj: Design, path: str | Path, **kwargs) -> None:
    Path(path).write_text(dumps(obj, **kwargs))


def _validate(doc: Any) -> None:
    try:
        jsonschema.validate(doc, ENVELOPE_SCHEMA)
        jsonschema.validate(doc["payload"], _PAYLOADS[doc["kind"]])
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{'/'.join(map(str, exc.absolute_path)) or '<root>'}: {exc.message}") from None


def from_document(doc: Any) -> DesignFile:
    """Parse and validate a decoded JSON document.

    Raises
    ------
    SchemaError
        On any structural problem, including payloads that cannot form the
        declared object (wrong lengths, symbols outside the alphabet, ...).
    """
    _validate(doc)
    kind, modulus, payload = doc["kind"], doc["modulus"], doc["payload"]
    claimed = doc["claimed"]
    lam = claimed.get("lambda")
    provenance = doc.get("provenance", {})
    try:
        if kind == "fhs-set":
            if payload["n"] != modulus or payload["M"] != len(payload["sequences"]):
                raise SchemaError("fhs-set header disagrees with its sequences")
            if any(len(r) != payload["n"] for r in payload["sequences"]):
                raise SchemaError("sequence length differs from n")
            obj: Design = FhsSet.from_rows(payload["sequences"], payload["l"], lam, provenance)
        elif kind == "block-family":
            obj = BlockFamily(modulus, tuple(map(tuple, payload["blocks"])), payload["partition"])
        elif kind == "bncdp":
            obj = Bncdp(modulus, tuple(BlockFamily(modulus, tuple(map(tuple, f["blocks"])), f["partition"])
                                       for f in payload["families"]), lam)
        elif kind == "bncrdp":
            obj = Bncrdp(modulus, payload["m"], tuple(BlockFamily(modulus, tuple(map(tuple, f)))
                                                      for f in payload["families"]), lam, payload["partition"])
        else:
            obj = Cdm(modulus, tuple(map(tuple, payload["entries"])), payload["homogeneous"])
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    stored = doc.get("hash")
    if stored is not None and stored != content_hash(obj):
        raise SchemaError("stored hash does not match the payload")
    return DesignFile(kind, obj, lam, dict(claimed.get("parameters", {})), dict(provenance))


def loads(text: str) -> DesignFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    return from_document(doc)


def load(path: str | Path) -> DesignFile:
    return loads(Path(path).read_text())


# -- CSV -----------------------------------------------------------------------

def to_csv(s: FhsSet) -> str:
    """Header ``# n=..,M=..,l=..,lambda=..`` then one comma-separated row per sequence."""
    lam = "" if s.claimed_lambda is None else s.claimed_lambda
    lines = [f"# n={s.n},M={s.M},l={s.l},lambda={lam}"]
    lines += [",".join(map(str, r)) for r in s.rows()]
    return "\n".join(lines) + "\n"


def to_rows(s: FhsSet) -> str:
    return "\n".join(" ".join(map(str, r)) for r in s.rows()) + "\n"


def from_csv(text: str) -> FhsSet:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise SchemaError("missing '# n=..,M=..,l=..,lambda=..' header")
    try:
        header = dict(part.split("=", 1) for part in lines[0].lstrip("#").strip().split(","))
        n, M, l = int(header["n"]), int(header["M"]), int(header["l"])
        lam = int(header["lambda"]) if header.get("lambda") else None
        rows = [[int(x) for x in ln.split(",")] for ln in lines[1:]]
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"malformed CSV: {exc}") from None
    if M < 1 or len(rows) != M or any(len(r) != n for r in rows):
        raise SchemaError("CSV rows disagree with the header")
    try:
        return FhsSet.from_rows(rows, l, lam)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
