"""The :class:`Embedding` container and its JSON form."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from rankembed.norms import NormSpec, PolygonGauge, parse_norm

_RATIONAL = re.compile(r"-?\d+/\d+")


@dataclass(frozen=True)
class Embedding:
    voters: tuple[tuple, ...]
    alternatives: tuple[tuple, ...]
    ambient_dim: int
    norm: NormSpec
    construction: str
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for v in self.voters + self.alternatives:
            if len(v) != self.ambient_dim:
                raise ValueError(f"vector {v} does not have ambient dimension {self.ambient_dim}")

    @property
    def is_rational(self) -> bool:
        """True when every coordinate is an int or Fraction."""
        return all(isinstance(c, (int, Fraction)) for v in self.voters + self.alternatives for c in v)

    def expand(self, class_map: list[int]) -> Embedding:
        """Copy class-representative voter coordinates back to every original voter."""
        return Embedding(
            voters=tuple(self.voters[k] for k in class_map),
            alternatives=self.alternatives,
            ambient_dim=self.ambient_dim,
            norm=self.norm,
            construction=self.construction,
            metadata=dict(self.metadata),
        )


def encode_number(x: Any) -> str:
    """JSON token for a coordinate: ints verbatim, fractions as ``"p/q"``, floats with 17 digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f'"{x.numerator}/{x.denominator}"'
    x = float(x)
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if math.isnan(x):
        raise ValueError("cannot serialize NaN")
    return format(x, ".17g")


def decode_number(v: Any) -> int | float | Fraction:
    if isinstance(v, str):
        if v in ("inf", "-inf"):
            return float(v)
        if _RATIONAL.fullmatch(v):
            return Fraction(v)
    return v


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON writer honouring :func:`encode_number` for numbers.

    Lists of scalars stay on one line so coordinate vectors remain readable.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    return encode_number(obj)


def norm_to_json(norm: NormSpec) -> Any:
    if isinstance(norm, PolygonGauge):
        return {"poly": [list(v) for v in norm.vertices]}
    return norm.to_string()


def norm_from_json(data: Any) -> NormSpec:
    if isinstance(data, dict) and "poly" in data:
        return PolygonGauge(tuple((float(x), float(y)) for x, y in data["poly"]))
    return parse_norm(data)


def embedding_to_json(emb: Embedding) -> dict:
    return {
        "construction": emb.construction,
        "norm": norm_to_json(emb.norm),
        "ambient_dim": emb.ambient_dim,
        "voters": [list(v) for v in emb.voters],
        "alternatives": [list(a) for a in emb.alternatives],
        "metadata": dict(emb.metadata),
    }


def embedding_dumps(emb: Embedding) -> str:
    return dumps(embedding_to_json(emb)) + "\n"


def embedding_loads(text: str) -> Embedding:
    data = json.loads(text)
    try:
        vec = lambda row: tuple(decode_number(c) for c in row)  # noqa: E731
        return Embedding(
            voters=tuple(vec(v) for v in data["voters"]),
            alternatives=tuple(vec(a) for a in data["alternatives"]),
            ambient_dim=int(data["ambient_dim"]),
            norm=norm_from_json(data["norm"]),
            construction=str(data["construction"]),
            metadata={k: decode_number(v) for k, v in data.get("metadata", {}).items()},
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed embedding JSON: {exc}") from None
