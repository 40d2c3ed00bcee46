"""Instance and report files.

An instance is a JSON object::

    {"dimension": 2,
     "halfspaces": [{"normal": [1, 0], "offset": 1}, ...],
     "labels": ["right", ...]}          # optional

Reports are JSON with sorted keys and floats written by ``repr``, which is
the shortest string that reads back to the same double, so identical runs give
byte-identical files.
"""
import hashlib
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .polytope import HPolytope


class ParseError(ValueError):
    """Malformed instance or vector file."""


@dataclass
class Instance:
    K: HPolytope
    labels: Optional[list]
    sha256: str


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _real(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ParseError(f"{where}: non-finite number")
    return value


def _load_json(data: bytes):
    try:
        return json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc


def parse_instance(data: bytes) -> Instance:
    """Parse instance bytes.  Structural problems raise :class:`ParseError`;
    geometric ones (unbounded, flat) are left to the pipeline."""
    obj = _load_json(data)
    if not isinstance(obj, dict):
        raise ParseError("instance must be a JSON object")
    d = obj.get("dimension")
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise ParseError(f"dimension must be an integer >= 2, got {d!r}")
    hs = obj.get("halfspaces")
    if not isinstance(hs, list) or not hs:
        raise ParseError("halfspaces must be a nonempty list")
    A, b = [], []
    for i, h in enumerate(hs):
        if not isinstance(h, dict) or "normal" not in h or "offset" not in h:
            raise ParseError(f"halfspace {i}: expected an object with normal and offset")
        normal = h["normal"]
        if not isinstance(normal, list) or len(normal) != d:
            raise ParseError(f"halfspace {i}: normal must be a list of {d} numbers")
        A.append([_real(x, f"halfspace {i} normal") for x in normal])
        b.append(_real(h["offset"], f"halfspace {i} offset"))
    labels = obj.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != len(hs):
            raise ParseError("labels must be a list with one entry per halfspace")
        labels = [str(x) for x in labels]
    A = np.array(A)
    if np.any(np.all(A == 0.0, axis=1)):
        raise ParseError("zero normal vector")
    return Instance(HPolytope(A, b), labels, sha256_bytes(data))


def read_instance(path) -> Instance:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_instance(data)


def instance_to_json(K: HPolytope, labels=None) -> str:
    obj = {"dimension": K.dim,
           "halfspaces": [{"normal": a.tolist(), "offset": float(c)} for a, c in zip(K.A, K.b)]}
    if labels is not None:
        obj["labels"] = list(labels)
    return dumps(obj)


def parse_vectors(data: bytes) -> np.ndarray:
    """A list of vectors, given either as ``{"vectors": [...]}`` or as an instance file."""
    obj = _load_json(data)
    if isinstance(obj, dict) and "halfspaces" in obj:
        return parse_instance(data).K.A.copy()
    rows = obj.get("vectors") if isinstance(obj, dict) else obj
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError("expected a nonempty list of vectors")
    d = len(rows[0])
    if d < 2 or any(len(r) != d for r in rows):
        raise ParseError("vectors must share one length >= 2")
    return np.array([[_real(x, "vector entry") for x in r] for r in rows])


def to_jsonable(obj):
    """Plain JSON types; numpy values are unwrapped and non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=1, allow_nan=False) + "\n"
