"""
JSON formats for quaternions, units, vectors and matrices.

    quaternion  [w, x, y, z]
    unit        [x, y, z]
    vector      {"n": n, "entries": [[w, x, y, z], ...]}
    matrix      {"n": n, "entries": [[[w, x, y, z], ...], ...]}
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import ConfigError, DimensionError
from .qmatrix import QMatrix, QVector
from .quat import Quaternion, UnitImaginary


def _floats(text: str, count: int, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise ConfigError(f"cannot parse {what} {text!r}") from None
    if len(vals) != count:
        raise ConfigError(f"{what} needs {count} comma-separated numbers, got {len(vals)}")
    return vals


def parse_quaternion(text: str) -> Quaternion:
    return Quaternion(*_floats(text, 4, "quaternion"))


def parse_unit(text: str) -> UnitImaginary:
    vals = _floats(text, 3, "unit")
    if not any(vals):
        raise ConfigError("the imaginary unit cannot be zero")
    return UnitImaginary.normalized(vals)


def parse_selection(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse selection {text!r}") from None


def matrix_from_json(obj) -> QMatrix:
    try:
        e = np.asarray(obj["entries"], dtype=float)
        n = int(obj.get("n", e.shape[0]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed matrix JSON: {exc}") from None
    if e.ndim != 3 or e.shape != (n, n, 4):
        raise DimensionError(f"matrix entries must have shape ({n}, {n}, 4), got {e.shape}")
    return QMatrix.from_entries(e)


def vector_from_json(obj) -> QVector:
    try:
        e = np.asarray(obj["entries"], dtype=float)
        n = int(obj.get("n", e.shape[0]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed vector JSON: {exc}") from None
    if e.shape != (n, 4):
        raise DimensionError(f"vector entries must have shape ({n}, 4), got {e.shape}")
    return QVector.from_entries(e)


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None


def load_matrix(path) -> QMatrix:
    return matrix_from_json(read_json(path))


def load_vector(path) -> QVector:
    return vector_from_json(read_json(path))


def _default(o):
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if hasattr(o, "to_json"):
        return o.to_json()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _finite(o):
    if isinstance(o, float):
        return o + 0.0 if math.isfinite(o) else str(o)
    if isinstance(o, dict):
        return {k: _finite(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_finite(v) for v in o]
    return o


def dumps(obj, pretty: bool = False) -> str:
    """Deterministic JSON: sorted keys, non-finite floats as strings."""
    obj = json.loads(json.dumps(obj, default=_default))
    return json.dumps(_finite(obj), sort_keys=True, indent=2 if pretty else None)
