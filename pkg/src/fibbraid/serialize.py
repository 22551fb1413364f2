"""Deterministic JSON: fixed 17-digit floats, insertion-ordered maps."""

from __future__ import annotations

import enum
import json
import math
from fractions import Fraction

import numpy as np

from .fusion import EPS, I, path_str


def _float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite float in output")
    if x == 0:
        return "0.0"
    return format(x, ".17g")


def _plain(x):
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, enum.Enum):
        return str(x)
    return x


def _emit(x, indent: int, level: int) -> str:
    x = _plain(x)
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if x is None:
        return "null"
    if x is True:
        return "true"
    if x is False:
        return "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return _float(x)
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(v, indent, level + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(x, (list, tuple)):
        if not x:
            return "[]"
        inner = [_emit(v, indent, level + 1) for v in x]
        if all(not isinstance(_plain(v), (dict, list, tuple, np.ndarray)) for v in x):
            return "[" + ", ".join(inner) + "]"
        return "[\n" + ",\n".join(pad + s for s in inner) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _emit(obj, indent, 0)


def matrix_to_json(matrix, basis=()) -> dict:
    """Row-major ``[re, im]`` entries plus the basis as I/e strings."""
    m = np.asarray(matrix, dtype=complex)
    out = {"dim": int(m.shape[0]),
           "entries": [[[float(v.real), float(v.imag)] for v in row] for row in m]}
    if basis:
        out["basis"] = [path_str(p) for p in basis]
    return out


def matrix_from_json(obj) -> tuple[np.ndarray, tuple]:
    entries = obj["entries"] if isinstance(obj, dict) else obj
    m = np.array([[complex(re, im) for re, im in row] for row in entries])
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    paths = ()
    if isinstance(obj, dict) and "basis" in obj:
        paths = tuple(tuple(I if t == "I" else EPS for t in s.split()) for s in obj["basis"])
    return m, paths
