"""Byte-stable JSON and tab-delimited rendering of CLI reports.

Floats are written with 17 significant digits, complex numbers as ``[re, im]``
pairs, and dict keys keep insertion order, so equal inputs give equal bytes.
"""

from __future__ import annotations

import json
import math
import numbers

import numpy as np

__all__ = ["to_plain", "dumps", "table"]


def to_plain(obj):
    """Turn numpy values and complex numbers into JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, numbers.Integral):
        return int(obj)
    if isinstance(obj, numbers.Complex) and not isinstance(obj, numbers.Real):
        z = complex(obj)
        return [float(z.real), float(z.imag)]
    if isinstance(obj, numbers.Real):
        return float(obj)
    return obj


def _number(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite float {x!r}")
    return format(x + 0.0, ".17g")  # + 0.0 turns -0.0 into 0.0


def _encode(obj, indent: int, level: int) -> str:
    if indent == 0:
        return _compact(obj)
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        # rows of scalars stay on one line to keep matrices readable
        if all(not isinstance(v, (dict, list)) for v in obj) or all(
            isinstance(v, list) and all(not isinstance(u, (dict, list)) for u in v)
            for v in obj
        ):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _number(obj)
    return json.dumps(obj, ensure_ascii=False)


def _compact(obj) -> str:
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_compact(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, list):
        return "[" + ", ".join(_compact(v) for v in obj) + "]"
    return _encode(obj, 2, 0)


def dumps(obj, indent: int = 2) -> str:
    return _encode(to_plain(obj), indent, 0) + "\n"


def _flatten(prefix: str, obj, out: list[tuple[str, str]]):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    else:
        out.append((prefix, _compact(obj)))


def table(obj) -> str:
    """One ``key<TAB>value`` line per leaf, nested keys joined with dots."""
    rows: list[tuple[str, str]] = []
    _flatten("", to_plain(obj), rows)
    return "".join(f"{k}\t{v}\n" for k, v in rows)
