"""Deterministic JSON and CSV emission for the command-line reports.

Identical inputs must produce bitwise-identical files, so floats are
printed through one fixed %.17g path (17 significant digits round-trip
float64 exactly and never depend on locale), keys keep insertion order,
and lines end with LF regardless of platform.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np

FLOAT_FORMAT = "%.17g"

CSV_HEADER = "kappa_rad_s,fidelity_op,fidelity_ossp"


def format_float(x: float) -> str:
    return FLOAT_FORMAT % float(x)


def _emit(obj, indent: int) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {_emit(v, indent + 1)}' for k, v in obj.items())
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        items = ",\n".join(f"{pad}  {_emit(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_stable(payload: dict) -> str:
    """JSON text with insertion-ordered keys and %.17g floats."""
    return _emit(payload, 0) + "\n"


def write_json(path, payload: dict) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(dumps_stable(payload))


def complex_matrix_payload(m: np.ndarray) -> dict:
    """A complex matrix as separate real/imag row lists."""
    m = np.asarray(m, dtype=complex)
    return {
        "re": [[float(x) for x in row] for row in m.real],
        "im": [[float(x) for x in row] for row in m.imag],
    }


def write_sweep_csv(path, rows: Iterable[Sequence[float]]) -> None:
    """rows of (kappa_rad_s, fidelity_op, fidelity_ossp)."""
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for kappa, f_op, f_ossp in rows:
            fh.write(f"{format_float(kappa)},{format_float(f_op)},{format_float(f_ossp)}\n")
