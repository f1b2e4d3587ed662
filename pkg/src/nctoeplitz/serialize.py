"""Deterministic artifact serialization.

Floats are written with 17 significant digits, which round-trips IEEE
doubles bit-exactly, so repeated runs with identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import math

import numpy as np

from .fock import FockBasis, TruncatedOperator


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize {x}")
    return format(x, ".17g")


def dumps17(obj, indent: int = 0) -> str:
    """JSON text with all floats at 17 significant digits."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = ",\n".join(
            f'{pad}  "{k}": {dumps17(v, indent + 2).lstrip()}'
            for k, v in obj.items())
        return f"{pad}{{\n{items}\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        flat = all(not isinstance(v, (dict, list, tuple)) for v in obj)
        if flat:
            inner = ", ".join(dumps17(v).lstrip() for v in obj)
            return f"{pad}[{inner}]"
        items = ",\n".join(dumps17(v, indent + 2) for v in obj)
        return f"{pad}[\n{items}\n{pad}]"
    if isinstance(obj, bool):
        return pad + ("true" if obj else "false")
    if isinstance(obj, (int, np.integer)):
        return pad + str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return pad + format_float(float(obj))
    if isinstance(obj, str):
        return pad + '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if obj is None:
        return pad + "null"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def matrix_to_json_dict(op: TruncatedOperator) -> dict:
    m = op.matrix
    return {
        "d": op.basis.d,
        "N": op.basis.N,
        "hbar": op.basis.hbar,
        "order": "graded-lex",
        "re": [[float(v) for v in row] for row in m.real],
        "im": [[float(v) for v in row] for row in m.imag],
    }


def matrix_from_json_dict(doc: dict) -> TruncatedOperator:
    if doc.get("order") != "graded-lex":
        raise ValueError(f"unsupported basis order {doc.get('order')!r}")
    basis = FockBasis(int(doc["d"]), int(doc["N"]), float(doc["hbar"]))
    mat = np.array(doc["re"], dtype=float) + 1j * np.array(doc["im"], dtype=float)
    return TruncatedOperator(basis, mat)


def csv_text(rows: list[dict], columns: list[str]) -> str:
    """CSV with 17-significant-digit numeric cells."""
    def cell(v):
        if isinstance(v, (bool,)):
            return str(v).lower()
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        if isinstance(v, (float, np.floating)):
            return format_float(float(v))
        return str(v)

    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(cell(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def symbol_terms_json(sym) -> list[dict]:
    """Symbol terms as a sorted, serializable list."""
    out = []
    for e, c in sym.sorted_terms():
        c = complex(c)
        out.append({"exponents": list(e), "re": c.real, "im": c.imag})
    return out
