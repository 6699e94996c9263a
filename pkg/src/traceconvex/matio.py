"""Matrix JSON schema: {"dim": n, "entries": [[[re, im], ...], ...]} with an optional
"factors": [d1, d2(, d3)] key for labeled matrices. Values round-trip at full float
precision through the shortest-round-trip decimal encoding of json."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import SchemaError
from .tensorops import LabeledMatrix, labeled

__all__ = [
    "matrix_to_obj",
    "matrix_from_obj",
    "save_matrix",
    "load_matrix",
    "load_labeled",
]


def matrix_to_obj(mat, factors=None) -> dict:
    mat = np.asarray(mat, dtype=complex)
    obj = {
        "dim": int(mat.shape[0]),
        "entries": [[[z.real, z.imag] for z in row] for row in mat],
    }
    if factors is not None:
        obj["factors"] = [int(d) for d in factors]
    return obj


def _bad(msg: str) -> SchemaError:
    return SchemaError(f"matrix JSON: {msg}")


def matrix_from_obj(obj) -> tuple[np.ndarray, tuple[int, ...] | None]:
    if not isinstance(obj, dict):
        raise _bad("top level must be an object")
    try:
        dim = int(obj["dim"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise _bad("missing or malformed 'dim'/'entries'") from exc
    if not isinstance(entries, list) or len(entries) != dim:
        raise _bad(f"'entries' must be a list of {dim} rows")
    mat = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != dim:
            raise _bad(f"row {i} must hold {dim} entries")
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(x, (int, float)) for x in cell)
            ):
                raise _bad(f"entry [{i}][{j}] must be an [re, im] pair")
            mat[i, j] = complex(cell[0], cell[1])
    factors = obj.get("factors")
    if factors is not None:
        if not isinstance(factors, list) or not all(
            isinstance(d, int) and d > 0 for d in factors
        ):
            raise _bad("'factors' must be a list of positive integers")
        if int(np.prod(factors)) != dim:
            raise _bad(f"product of factors {factors} != dim {dim}")
        factors = tuple(factors)
    return mat, factors


def save_matrix(path, mat, factors=None) -> None:
    Path(path).write_text(json.dumps(matrix_to_obj(mat, factors)) + "\n")


def load_matrix(path) -> tuple[np.ndarray, tuple[int, ...] | None]:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise _bad(f"{path}: invalid JSON ({exc})") from exc
    return matrix_from_obj(obj)


def load_labeled(path) -> LabeledMatrix:
    mat, factors = load_matrix(path)
    if factors is None:
        raise _bad(f"{path}: 'factors' key required for a labeled matrix")
    return labeled(mat, factors)
