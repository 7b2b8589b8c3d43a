"""
Matrix files read and written by the command line
"""
import json
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from spectral_range.base import InputError
from spectral_range.models import ComplexMatrix, NonnegMatrix, RowUniformMatrix

PathLike = Union[str, Path]


def _read_json(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})")
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def _check_n(data: Dict[str, Any], size: int, path: Path) -> None:
    n = data.get("n")
    if n is not None and n != size:
        raise InputError(f"{path}: n = {n} does not match {size} rows")


def _parse_entries(rows: Any, path: Path) -> Union[NonnegMatrix, ComplexMatrix]:
    """
    Real entries give a nonnegative matrix, any [re, im] pair a complex one
    """
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{path}: entries must be a list of rows")
    is_complex = any(isinstance(x, list) for r in rows for x in r)
    try:
        if is_complex:
            values = [
                [complex(*x) if isinstance(x, list) else complex(x) for x in r]
                for r in rows
            ]
            return ComplexMatrix(entries=np.array(values, dtype=complex))
        return NonnegMatrix(entries=np.array(rows, dtype=float))
    except (TypeError, ValueError) as e:
        raise InputError(f"{path}: {e}")


def load_matrix(path: PathLike) -> Union[NonnegMatrix, ComplexMatrix]:
    """
    Load a dense matrix
    path
        csv file of comma separated rows or a json file
        with keys n and entries
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"{path}: file not found")
    if path.suffix.lower() == ".json":
        data = _read_json(path)
        if "entries" not in data:
            raise InputError(f"{path}: missing entries")
        matrix = _parse_entries(data["entries"], path)
        _check_n(data, matrix.n, path)
        return matrix
    try:
        arr = np.loadtxt(path, delimiter=",", ndmin=2)
        return NonnegMatrix(entries=arr)
    except ValueError as e:
        raise InputError(f"{path}: {e}")


def load_nonneg(path: PathLike) -> NonnegMatrix:
    matrix = load_matrix(path)
    if isinstance(matrix, ComplexMatrix):
        raise InputError(f"{path}: a real nonnegative matrix is required")
    return matrix


def load_row_uniform(path: PathLike) -> RowUniformMatrix:
    """
    Load a row uniform matrix
    Note
    ----
    1) json files may give support (1-based pairs) and row_value
    2) any dense matrix file is accepted when its rows are uniform
    """
    path = Path(path)
    if path.suffix.lower() == ".json" and path.exists():
        data = _read_json(path)
        if "support" in data:
            n = data.get("n")
            if not isinstance(n, int) or n < 1:
                raise InputError(f"{path}: n must be a positive integer")
            support = np.zeros((n, n), dtype=bool)
            for pair in data["support"]:
                i, j = pair
                if not (1 <= i <= n and 1 <= j <= n):
                    raise InputError(f"{path}: support pair {pair} out of range")
                support[i - 1, j - 1] = True
            values = [0.0 if v is None else v for v in data.get("row_value", [])]
            try:
                return RowUniformMatrix(support=support, row_value=values)
            except ValueError as e:
                raise InputError(f"{path}: {e}")
    matrix = load_nonneg(path)
    try:
        return RowUniformMatrix.from_dense(matrix.entries)
    except ValueError as e:
        raise InputError(f"{path}: {e}")


def dump_report(report: Dict[str, Any]) -> str:
    """
    JSON text with floats in shortest round trip form
    """
    return json.dumps(report, indent=2, allow_nan=False, default=_default)


def _default(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"{type(obj)} is not serializable")
