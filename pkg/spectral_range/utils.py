"""
General utility functions for conversion and tolerance checks
"""
from typing import Any, Iterable, List, Sequence, Union

import numpy as np

from spectral_range.models import ComplexMatrix, NonnegMatrix, RowUniformMatrix

MatrixLike = Union[NonnegMatrix, RowUniformMatrix, np.ndarray]


def as_array(a: MatrixLike) -> np.ndarray:
    """
    Dense float array from any of the matrix types
    """
    if isinstance(a, RowUniformMatrix):
        return a.dense()
    if isinstance(a, NonnegMatrix):
        return np.array(a.entries, dtype=float)
    if isinstance(a, ComplexMatrix):
        raise TypeError("complex matrix given where a nonnegative one is expected")
    return np.array(a, dtype=float)


def log_weights(a: np.ndarray) -> np.ndarray:
    """
    Entrywise log with -inf on zero entries
    """
    out = np.full(a.shape, -np.inf)
    mask = a > 0
    out[mask] = np.log(a[mask])
    return out


def isclose(x: float, y: float, rel: float = 1e-10) -> bool:
    """
    Relative closeness with the scale taken as max(|x|, |y|, 1)
    """
    return abs(x - y) <= rel * max(abs(x), abs(y), 1.0)


def sup_norm(v: np.ndarray) -> float:
    return float(np.max(np.abs(v))) if len(v) else 0.0


def one_based(nodes: Iterable[int]) -> List[int]:
    return [int(i) + 1 for i in nodes]


def zero_based(nodes: Sequence[Any]) -> List[int]:
    """
    Convert 1-based node labels to 0-based indices
    """
    out = []
    for i in nodes:
        i = int(i)
        if i < 1:
            raise ValueError(f"node labels are 1-based, got {i}")
        out.append(i - 1)
    return out


def complex_to_pairs(arr: np.ndarray) -> List:
    """
    Nested lists with every complex number as [re, im]
    """
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [complex_to_pairs(x) for x in arr]
