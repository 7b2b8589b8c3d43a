"""
Value types shared across the package
"""
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, validator


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def _check_square(arr: np.ndarray) -> None:
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"matrix must be square, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("dimension must be at least 1")


class Level(str, Enum):
    MAX = "max"
    MIN = "min"


class ClassKind(str, Enum):
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"


class ClassAccess(str, Enum):
    FINAL = "final"
    TRANSIENT = "transient"


class MatrixModel(BaseModel):
    """
    Base for dense square matrices; entries are read only
    """

    entries: np.ndarray

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other: Any) -> bool:
        if type(self) is not type(other):
            return False
        return np.array_equal(self.entries, other.entries)

    def support(self) -> np.ndarray:
        return self.entries != 0


class NonnegMatrix(MatrixModel):
    @validator("entries", pre=True)
    def entries_should_be_nonnegative(cls, v):
        arr = np.array(v, dtype=float)
        _check_square(arr)
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        if np.any(arr < 0):
            raise ValueError("entries must be nonnegative")
        return _freeze(arr)

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "entries": self.entries.tolist()}


class ComplexMatrix(MatrixModel):
    @validator("entries", pre=True)
    def entries_should_be_finite(cls, v):
        arr = np.array(v, dtype=complex)
        _check_square(arr)
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        return _freeze(arr)

    def modulus(self) -> NonnegMatrix:
        return NonnegMatrix(entries=np.abs(self.entries))

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "entries": [[[z.real, z.imag] for z in row] for row in self.entries],
        }


class RowUniformMatrix(BaseModel):
    """
    Nonnegative matrix whose nonzero entries are constant in every row
    support
        boolean mask of nonzero entries
    row_value
        value of every nonzero entry of the row; 0 for rows without support
    """

    support: np.ndarray
    row_value: np.ndarray

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @validator("support", pre=True)
    def support_should_be_square(cls, v):
        arr = np.array(v, dtype=bool)
        _check_square(arr)
        return _freeze(arr)

    @validator("row_value", pre=True)
    def row_value_should_match_support(cls, v, values):
        arr = np.array(v, dtype=float)
        support = values.get("support")
        if support is None:
            raise ValueError("support is invalid")
        if arr.shape != (support.shape[0],):
            raise ValueError("row_value must have one value per row")
        has_support = support.any(axis=1)
        if not np.all(np.isfinite(arr[has_support])):
            raise ValueError("row values must be finite")
        if np.any(arr[has_support] <= 0):
            raise ValueError("row values must be positive on nonempty rows")
        arr = np.where(has_support, arr, 0.0)
        return _freeze(arr)

    @classmethod
    def from_dense(cls, arr: Any, rtol: float = 1e-12) -> "RowUniformMatrix":
        """
        Build from a dense matrix, rejecting rows whose nonzero entries differ
        arr
            square nonnegative matrix
        rtol
            relative tolerance for equal entries in a row
        """
        arr = np.array(arr, dtype=float)
        _check_square(arr)
        if np.any(arr < 0):
            raise ValueError("entries must be nonnegative")
        support = arr != 0
        row_value = np.zeros(arr.shape[0])
        for i, row in enumerate(arr):
            values = row[support[i]]
            if len(values) == 0:
                continue
            if values.max() - values.min() > rtol * values.max():
                raise ValueError(f"row {i + 1} is not uniform")
            row_value[i] = values.max()
        return cls(support=support, row_value=row_value)

    @property
    def n(self) -> int:
        return self.support.shape[0]

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, RowUniformMatrix):
            return False
        return np.array_equal(self.support, other.support) and np.allclose(
            self.row_value, other.row_value, rtol=1e-12, atol=0
        )

    def out_degree(self) -> np.ndarray:
        return self.support.sum(axis=1)

    def dense(self) -> np.ndarray:
        return np.where(self.support, self.row_value[:, None], 0.0)

    def uniform_split(self) -> NonnegMatrix:
        """
        Matrix with every nonzero entry equal to row value / row support count
        """
        degree = np.maximum(self.out_degree(), 1)
        return NonnegMatrix(
            entries=np.where(self.support, (self.row_value / degree)[:, None], 0.0)
        )

    def block(self, nodes: Sequence[int]) -> "RowUniformMatrix":
        """
        Principal submatrix on the given nodes; row values are kept
        """
        idx = list(nodes)
        support = self.support[np.ix_(idx, idx)]
        return RowUniformMatrix(support=support, row_value=self.row_value[idx])

    def to_json(self) -> Dict[str, Any]:
        rows, cols = np.nonzero(self.support)
        return {
            "n": self.n,
            "support": [[int(i) + 1, int(j) + 1] for i, j in zip(rows, cols)],
            "row_value": [
                float(v) if self.support[i].any() else None
                for i, v in enumerate(self.row_value)
            ],
        }


class FrobeniusForm(BaseModel):
    """
    Classes of the associated graph in block lower triangular order
    Note
    ----
    1) Edges only go from a class to itself or to an earlier class
    2) Nodes are 0-based
    """

    permutation: List[int]
    classes: List[List[int]]
    class_kind: List[ClassKind]
    class_access: List[ClassAccess]

    @property
    def count(self) -> int:
        return len(self.classes)

    def class_of(self, node: int) -> int:
        for k, nodes in enumerate(self.classes):
            if node in nodes:
                return k
        raise IndexError(f"node {node} not in any class")

    def is_final(self, k: int) -> bool:
        return self.class_access[k] == ClassAccess.FINAL

    def is_trivial(self, k: int) -> bool:
        return self.class_kind[k] == ClassKind.TRIVIAL

    @property
    def nontrivial(self) -> List[int]:
        return [k for k in range(self.count) if not self.is_trivial(k)]

    @property
    def final(self) -> List[int]:
        return [k for k in range(self.count) if self.is_final(k)]

    @property
    def irreducible(self) -> bool:
        return self.count == 1 and not self.is_trivial(0)

    def to_json(self) -> Dict[str, Any]:
        return {
            "permutation": [p + 1 for p in self.permutation],
            "classes": [[i + 1 for i in c] for c in self.classes],
            "class_kind": [k.value for k in self.class_kind],
            "class_access": [a.value for a in self.class_access],
        }


class CycleMeanReport(BaseModel):
    mu: float = 0.0
    nu: float = 0.0
    has_cycle: bool = False


class CriticalGraph(BaseModel):
    nodes: List[int]
    edges: List[List[int]]
    strict_nodes: List[int]

    def to_json(self) -> Dict[str, Any]:
        return {
            "nodes": [i + 1 for i in self.nodes],
            "edges": [[i + 1, j + 1] for i, j in self.edges],
            "strict_nodes": [i + 1 for i in self.strict_nodes],
        }


class ScalingVector(BaseModel):
    x: np.ndarray

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @validator("x", pre=True)
    def x_should_be_positive(cls, v):
        arr = np.array(v, dtype=float)
        if arr.ndim != 1 or len(arr) == 0:
            raise ValueError("scaling must be a nonempty vector")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise ValueError("scaling must be strictly positive")
        return _freeze(arr)

    @property
    def n(self) -> int:
        return len(self.x)

    def normalized(self) -> "ScalingVector":
        """
        Same direction with the largest component 1
        """
        return ScalingVector(x=self.x / self.x.max())

    def apply(self, a: np.ndarray) -> np.ndarray:
        """
        returns X^-1 A X
        """
        return a * self.x[None, :] / self.x[:, None]

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ScalingVector):
            return False
        return np.array_equal(self.x, other.x)
