"""
Auxiliary matrix map, Hadamard inverse and the Frobenius normal form
"""
from typing import Optional, Sequence, Union

import networkx as nx
import numpy as np

from spectral_range.models import (
    ClassAccess,
    ClassKind,
    ComplexMatrix,
    FrobeniusForm,
    NonnegMatrix,
    RowUniformMatrix,
)
from spectral_range.utils import MatrixLike, as_array


def aux(a: NonnegMatrix) -> RowUniformMatrix:
    """
    Row uniform matrix with the support of a and every nonzero entry
    equal to the row sum of its row
    """
    entries = as_array(a)
    return RowUniformMatrix(support=entries != 0, row_value=entries.sum(axis=1))


def aux_complex(a: ComplexMatrix) -> RowUniformMatrix:
    return aux(a.modulus())


def hadamard_inverse(a: NonnegMatrix) -> NonnegMatrix:
    entries = as_array(a)
    out = np.zeros_like(entries)
    mask = entries > 0
    out[mask] = 1.0 / entries[mask]
    return NonnegMatrix(entries=out)


def digraph(a: Union[MatrixLike, ComplexMatrix]) -> nx.DiGraph:
    """
    Associated graph of a matrix
    Note
    ----
    1) nodes are 0..n-1; edge (i, j) is present iff a_ij != 0
    2) edges carry the modulus of the entry as weight
    """
    if isinstance(a, ComplexMatrix):
        entries = np.abs(a.entries)
    else:
        entries = as_array(a)
    g = nx.DiGraph()
    g.add_nodes_from(range(entries.shape[0]))
    for i, j in zip(*np.nonzero(entries)):
        g.add_edge(int(i), int(j), weight=float(entries[i, j]))
    return g


def frobenius_form(b: MatrixLike) -> FrobeniusForm:
    """
    Strongly connected components in block lower triangular order
    b
        row uniform or nonnegative matrix
    Note
    ----
    1) Final classes come first; ties are broken by the smallest node
    2) The condensation is reversed so a topological order places
       every class after all classes it has access to
    """
    entries = as_array(b)
    g = digraph(entries)
    cond = nx.condensation(g)
    members = {c: sorted(cond.nodes[c]["members"]) for c in cond.nodes}
    order = list(
        nx.lexicographical_topological_sort(
            cond.reverse(copy=True), key=lambda c: members[c][0]
        )
    )
    classes = [members[c] for c in order]
    kinds = []
    access = []
    for c in order:
        nodes = members[c]
        if len(nodes) == 1 and entries[nodes[0], nodes[0]] == 0:
            kinds.append(ClassKind.TRIVIAL)
        else:
            kinds.append(ClassKind.NONTRIVIAL)
        if cond.out_degree(c) == 0:
            access.append(ClassAccess.FINAL)
        else:
            access.append(ClassAccess.TRANSIENT)
    permutation = [i for nodes in classes for i in nodes]
    return FrobeniusForm(
        permutation=permutation,
        classes=classes,
        class_kind=kinds,
        class_access=access,
    )


def is_irreducible(a: MatrixLike) -> bool:
    return frobenius_form(a).irreducible


def class_block(a: MatrixLike, nodes: Sequence[int]) -> np.ndarray:
    entries = as_array(a)
    idx = list(nodes)
    return entries[np.ix_(idx, idx)]


def exit_nodes(a: MatrixLike, nodes: Sequence[int]) -> list:
    """
    Nodes of a class having an edge to another class, ascending
    """
    entries = as_array(a)
    inside = np.zeros(entries.shape[0], dtype=bool)
    inside[list(nodes)] = True
    return sorted(
        i for i in nodes if np.any((entries[i] != 0) & ~inside)
    )


def is_k_dominated(
    reduced: RowUniformMatrix,
    b: RowUniformMatrix,
    k: Sequence[int],
    rtol: float = 1e-12,
) -> bool:
    """
    Check the relation reduced <=^K b
    reduced
        candidate row uniform matrix
    b
        reference row uniform matrix
    k
        rows (0-based) on which reduced must be strictly smaller
    Note
    ----
    1) both matrices share the same support
    2) row values are strictly smaller on K and equal elsewhere
    """
    if reduced.n != b.n or not np.array_equal(reduced.support, b.support):
        return False
    rows = set(k)
    for i in range(b.n):
        if not b.support[i].any():
            continue
        x, y = reduced.row_value[i], b.row_value[i]
        if i in rows:
            if not x < y * (1 - rtol):
                return False
        elif abs(x - y) > rtol * y:
            return False
    return True


def permuted(a: MatrixLike, form: Optional[FrobeniusForm] = None) -> np.ndarray:
    """
    Matrix with rows and columns in Frobenius order
    """
    entries = as_array(a)
    if form is None:
        form = frobenius_form(entries)
    p = form.permutation
    return entries[np.ix_(p, p)]
