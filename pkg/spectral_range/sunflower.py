"""
Sunflower subgraphs

A sunflower keeps exactly one outgoing edge of every node that has one,
so each weakly connected piece holds at most one cycle.
"""
import logging
from collections import deque
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel

from spectral_range.base import PreconditionError
from spectral_range.cycles import class_cycle_means, cycle_means, find_extremal_cycle
from spectral_range.matrix import class_block, frobenius_form
from spectral_range.models import Level, NonnegMatrix, RowUniformMatrix
from spectral_range.utils import MatrixLike, as_array, one_based


class SunflowerSubgraph(BaseModel):
    """
    out_edge
        target of the retained edge of every node, None when the host
        has no outgoing edge
    weights
        host weight of the retained edge, 0 when absent
    """

    out_edge: List[Optional[int]]
    weights: List[float]

    @property
    def n(self) -> int:
        return len(self.out_edge)

    @property
    def edges(self) -> List[List[int]]:
        return [[i, j] for i, j in enumerate(self.out_edge) if j is not None]

    def to_matrix(self) -> NonnegMatrix:
        entries = np.zeros((self.n, self.n))
        for i, j in enumerate(self.out_edge):
            if j is not None:
                entries[i, j] = self.weights[i]
        return NonnegMatrix(entries=entries)

    def cycles(self) -> List[List[int]]:
        """
        Cycles of the functional graph, each starting at its smallest node
        """
        state = [0] * self.n
        found = []
        for start in range(self.n):
            path = []
            node = start
            while node is not None and state[node] == 0:
                state[node] = 1
                path.append(node)
                node = self.out_edge[node]
            if node is not None and state[node] == 1:
                cycle = path[path.index(node) :]
                k = cycle.index(min(cycle))
                found.append(cycle[k:] + cycle[:k])
            for v in path:
                state[v] = 2
        return sorted(found)

    def mean(self) -> float:
        return cycle_means(self.to_matrix()).mu

    def to_json(self) -> Dict:
        return {
            "out_edge": [None if j is None else j + 1 for j in self.out_edge],
            "weights": list(self.weights),
            "cycles": [one_based(c) for c in self.cycles()],
        }


def _host_weights(g: Union[MatrixLike, RowUniformMatrix]) -> np.ndarray:
    """
    Weight of every host edge; row uniform hosts give the row value
    """
    return as_array(g)


def _validate_cycle(entries: np.ndarray, cycle: Sequence[int]) -> List[int]:
    cycle = [int(i) for i in cycle]
    n = entries.shape[0]
    if not cycle or len(set(cycle)) != len(cycle):
        raise PreconditionError(f"{cycle} is not a cycle")
    for k, i in enumerate(cycle):
        j = cycle[(k + 1) % len(cycle)]
        if not (0 <= i < n and 0 <= j < n) or entries[i, j] == 0:
            raise PreconditionError(f"{cycle} is not a cycle of the graph")
    return cycle


def _grow(entries: np.ndarray, out_edge: List[Optional[int]], reached: set) -> None:
    """
    Greedy frontier growth toward the reached set
    Note
    ----
    1) the smallest (source, target) entering edge is taken every round
    """
    n = entries.shape[0]
    while True:
        best = None
        for u in range(n):
            if u in reached:
                continue
            for v in np.nonzero(entries[u])[0]:
                if int(v) in reached:
                    best = (u, int(v))
                    break
            if best:
                break
        if best is None:
            return
        u, v = best
        out_edge[u] = v
        reached.add(u)


def _subgraph(entries: np.ndarray, out_edge: List[Optional[int]]) -> SunflowerSubgraph:
    weights = [
        0.0 if j is None else float(entries[i, j]) for i, j in enumerate(out_edge)
    ]
    return SunflowerSubgraph(out_edge=out_edge, weights=weights)


def simple_sunflower(
    g: Union[MatrixLike, RowUniformMatrix], gamma: Sequence[int]
) -> SunflowerSubgraph:
    """
    Sunflower whose unique cycle is gamma
    g
        strongly connected weighted digraph as a matrix
    gamma
        cycle of g as a list of 0-based nodes
    """
    entries = _host_weights(g)
    if not frobenius_form(entries).irreducible:
        raise PreconditionError("graph must be strongly connected")
    gamma = _validate_cycle(entries, gamma)
    out_edge: List[Optional[int]] = [None] * entries.shape[0]
    for k, i in enumerate(gamma):
        out_edge[i] = gamma[(k + 1) % len(gamma)]
    _grow(entries, out_edge, set(gamma))
    return _subgraph(entries, out_edge)


def thin_sunflower(
    b: RowUniformMatrix, chosen_cycles: Sequence[Sequence[int]]
) -> SunflowerSubgraph:
    """
    Sunflower whose cycles are exactly the chosen ones
    b
        row uniform matrix
    chosen_cycles
        one cycle for every nontrivial final class
    Note
    ----
    1) final classes get a simple sunflower of their chosen cycle
    2) every other class is a tree directed to its exit node, the smallest
       node with an edge to another class, which points to the
       smallest target outside the class
    """
    entries = _host_weights(b)
    form = frobenius_form(entries)
    n = entries.shape[0]
    out_edge: List[Optional[int]] = [None] * n
    pending = {k for k in form.final if not form.is_trivial(k)}
    for cycle in chosen_cycles:
        cycle = _validate_cycle(entries, cycle)
        k = form.class_of(cycle[0])
        if k not in pending or any(form.class_of(i) != k for i in cycle):
            raise PreconditionError(
                f"cycle {cycle} is not inside a distinct nontrivial final class"
            )
        pending.discard(k)
        nodes = form.classes[k]
        local = simple_sunflower(
            class_block(entries, nodes), [nodes.index(i) for i in cycle]
        )
        for pos, target in enumerate(local.out_edge):
            out_edge[nodes[pos]] = nodes[target]
    if pending:
        raise PreconditionError("a cycle is needed for every nontrivial final class")
    for k, nodes in enumerate(form.classes):
        if form.is_final(k):
            continue
        inside = set(nodes)
        exit_node = min(
            i for i in nodes if any(int(j) not in inside for j in np.nonzero(entries[i])[0])
        )
        out_edge[exit_node] = min(
            int(j) for j in np.nonzero(entries[exit_node])[0] if int(j) not in inside
        )
        queue = deque([exit_node])
        seen = {exit_node}
        while queue:
            v = queue.popleft()
            for u in sorted(nodes):
                if u not in seen and entries[u, v] != 0:
                    out_edge[u] = v
                    seen.add(u)
                    queue.append(u)
    return _subgraph(entries, out_edge)


def sunflower_through(
    b: Union[MatrixLike, RowUniformMatrix], cycles: Sequence[Sequence[int]]
) -> SunflowerSubgraph:
    """
    Sunflower containing the given disjoint cycles
    Note
    ----
    1) nodes without outgoing edges seed the growth as well
    2) final classes left unreached get a cycle of minimal mean
    """
    entries = _host_weights(b)
    n = entries.shape[0]
    out_edge: List[Optional[int]] = [None] * n
    reached = {i for i in range(n) if not entries[i].any()}
    for cycle in cycles:
        cycle = _validate_cycle(entries, cycle)
        if reached.intersection(cycle):
            raise PreconditionError("cycles must be disjoint")
        for k, i in enumerate(cycle):
            out_edge[i] = cycle[(k + 1) % len(cycle)]
        reached.update(cycle)
    _grow(entries, out_edge, reached)
    form = frobenius_form(entries)
    for k in form.final:
        nodes = form.classes[k]
        if form.is_trivial(k) or reached.intersection(nodes):
            continue
        local = find_extremal_cycle(class_block(entries, nodes), Level.MIN)
        cycle = [nodes[i] for i in local]
        for pos, i in enumerate(cycle):
            out_edge[i] = cycle[(pos + 1) % len(cycle)]
        reached.update(cycle)
        _grow(entries, out_edge, reached)
    return _subgraph(entries, out_edge)


def _final_min_cycles(entries: np.ndarray) -> List[List[int]]:
    form = frobenius_form(entries)
    cycles = []
    for k in form.final:
        if form.is_trivial(k):
            continue
        nodes = form.classes[k]
        local = find_extremal_cycle(class_block(entries, nodes), Level.MIN)
        cycles.append([nodes[i] for i in local])
    return cycles


def minimal_sunflower(b: RowUniformMatrix) -> SunflowerSubgraph:
    """
    Thin sunflower through anticritical cycles of the final classes;
    its cycle mean is m(B)
    """
    return thin_sunflower(b, _final_min_cycles(as_array(b)))


def maximal_sunflower(b: RowUniformMatrix) -> SunflowerSubgraph:
    """
    Sunflower through a critical cycle; its cycle mean is M(B)
    """
    entries = as_array(b)
    if not cycle_means(entries).has_cycle:
        return thin_sunflower(b, [])
    critical = find_extremal_cycle(entries, Level.MAX)
    logging.debug(f"maximal sunflower through {critical}")
    return sunflower_through(entries, [critical])


class ExtremalParams(BaseModel):
    M: float
    m: float


def extremal_params(b: RowUniformMatrix) -> ExtremalParams:
    """
    M(B) = mu(B) and m(B) = largest nu over the final classes
    """
    entries = as_array(b)
    form = frobenius_form(entries)
    reports = class_cycle_means(entries, form)
    upper = max([r.mu for r in reports if r.has_cycle], default=0.0)
    lower = max(
        [reports[k].nu for k in form.final if reports[k].has_cycle], default=0.0
    )
    return ExtremalParams(M=upper, m=lower)
