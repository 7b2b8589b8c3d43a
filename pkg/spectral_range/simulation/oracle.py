"""
Brute force reference values and random generators for cross checks
"""
import itertools
import logging
from typing import Callable, Dict, List, Optional, Tuple

import networkx as nx
import numpy as np
import scipy.linalg
from pydantic import BaseModel

from spectral_range.base import BudgetError, get_settings
from spectral_range.cycles import cycle_means
from spectral_range.models import ComplexMatrix, NonnegMatrix, RowUniformMatrix
from spectral_range.sigma import DiagonalCount, diagonal_product_count
from spectral_range.sunflower import extremal_params
from spectral_range.utils import MatrixLike, as_array


class OracleBudget(BaseModel):
    max_n: int = 7
    max_cycles: int = 100000
    rng_seed: int = 0

    @classmethod
    def from_settings(cls) -> "OracleBudget":
        oracle = get_settings().oracle
        return cls(
            max_n=oracle.max_n, max_cycles=oracle.max_cycles, rng_seed=oracle.seed
        )


class CycleEnumeration(BaseModel):
    mu: float
    nu: float
    cycles: List[Tuple[List[int], float]]


class DiagonalEnumeration(BaseModel):
    count: int
    products: List[Tuple[List[int], float]]


class SunflowerEnumeration(BaseModel):
    out_edges: List[List[Optional[int]]]
    means: List[float]


def _budget(budget: Optional[OracleBudget]) -> OracleBudget:
    return budget if budget is not None else OracleBudget.from_settings()


def _check_size(n: int, budget: OracleBudget) -> None:
    if n > budget.max_n:
        raise BudgetError(f"n = {n} exceeds oracle limit {budget.max_n}")


def enumerate_cycle_means(
    a: MatrixLike, budget: Optional[OracleBudget] = None
) -> CycleEnumeration:
    """
    Geometric means of all simple cycles
    """
    budget = _budget(budget)
    entries = as_array(a)
    _check_size(entries.shape[0], budget)
    g = nx.DiGraph()
    g.add_nodes_from(range(entries.shape[0]))
    g.add_edges_from(zip(*np.nonzero(entries)))
    cycles = []
    for cycle in nx.simple_cycles(g):
        if len(cycles) >= budget.max_cycles:
            raise BudgetError("too many cycles")
        weights = [entries[i, cycle[(k + 1) % len(cycle)]] for k, i in enumerate(cycle)]
        mean = float(np.prod(weights) ** (1.0 / len(cycle)))
        cycles.append(([int(i) for i in cycle], mean))
    if not cycles:
        return CycleEnumeration(mu=0.0, nu=0.0, cycles=[])
    means = [m for _, m in cycles]
    return CycleEnumeration(mu=max(means), nu=min(means), cycles=cycles)


def enumerate_diagonal_products(
    b: MatrixLike, budget: Optional[OracleBudget] = None
) -> DiagonalEnumeration:
    """
    All nonzero generalized diagonal products
    """
    budget = _budget(budget)
    entries = as_array(b)
    n = entries.shape[0]
    _check_size(n, budget)
    products = []
    for perm in itertools.permutations(range(n)):
        value = float(np.prod(entries[np.arange(n), perm]))
        if value != 0:
            products.append((list(perm), value))
    return DiagonalEnumeration(count=len(products), products=products)


def _functional_mean(entries: np.ndarray, out_edge: List[Optional[int]]) -> float:
    """
    Largest cycle mean of a graph where every node has at most one out edge
    """
    best = 0.0
    for start in range(len(out_edge)):
        path = [start]
        node = out_edge[start]
        while node is not None and node not in path:
            path.append(node)
            node = out_edge[node]
        if node == start:
            weights = [entries[i, out_edge[i]] for i in path]
            best = max(best, float(np.prod(weights) ** (1.0 / len(path))))
    return best


def enumerate_sunflowers(
    b: MatrixLike, budget: Optional[OracleBudget] = None
) -> SunflowerEnumeration:
    """
    Every choice of one outgoing edge per node with its cycle mean
    """
    budget = _budget(budget)
    entries = as_array(b)
    choices = [
        [int(j) for j in np.nonzero(row)[0]] or [None] for row in entries
    ]
    total = int(np.prod([len(c) for c in choices]))
    if total > budget.max_cycles:
        raise BudgetError(f"{total} sunflowers exceed the budget")
    out_edges, means = [], []
    for choice in itertools.product(*choices):
        out_edges.append(list(choice))
        means.append(_functional_mean(entries, list(choice)))
    return SunflowerEnumeration(out_edges=out_edges, means=means)


def small_determinant(c, budget: Optional[OracleBudget] = None) -> complex:
    """
    Determinant from the LU factorization
    """
    entries = np.array(c.entries if isinstance(c, ComplexMatrix) else c, dtype=complex)
    _check_size(entries.shape[0], _budget(budget))
    p, _, u = scipy.linalg.lu(entries)
    sign = np.linalg.det(p)
    return complex(sign * np.prod(np.diag(u)))


def small_eigenvalues(c) -> np.ndarray:
    entries = np.array(c.entries if isinstance(c, ComplexMatrix) else c, dtype=complex)
    return np.linalg.eigvals(entries)


def random_aux_preimage(b: RowUniformMatrix, seed: int) -> NonnegMatrix:
    """
    Random A with aux(A) = b; weights uniform in [0.05, 1] renormalized
    """
    rng = np.random.default_rng(seed)
    weights = np.where(b.support, rng.uniform(0.05, 1.0, size=b.support.shape), 0.0)
    sums = weights.sum(axis=1)
    sums[sums == 0] = 1.0
    return NonnegMatrix(entries=weights / sums[:, None] * b.row_value[:, None])


def random_complex_preimage(b: RowUniformMatrix, seed: int) -> ComplexMatrix:
    """
    Random complex A with aux of its moduli equal to b
    """
    rng = np.random.default_rng(seed)
    moduli = random_aux_preimage(b, seed).entries
    phases = np.exp(2j * np.pi * rng.uniform(size=moduli.shape))
    return ComplexMatrix(entries=moduli * phases)


def random_nonneg(
    n: int, seed: int, density: float = 0.5, high: float = 2.0
) -> NonnegMatrix:
    rng = np.random.default_rng(seed)
    mask = rng.uniform(size=(n, n)) < density
    return NonnegMatrix(entries=np.where(mask, rng.uniform(0.1, high, size=(n, n)), 0.0))


def random_irreducible(n: int, seed: int, density: float = 0.4) -> NonnegMatrix:
    """
    Random matrix whose graph contains the cycle 1 -> 2 -> ... -> n -> 1
    """
    rng = np.random.default_rng(seed)
    entries = random_nonneg(n, seed, density).entries.copy()
    for i in range(n):
        j = (i + 1) % n
        if entries[i, j] == 0:
            entries[i, j] = rng.uniform(0.1, 2.0)
    return NonnegMatrix(entries=entries)


def random_row_uniform(n: int, seed: int, density: float = 0.4) -> RowUniformMatrix:
    rng = np.random.default_rng(seed)
    support = rng.uniform(size=(n, n)) < density
    return RowUniformMatrix(support=support, row_value=rng.uniform(0.5, 5.0, size=n))


def check_cycle_means(trials: int, seed: int) -> List[str]:
    failures = []
    for trial in range(trials):
        n = 2 + trial % 6
        a = random_nonneg(n, seed + trial)
        expected = enumerate_cycle_means(a)
        got = cycle_means(a)
        for name in ("mu", "nu"):
            x, y = getattr(got, name), getattr(expected, name)
            if abs(x - y) > 1e-10 * max(abs(y), 1.0):
                failures.append(f"trial {trial}: {name} {x} != {y}")
    return failures


def _count_kind(count: int) -> DiagonalCount:
    if count == 0:
        return DiagonalCount.ZERO
    if count == 1:
        return DiagonalCount.ONE
    return DiagonalCount.MANY


def check_diagonal_products(trials: int, seed: int) -> List[str]:
    failures = []
    for trial in range(trials):
        b = random_row_uniform(1 + trial % 7, seed + trial, density=0.5)
        count = enumerate_diagonal_products(b).count
        expected = _count_kind(count)
        got = diagonal_product_count(b)
        if got != expected:
            failures.append(f"trial {trial}: {got.value} != {expected.value}")
    return failures


def check_sunflowers(trials: int, seed: int) -> List[str]:
    failures = []
    for trial in range(trials):
        b = random_row_uniform(2 + trial % 4, seed + trial, density=0.5)
        means = enumerate_sunflowers(b).means
        params = extremal_params(b)
        for name, value in (("M", max(means)), ("m", min(means))):
            got = getattr(params, name)
            if abs(got - value) > 1e-10 * max(value, 1.0):
                failures.append(f"trial {trial}: {name} {got} != {value}")
    return failures


CHECKS: Dict[str, Callable[[int, int], List[str]]] = {
    "cycle-means": check_cycle_means,
    "diagonal-products": check_diagonal_products,
    "sunflowers": check_sunflowers,
}


def run_check(name: str, trials: Optional[int] = None, seed: Optional[int] = None) -> List[str]:
    """
    Run a named cross check and return the failure messages
    """
    settings = get_settings()
    if name not in CHECKS:
        raise KeyError(f"unknown check {name}")
    trials = settings.oracle.trials if trials is None else trials
    seed = settings.oracle.seed if seed is None else seed
    failures = CHECKS[name](trials, seed)
    logging.info(f"{name}: {trials} trials, {len(failures)} failures")
    return failures
