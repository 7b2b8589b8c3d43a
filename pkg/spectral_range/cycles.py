"""
Cycle means, critical graphs, max-plus closure and Perron roots
"""
import logging
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

from spectral_range.base import ConvergenceError, PreconditionError, get_settings
from spectral_range.matrix import class_block, frobenius_form
from spectral_range.models import (
    CriticalGraph,
    CycleMeanReport,
    FrobeniusForm,
    Level,
    NonnegMatrix,
    ScalingVector,
)
from spectral_range.utils import MatrixLike, as_array, log_weights


def _karp_max_mean(w: np.ndarray) -> float:
    """
    Maximum mean weight of a cycle in a strongly connected graph
    w
        log weights with -inf for absent edges
    """
    k = w.shape[0]
    d = np.full((k + 1, k), -np.inf)
    d[0, 0] = 0.0
    for m in range(1, k + 1):
        d[m] = np.max(d[m - 1][:, None] + w, axis=0)
    steps = k - np.arange(k)
    best = -np.inf
    for v in range(k):
        if not np.isfinite(d[k, v]):
            continue
        finite = np.isfinite(d[:k, v])
        values = (d[k, v] - d[:k, v][finite]) / steps[finite]
        best = max(best, values.min())
    return float(best)


def _class_means(entries: np.ndarray, nodes: List[int]) -> Tuple[float, float]:
    w = log_weights(class_block(entries, nodes))
    mu = np.exp(_karp_max_mean(w))
    nu = np.exp(-_karp_max_mean(-np.where(np.isfinite(w), w, np.inf)))
    return float(mu), float(nu)


def class_cycle_means(
    a: MatrixLike, form: Optional[FrobeniusForm] = None
) -> List[CycleMeanReport]:
    """
    Cycle means of every class, in the order of the Frobenius form
    Note
    ----
    1) trivial classes report has_cycle False and zero means
    """
    entries = as_array(a)
    if form is None:
        form = frobenius_form(entries)
    reports = []
    for k, nodes in enumerate(form.classes):
        if form.is_trivial(k):
            reports.append(CycleMeanReport())
            continue
        mu, nu = _class_means(entries, nodes)
        reports.append(CycleMeanReport(mu=mu, nu=nu, has_cycle=True))
    return reports


def cycle_means(a: MatrixLike) -> CycleMeanReport:
    """
    Maximal and minimal geometric cycle means
    Note
    ----
    1) mu = nu = 0 when the graph is acyclic
    """
    reports = [r for r in class_cycle_means(a) if r.has_cycle]
    if not reports:
        return CycleMeanReport()
    return CycleMeanReport(
        mu=max(r.mu for r in reports),
        nu=min(r.nu for r in reports),
        has_cycle=True,
    )


def kleene_star_maxplus(g: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """
    Max-plus closure I + g + g^2 + ...
    g
        square array of extended reals, -inf for absent edges
    tol
        allowed positive drift of cycle weights
    """
    if tol is None:
        tol = get_settings().tolerances.critical
    s = np.array(g, dtype=float)
    n = s.shape[0]
    for k in range(n):
        s = np.maximum(s, s[:, k : k + 1] + s[k : k + 1, :])
    diag = np.diag(s)
    finite = s[np.isfinite(s)]
    scale = max(1.0, float(np.max(np.abs(finite)))) if finite.size else 1.0
    if np.any(diag > tol * scale):
        raise PreconditionError("positive weight cycle, closure diverges")
    np.fill_diagonal(s, 0.0)
    return s


def _normalized_log(a: np.ndarray, level: Level, mean: float) -> np.ndarray:
    """
    Log weights normalized so that optimal cycles have weight zero
    Note
    ----
    1) for the minimal level the weights are those of the Hadamard inverse
    """
    w = log_weights(a)
    mask = np.isfinite(w)
    out = np.full(a.shape, -np.inf)
    if level == Level.MAX:
        out[mask] = w[mask] - np.log(mean)
    else:
        out[mask] = np.log(mean) - w[mask]
    return out


def critical_graph(a: MatrixLike, level: Level = Level.MAX) -> CriticalGraph:
    """
    Nodes and edges on cycles attaining mu (level max) or nu (level min)
    """
    entries = as_array(a)
    report = cycle_means(entries)
    if not report.has_cycle:
        raise PreconditionError("critical graph of an acyclic matrix")
    level = Level(level)
    mean = report.mu if level == Level.MAX else report.nu
    tol = get_settings().tolerances.critical
    g = _normalized_log(entries, level, mean)
    star = kleene_star_maxplus(g)
    edges = []
    for i, j in zip(*np.nonzero(entries)):
        if g[i, j] + star[j, i] >= -tol:
            edges.append([int(i), int(j)])
    nodes = sorted({i for e in edges for i in e})
    critical = {(i, j) for i, j in edges}
    strict = [
        i
        for i in nodes
        if all((i, int(j)) in critical for j in np.nonzero(entries[i])[0])
    ]
    return CriticalGraph(nodes=nodes, edges=edges, strict_nodes=strict)


def find_extremal_cycle(a: MatrixLike, level: Level = Level.MAX) -> List[int]:
    """
    A cycle of mean mu (or nu) as a list of nodes
    Note
    ----
    1) every cycle made of critical edges attains the optimal mean
    """
    cg = critical_graph(a, level)
    g = nx.DiGraph()
    g.add_edges_from(tuple(e) for e in cg.edges)
    edges = nx.find_cycle(g, source=cg.nodes[0])
    return [u for u, _ in edges]


def visualizing_vector(a: MatrixLike, mean: float) -> np.ndarray:
    """
    Positive x with a_ij x_j <= mean x_i on every edge
    mean
        any value not smaller than the maximal cycle mean
    Note
    ----
    1) x_i is the ordinary sum of the exponentiated star entries of row i
    """
    entries = as_array(a)
    g = _normalized_log(entries, Level.MAX, mean)
    star = kleene_star_maxplus(g)
    return np.exp(star).sum(axis=1)


def row_sum_bounds(a: MatrixLike) -> Tuple[float, float]:
    """
    Classical bounds min_i r_i <= rho <= max_i r_i
    """
    sums = as_array(a).sum(axis=1)
    return float(sums.min()), float(sums.max())


def _power_iteration(block: np.ndarray) -> Tuple[float, np.ndarray, bool]:
    """
    Perron root and vector of an irreducible block
    Note
    ----
    1) iterates on block/scale + I and stops when the Collatz-Wielandt
       bounds agree to the configured relative gap
    2) returns a flag telling whether the gap was reached
    """
    settings = get_settings()
    k = block.shape[0]
    if k == 1:
        return float(block[0, 0]), np.ones(1), True
    scale = float(block.sum(axis=1).max())
    m = block / scale + np.eye(k)
    x = np.ones(k)
    lo = hi = 1.0
    for it in range(settings.iterations.power):
        y = m @ x
        ratios = y / x
        lo, hi = float(ratios.min()), float(ratios.max())
        x = y / y.max()
        if hi - lo <= settings.tolerances.perron_gap * hi:
            logging.debug(f"power iteration converged in {it + 1} steps")
            return scale * ((lo + hi) / 2 - 1), x, True
    return scale * ((lo + hi) / 2 - 1), x, False


def perron_root(a: MatrixLike) -> float:
    """
    Spectral radius of a nonnegative matrix as the maximum over classes
    """
    entries = as_array(a)
    form = frobenius_form(entries)
    rho = 0.0
    for k in form.nontrivial:
        block = class_block(entries, form.classes[k])
        value, _, done = _power_iteration(block)
        if not done:
            logging.warning("power iteration did not converge, using eigvals")
            value = float(np.max(np.abs(np.linalg.eigvals(block))))
        rho = max(rho, value)
    return rho


def perron_vector(a: MatrixLike) -> ScalingVector:
    """
    Positive eigenvector for the Perron root, max component 1
    """
    entries = as_array(a)
    if not frobenius_form(entries).irreducible:
        raise PreconditionError("perron vector needs an irreducible matrix")
    _, x, done = _power_iteration(entries)
    if not done:
        raise ConvergenceError("power iteration did not converge")
    return ScalingVector(x=x / x.max())
