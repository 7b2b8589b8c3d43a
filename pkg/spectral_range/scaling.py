"""
Diagonal similarity scalings

Visualization makes every entry of X^-1 A X at most mu(A) with equality
exactly on critical edges; antivisualization is the nu counterpart.
Sum visualization makes every entry at most a given level and every
row sum at least that level.
"""
import logging
from enum import Enum
from typing import Iterator, List, Optional

import numpy as np
from pydantic import BaseModel

from spectral_range.base import (
    ConvergenceError,
    InfeasibleError,
    PreconditionError,
    VerificationError,
    get_settings,
)
from spectral_range.cycles import (
    critical_graph,
    cycle_means,
    perron_root,
    perron_vector,
    visualizing_vector,
)
from spectral_range.matrix import aux, frobenius_form, hadamard_inverse
from spectral_range.models import Level, NonnegMatrix, ScalingVector
from spectral_range.utils import MatrixLike, as_array, isclose, sup_norm


class RowStatus(str, Enum):
    TIGHT = "tight"
    SLACK = "slack"


class ScalingCase(str, Enum):
    EQUAL = "equal"
    STRICT = "strict"


class RowInteraction(BaseModel):
    level: Level
    status: List[RowStatus]
    ratios: List[float]
    strict_nodes: List[int]


class AevddScalings(BaseModel):
    mu: float
    nu: float
    rho: float
    substochastic_scaling: ScalingVector
    superstochastic_scaling: ScalingVector
    case: ScalingCase


def _require_irreducible(entries: np.ndarray) -> None:
    if not frobenius_form(entries).irreducible:
        raise PreconditionError("matrix must be irreducible")


def verify_visualization(
    a: MatrixLike, x: ScalingVector, level: Level = Level.MAX
) -> None:
    """
    Raise VerificationError unless x is a strict (anti)visualizing vector
    Note
    ----
    1) tight within the critical tolerance on critical edges
    2) strictly slack on every other edge
    """
    entries = as_array(a)
    tol = get_settings().tolerances.critical
    report = cycle_means(entries)
    mean = report.mu if level == Level.MAX else report.nu
    cg = critical_graph(entries, level)
    critical = {(i, j) for i, j in cg.edges}
    scaled = x.apply(entries)
    for i, j in zip(*np.nonzero(entries)):
        ratio = scaled[i, j] / mean
        if level == Level.MIN:
            ratio = 1.0 / ratio
        if (int(i), int(j)) in critical:
            if abs(ratio - 1) > tol:
                raise VerificationError(f"critical edge ({i + 1},{j + 1}) not tight")
        elif ratio >= 1 - tol:
            raise VerificationError(f"edge ({i + 1},{j + 1}) is not strictly slack")


def strict_visualizing_vector(a: MatrixLike) -> ScalingVector:
    """
    Positive x with a_ij x_j <= mu x_i, equality exactly on critical edges
    """
    entries = as_array(a)
    report = cycle_means(entries)
    if not report.has_cycle:
        raise PreconditionError("visualization needs a cycle")
    x = ScalingVector(x=visualizing_vector(entries, report.mu)).normalized()
    verify_visualization(entries, x, Level.MAX)
    return x


def strict_antivisualizing_vector(a: MatrixLike) -> ScalingVector:
    """
    Positive x with a_ij x_j >= nu x_i, equality exactly on anticritical edges
    Note
    ----
    1) computed as the reciprocal of a strict visualizing vector of the
       Hadamard inverse
    """
    entries = as_array(a)
    if not cycle_means(entries).has_cycle:
        raise PreconditionError("antivisualization needs a cycle")
    inverse = hadamard_inverse(NonnegMatrix(entries=entries))
    y = strict_visualizing_vector(inverse)
    x = ScalingVector(x=1.0 / y.x).normalized()
    verify_visualization(entries, x, Level.MIN)
    return x


def row_interaction(
    a: MatrixLike, x: ScalingVector, level: Level = Level.MAX
) -> RowInteraction:
    """
    Classify rows of A as tight or slack against a strict scaling of aux(A)
    a
        nonnegative matrix
    x
        strict (anti)visualizing vector of aux(a)
    level
        max compares (Ax)_i with mu x_i, min with nu x_i
    Note
    ----
    1) a row is tight iff its node is strictly (anti)critical in aux(a)
    """
    entries = as_array(a)
    b = aux(NonnegMatrix(entries=entries)).dense()
    level = Level(level)
    verify_visualization(b, x, level)
    report = cycle_means(b)
    mean = report.mu if level == Level.MAX else report.nu
    strict = set(critical_graph(b, level).strict_nodes)
    tol = get_settings().tolerances.critical
    ratios = (entries @ x.x) / (mean * x.x)
    status = []
    for i, ratio in enumerate(ratios):
        tight = abs(ratio - 1) <= tol
        if tight != (i in strict):
            raise VerificationError(f"row {i + 1} contradicts strict criticality")
        if not tight and (ratio > 1) == (level == Level.MAX):
            raise VerificationError(f"row {i + 1} on the wrong side of the mean")
        status.append(RowStatus.TIGHT if tight else RowStatus.SLACK)
    return RowInteraction(
        level=level,
        status=status,
        ratios=[float(r) for r in ratios],
        strict_nodes=sorted(strict),
    )


def aevdd_scalings(a: MatrixLike) -> AevddScalings:
    """
    Scalings making A/mu(B) substochastic and A/nu(B) superstochastic
    where B = aux(A)
    """
    entries = as_array(a)
    _require_irreducible(entries)
    b = aux(NonnegMatrix(entries=entries)).dense()
    report = cycle_means(b)
    rho = perron_root(entries)
    tol = get_settings().tolerances.equal_means
    sub = strict_visualizing_vector(b)
    if isclose(report.mu, report.nu, tol):
        return AevddScalings(
            mu=report.mu,
            nu=report.nu,
            rho=rho,
            substochastic_scaling=sub,
            superstochastic_scaling=sub,
            case=ScalingCase.EQUAL,
        )
    sup = strict_antivisualizing_vector(b)
    return AevddScalings(
        mu=report.mu,
        nu=report.nu,
        rho=rho,
        substochastic_scaling=sub,
        superstochastic_scaling=sup,
        case=ScalingCase.STRICT,
    )


def sum_visualization_iterates(
    g: np.ndarray, max_iter: Optional[int] = None, tol: Optional[float] = None
) -> Iterator[np.ndarray]:
    """
    Iterates of y -> min(y, G y) started from the all ones vector
    g
        nonnegative matrix with all entries at most 1
    Note
    ----
    1) the sequence is entrywise nonincreasing
    2) stops once the sup norm step falls below tol relative to the
       largest component of y
    """
    settings = get_settings()
    if max_iter is None:
        max_iter = settings.iterations.fixed_point
    if tol is None:
        tol = settings.tolerances.fixed_point
    y = np.ones(g.shape[0])
    yield y
    for it in range(max_iter):
        new = np.minimum(y, g @ y)
        step = sup_norm(new - y)
        y = new
        yield y
        if step <= tol * float(np.max(y)):
            logging.debug(f"sum visualization converged in {it + 1} steps")
            return
    raise ConvergenceError("sum visualization did not converge")


def _check_sum_visualized(c: np.ndarray, level: float) -> None:
    tol = get_settings().tolerances.critical
    if np.any(c > level * (1 + tol)):
        raise VerificationError("scaled entry exceeds the level")
    if np.any(c.sum(axis=1) < level * (1 - tol)):
        raise VerificationError("scaled row sum below the level")


def sum_visualize(a: MatrixLike, level: float) -> ScalingVector:
    """
    Scaling X with every entry of X^-1 A X at most level and every
    row sum at least level
    a
        irreducible nonnegative matrix
    level
        value in [mu(a), rho(a)]
    Note
    ----
    1) phase one visualizes a/level so that all entries are at most 1
    2) phase two runs the fixed point iteration on the scaled matrix
    3) a level within tolerance of rho gives the Perron vector
    """
    entries = as_array(a)
    _require_irreducible(entries)
    settings = get_settings()
    tol = settings.tolerances.level
    mu = cycle_means(entries).mu
    rho = perron_root(entries)
    if level < mu * (1 - tol) or level > rho * (1 + tol):
        raise InfeasibleError(
            f"level {level} outside [{mu}, {rho}]: no sum visualization exists",
            clause="sum-visualization-range",
        )
    level = min(max(level, mu), rho)
    if level >= rho * (1 - tol):
        logging.debug("level at the Perron root, using the Perron vector")
        result = perron_vector(entries)
        _check_sum_visualized(result.apply(entries), level)
        return result
    x = visualizing_vector(entries, level)
    g = ScalingVector(x=x).apply(entries) / level
    y = None
    for y in sum_visualization_iterates(g):
        pass
    result = ScalingVector(x=x * y).normalized()
    _check_sum_visualized(result.apply(entries), level)
    return result


def sum_visualize_inverse(a: MatrixLike, level: float) -> ScalingVector:
    """
    Scaling X with every support entry of C = X^-1 A X at least level
    and sum_j level/c_ij >= 1 in every row
    Note
    ----
    1) sum visualization of the Hadamard inverse at 1/level, reciprocated
    """
    entries = as_array(a)
    inverse = hadamard_inverse(NonnegMatrix(entries=entries))
    y = sum_visualize(inverse, 1.0 / level)
    return ScalingVector(x=1.0 / y.x).normalized()
