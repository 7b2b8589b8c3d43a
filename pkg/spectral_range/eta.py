"""
Range of Perron roots of matrices with a given auxiliary matrix
"""
import logging
from typing import Dict, Optional

import numpy as np
import scipy.linalg
from pydantic import BaseModel

from spectral_range.base import (
    ConvergenceError,
    InfeasibleError,
    VerificationError,
    get_settings,
)
from spectral_range.cycles import class_cycle_means, perron_root
from spectral_range.matrix import aux, frobenius_form
from spectral_range.models import NonnegMatrix, RowUniformMatrix, ScalingVector
from spectral_range.sunflower import (
    extremal_params,
    maximal_sunflower,
    minimal_sunflower,
)
from spectral_range.utils import isclose


class PerronRange(BaseModel):
    lower: float
    upper: float
    lower_attained: bool
    upper_attained: bool
    degenerate: bool

    def to_json(self) -> Dict:
        return self.dict()


class RowBlend(BaseModel):
    """
    Closed form blend of two sunflower matrices differing in one row
    row
        0-based row that is blended
    weight
        weight moved from the maximal to the minimal sunflower target
    """

    matrix: NonnegMatrix
    row: int
    weight: float
    vector: ScalingVector

    def to_json(self) -> Dict:
        return {
            "row": self.row + 1,
            "weight": self.weight,
            "matrix": self.matrix.to_json(),
            "vector": self.vector.x.tolist(),
        }


class PerronRealization(BaseModel):
    """
    matrix
        matrix with aux equal to the target class and the requested Perron root
    rho
        Perron root of matrix
    blend
        closed form solution on the union of the extremal sunflowers when
        they differ in exactly one row
    """

    matrix: NonnegMatrix
    rho: float
    blend: Optional[RowBlend] = None

    def to_json(self) -> Dict:
        return {
            "matrix": self.matrix.to_json(),
            "rho": self.rho,
            "blend": self.blend.to_json() if self.blend else None,
        }


def describe_eta(b: RowUniformMatrix) -> PerronRange:
    """
    Interval [m(B), M(B)] with attainment of its endpoints
    Note
    ----
    1) the upper end is attained iff some final class has mu = nu = M(B)
    2) the lower end m > 0 is attained iff every final class with nu = m
       has mu = m; m = 0 is attained iff the graph is acyclic
    """
    entries = b.dense()
    form = frobenius_form(entries)
    reports = class_cycle_means(entries, form)
    params = extremal_params(b)
    upper, lower = params.M, params.m
    tol = get_settings().tolerances.equal_means
    acyclic = not any(r.has_cycle for r in reports)
    finals = [reports[k] for k in form.final if reports[k].has_cycle]
    if acyclic:
        return PerronRange(
            lower=0.0,
            upper=0.0,
            lower_attained=True,
            upper_attained=True,
            degenerate=True,
        )
    if isclose(upper, lower, tol):
        return PerronRange(
            lower=lower,
            upper=upper,
            lower_attained=True,
            upper_attained=True,
            degenerate=True,
        )
    upper_attained = any(
        isclose(r.mu, upper, tol) and isclose(r.nu, upper, tol) for r in finals
    )
    if lower > 0:
        lower_attained = all(
            isclose(r.mu, lower, tol) for r in finals if isclose(r.nu, lower, tol)
        )
    else:
        lower_attained = False
    return PerronRange(
        lower=lower,
        upper=upper,
        lower_attained=lower_attained,
        upper_attained=upper_attained,
        degenerate=False,
    )


def check_target(eta: PerronRange, target: float) -> None:
    """
    Raise InfeasibleError unless target belongs to the range
    Note
    ----
    1) targets within the endpoint tolerance of an unattained end are
       rejected
    """
    tol = get_settings().tolerances.endpoint
    near_lower = abs(target - eta.lower) <= tol * max(eta.lower, 1.0)
    near_upper = abs(target - eta.upper) <= tol * max(eta.upper, 1.0)
    if target < 0:
        raise InfeasibleError(f"target {target} is negative", clause="range")
    if eta.degenerate:
        if not (near_lower or near_upper):
            raise InfeasibleError(
                f"target {target} differs from the single Perron root {eta.upper}",
                clause="degenerate",
            )
        return
    if near_upper and not eta.upper_attained:
        raise InfeasibleError(
            f"target {target} equals M(B) = {eta.upper}, which is attained only "
            "when a final class has all cycle means equal to M(B)",
            clause="upper-endpoint",
        )
    if near_lower and not eta.lower_attained:
        raise InfeasibleError(
            f"target {target} equals m(B) = {eta.lower}, which is not attained "
            "for this class",
            clause="lower-endpoint",
        )
    if not (near_lower or near_upper) and not eta.lower < target < eta.upper:
        raise InfeasibleError(
            f"target {target} outside [m(B), M(B)] = [{eta.lower}, {eta.upper}]",
            clause="range",
        )


def closed_form_blend(b: RowUniformMatrix, target: float) -> Optional[RowBlend]:
    """
    Solve for the Perron root exactly when the extremal sunflowers differ
    in a single row
    b
        row uniform matrix
    target
        Perron root strictly between m(B) and M(B)
    Note
    ----
    1) the family is S_max + y e_t (e_lo - e_hi)^T and by the matrix
       determinant lemma y = 1 / ((e_lo - e_hi)^T (target I - S_max)^-1 e_t)
    2) returns None when the sunflowers differ in more than one row or
       the solution is not a valid weight
    """
    s_min = minimal_sunflower(b)
    s_max = maximal_sunflower(b)
    rows = [
        i for i in range(b.n) if s_min.out_edge[i] != s_max.out_edge[i]
    ]
    if len(rows) != 1:
        return None
    t = rows[0]
    lo, hi = s_min.out_edge[t], s_max.out_edge[t]
    if lo is None or hi is None:
        return None
    base = s_max.to_matrix().entries
    n = b.n
    v = np.zeros(n)
    v[lo], v[hi] = 1.0, -1.0
    e_t = np.zeros(n)
    e_t[t] = 1.0
    try:
        w = np.linalg.solve(target * np.eye(n) - base, e_t)
    except np.linalg.LinAlgError:
        return None
    denom = float(v @ w)
    if denom == 0:
        return None
    y = 1.0 / denom
    value = float(b.row_value[t])
    if not 0 <= y <= value:
        return None
    entries = base.copy()
    entries[t, hi] -= y
    entries[t, lo] += y
    matrix = NonnegMatrix(entries=np.clip(entries, 0, None))
    tol = get_settings().tolerances.realize
    if abs(perron_root(matrix) - target) > tol * max(target, 1.0):
        return None
    null = scipy.linalg.null_space(target * np.eye(n) - matrix.entries, rcond=1e-9)
    if null.shape[1] == 0:
        return None
    x = null[:, 0]
    x = x if x.sum() > 0 else -x
    if np.any(x <= 0):
        return None
    logging.debug(f"closed form blend on row {t + 1} with weight {y}")
    return RowBlend(matrix=matrix, row=t, weight=y, vector=ScalingVector(x=x / x.max()))


def _blend(x: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    return (1 - lam) * x + lam * y


def _verify(b: RowUniformMatrix, matrix: NonnegMatrix, target: float) -> float:
    settings = get_settings()
    result = aux(matrix)
    has_support = b.support.any(axis=1)
    if not np.array_equal(result.support, b.support) or not np.allclose(
        result.row_value[has_support],
        b.row_value[has_support],
        rtol=settings.tolerances.decision,
        atol=0,
    ):
        raise VerificationError("realized matrix does not have the requested aux")
    rho = perron_root(matrix)
    if abs(rho - target) > settings.tolerances.realize * max(target, 1.0):
        raise ConvergenceError(f"realized Perron root {rho} misses target {target}")
    return rho


def realize_perron_root(b: RowUniformMatrix, target: float) -> PerronRealization:
    """
    Nonnegative matrix A with aux(A) = b and Perron root target
    b
        row uniform matrix
    target
        value in the range returned by describe_eta
    Note
    ----
    1) attained upper end and degenerate ranges use the uniform split
    2) attained lower end blends the minimal sunflower with the uniform split
    3) interior targets take the closed form blend when it already carries
       the support of b, and otherwise bisect between blended extremal
       sunflowers
    """
    settings = get_settings()
    eta = describe_eta(b)
    check_target(eta, target)
    u = b.uniform_split().entries
    tol = settings.tolerances.endpoint
    if eta.degenerate or (
        eta.upper_attained and abs(target - eta.upper) <= tol * max(eta.upper, 1.0)
    ):
        matrix = NonnegMatrix(entries=u)
        return PerronRealization(matrix=matrix, rho=_verify(b, matrix, target))

    s_min = minimal_sunflower(b).to_matrix().entries
    if eta.lower_attained and abs(target - eta.lower) <= tol * max(eta.lower, 1.0):
        eps = 1e-2
        for _ in range(settings.iterations.halvings):
            matrix = NonnegMatrix(entries=_blend(s_min, u, eps))
            if perron_root(matrix) <= eta.lower * (1 + settings.tolerances.decision):
                return PerronRealization(matrix=matrix, rho=_verify(b, matrix, target))
            eps /= 2
        raise ConvergenceError("lower endpoint not reached after all halvings")

    blend = closed_form_blend(b, target)
    if blend is not None and np.array_equal(blend.matrix.entries > 0, b.support):
        logging.debug("closed form blend carries the full support")
        return PerronRealization(
            matrix=blend.matrix, rho=_verify(b, blend.matrix, target), blend=blend
        )

    s_max = maximal_sunflower(b).to_matrix().entries
    eps = 1e-2
    for _ in range(settings.iterations.halvings):
        low = _blend(s_min, u, eps)
        high = _blend(s_max, u, eps)
        if perron_root(low) < target < perron_root(high):
            break
        eps /= 2
    else:
        raise ConvergenceError("no bracket found for the target Perron root")
    logging.debug(f"bracket found with eps {eps}")

    a, c = 0.0, 1.0
    matrix = high
    for _ in range(settings.iterations.bisection):
        mid = (a + c) / 2
        matrix = _blend(low, high, mid)
        rho = perron_root(matrix)
        if abs(rho - target) <= 1e-13 * max(target, 1.0) or c - a < 1e-16:
            break
        if rho < target:
            a = mid
        else:
            c = mid
    matrix = NonnegMatrix(entries=matrix)
    return PerronRealization(
        matrix=matrix,
        rho=_verify(b, matrix, target),
        blend=blend,
    )
