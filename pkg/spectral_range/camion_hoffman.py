"""
Regularity of the class of complex matrices with prescribed moduli

A class is regular when none of its members is singular. The decision
runs through a maximal diagonal product assignment P, the unit diagonal
scaling D of PA and the spectral radius of PAD - I.
"""
import logging
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from spectral_range.base import (
    ConvergenceError,
    PreconditionError,
    VerificationError,
    get_settings,
)
from spectral_range.cycles import cycle_means, perron_root, perron_vector
from spectral_range.matrix import aux, class_block, frobenius_form
from spectral_range.models import ComplexMatrix, NonnegMatrix
from spectral_range.scaling import sum_visualize
from spectral_range.utils import MatrixLike, as_array, complex_to_pairs, one_based


class Assignment(BaseModel):
    """
    permutation
        permutation[i] is the column assigned to row i
    """

    permutation: List[int]
    product: float


class DominanceCertificate(BaseModel):
    """
    dominance_scaling
        Z with PADZ strictly diagonally dominant
    combined_scaling
        the column scaling DZ
    margin
        smallest relative dominance margin over all rows
    aux_cycle_mean
        maximal cycle mean of aux(Z^-1 PAD Z - I)
    """

    dominance_scaling: List[float]
    combined_scaling: List[float]
    margin: float
    aux_cycle_mean: float


class RegularityVerdict(BaseModel):
    regular: bool
    permutation: Optional[List[int]] = None
    unit_diagonal_scaling: Optional[List[float]] = None
    test_radius: Optional[float] = None
    boundary: bool = False
    certificate: Optional[DominanceCertificate] = None
    witness: Optional[ComplexMatrix] = None

    def to_json(self) -> Dict:
        return {
            "regular": self.regular,
            "permutation": None
            if self.permutation is None
            else one_based(self.permutation),
            "unit_diagonal_scaling": self.unit_diagonal_scaling,
            "test_radius": self.test_radius,
            "certificate": self.certificate.dict() if self.certificate else None,
            "witness": None
            if self.witness is None
            else complex_to_pairs(self.witness.entries),
            "boundary": self.boundary,
        }


def _has_perfect_matching(support: np.ndarray) -> bool:
    match = maximum_bipartite_matching(
        csr_matrix(support.astype(int)), perm_type="column"
    )
    return bool(np.all(match >= 0))


def _assignment_cost(cost: np.ndarray, fixed: Dict[int, int]) -> float:
    """
    Optimal cost with some rows fixed to columns; inf when infeasible
    """
    n = cost.shape[0]
    rows = [i for i in range(n) if i not in fixed]
    cols = [j for j in range(n) if j not in fixed.values()]
    total = float(sum(cost[i, j] for i, j in fixed.items()))
    if not rows:
        return total
    sub = cost[np.ix_(rows, cols)]
    if not _has_perfect_matching(np.isfinite(sub)):
        return np.inf
    r, c = linear_sum_assignment(sub)
    return total + float(sub[r, c].sum())


def max_product_assignment(a: MatrixLike) -> Optional[Assignment]:
    """
    Permutation maximizing the product of a_{i, p(i)}
    Note
    ----
    1) solved on -log a with zero entries forbidden
    2) ties go to the lexicographically smallest permutation
    3) None when no nonzero diagonal product exists
    """
    entries = as_array(a)
    support = entries > 0
    if not _has_perfect_matching(support):
        return None
    cost = np.full(entries.shape, np.inf)
    cost[support] = -np.log(entries[support])
    best = _assignment_cost(cost, {})
    tol = 1e-12 * (1 + abs(best))
    fixed: Dict[int, int] = {}
    for i in range(entries.shape[0]):
        for j in np.nonzero(support[i])[0]:
            j = int(j)
            if j in fixed.values():
                continue
            trial = dict(fixed)
            trial[i] = j
            if _assignment_cost(cost, trial) <= best + tol:
                fixed = trial
                break
    permutation = [fixed[i] for i in range(entries.shape[0])]
    product = float(np.prod(entries[np.arange(len(permutation)), permutation]))
    return Assignment(permutation=permutation, product=product)


def _unit_diagonal(entries: np.ndarray, permutation: List[int]):
    """
    PA with row i of A moved to row p(i), and the reciprocals of its diagonal
    """
    pa = np.zeros_like(entries)
    pa[permutation, :] = entries
    d = 1.0 / np.diag(pa)
    return pa, d


def close_polygon(lengths, tol: float = 1e-12) -> np.ndarray:
    """
    Complex numbers with the given moduli summing to zero
    lengths
        nonnegative numbers, none exceeding the sum of the others
    tol
        relative slack allowed in that hypothesis
    Note
    ----
    1) lengths are spread greedily, largest first, over three groups
       which then form a triangle; members of a group share its phase
    """
    lengths = np.asarray(lengths, dtype=float)
    if np.any(lengths < 0):
        raise PreconditionError("lengths must be nonnegative")
    total = float(lengths.sum())
    out = np.zeros(len(lengths), dtype=complex)
    if total == 0:
        return out
    if np.any(lengths > total - lengths + tol * total):
        raise PreconditionError("a length exceeds the sum of the others")
    groups: List[List[int]] = [[], [], []]
    sums = [0.0, 0.0, 0.0]
    for i in np.argsort(-lengths, kind="stable"):
        k = int(np.argmin(sums))
        groups[k].append(int(i))
        sums[k] += lengths[i]
    order = sorted(range(3), key=lambda k: -sums[k])
    s_a, s_b, s_c = (sums[k] for k in order)
    if s_c == 0:
        phases = [1.0, -1.0, 1.0]
    else:
        cos_b = (s_c ** 2 - s_a ** 2 - s_b ** 2) / (2 * s_a * s_b)
        beta = np.arccos(np.clip(cos_b, -1.0, 1.0))
        side_b = s_b * np.exp(1j * beta)
        side_c = -(s_a + side_b)
        phases = [1.0, np.exp(1j * beta), side_c / abs(side_c)]
    for phase, k in zip(phases, order):
        for i in groups[k]:
            out[i] = lengths[i] * phase
    return out


def singular_row_matrix(e: MatrixLike, tol: float = 1e-12) -> ComplexMatrix:
    """
    Complex matrix with moduli e and zero row sums
    e
        nonnegative matrix with unit diagonal, off diagonal entries at
        most 1 and off diagonal row sums at least 1
    """
    entries = as_array(e)
    n = entries.shape[0]
    off = entries - np.diag(np.diag(entries))
    if np.any(np.abs(np.diag(entries) - 1) > tol):
        raise PreconditionError("diagonal must be 1")
    if np.any(off > 1 + tol):
        raise PreconditionError("off diagonal entries must not exceed 1")
    if np.any(off.sum(axis=1) < 1 - tol):
        raise PreconditionError("off diagonal row sums must be at least 1")
    c = np.zeros((n, n), dtype=complex)
    for i in range(n):
        c[i] = close_polygon(entries[i], tol=tol)
    return ComplexMatrix(entries=c)


def singular_witness(
    a: MatrixLike, permutation: List[int], d: np.ndarray
) -> ComplexMatrix:
    """
    Singular member of the class of a
    a
        nonnegative matrix
    permutation
        maximal product assignment
    d
        reciprocals of the diagonal of PA
    Note
    ----
    1) a class of PAD - I with spectral radius at least 1 is sum
       visualized at level 1, closed row by row into a singular block and
       conjugated back; everything else stays real
    """
    settings = get_settings()
    tol = settings.tolerances.decision
    entries = as_array(a)
    pa, _ = _unit_diagonal(entries, permutation)
    f = pa * d[None, :]
    np.fill_diagonal(f, 1.0)
    b = f - np.eye(len(d))
    form = frobenius_form(b)
    best, nodes = -1.0, None
    for k in form.nontrivial:
        rho = perron_root(class_block(b, form.classes[k]))
        if rho > best:
            best, nodes = rho, form.classes[k]
    if nodes is None or best < 1 - tol:
        raise PreconditionError("spectral radius of PAD - I is below 1")
    block = class_block(b, nodes)
    mu = cycle_means(block).mu
    if mu > 1 + tol:
        raise VerificationError(f"cycle mean {mu} above 1, assignment is not maximal")
    level = min(max(1.0, mu), best)
    y = sum_visualize(block, level).x
    scaled = block * y[None, :] / y[:, None] + np.eye(len(nodes))
    h = singular_row_matrix(scaled, tol=10 * tol).entries
    g = f.astype(complex)
    g[np.ix_(nodes, nodes)] = h * y[:, None] / y[None, :]
    w = g[permutation, :] / d[None, :]
    logging.debug(f"singular class {one_based(nodes)} at level {level}")
    return ComplexMatrix(entries=w)


def verify_singular_witness(
    a: MatrixLike, witness: ComplexMatrix, product: float
) -> None:
    """
    Raise VerificationError unless the witness has the moduli of a and
    a determinant negligible against the maximal diagonal product
    product
        maximal diagonal product of a, 0 when there is none; the
        product of row sums stands in for it then
    """
    settings = get_settings()
    entries = as_array(a)
    w = witness.entries
    tol = settings.tolerances.modulus
    if not np.allclose(np.abs(w), entries, rtol=tol, atol=tol):
        raise VerificationError("witness moduli differ from the matrix")
    det = abs(np.linalg.det(w))
    if product <= 0:
        product = float(np.prod(np.maximum(entries.sum(axis=1), 1.0)))
    if det > settings.tolerances.witness * product:
        raise VerificationError(f"witness determinant {det} is not negligible")


def _dominance_scaling(b: np.ndarray) -> np.ndarray:
    """
    Positive z with (Bz)_i < z_i for every row when rho(B) < 1
    Note
    ----
    1) Perron vectors scale every class; class multipliers are doubled
       until each class gets at most half the margin from earlier classes
    """
    settings = get_settings()
    form = frobenius_form(b)
    n = b.shape[0]
    base = np.ones(n)
    delta = 1.0
    for k in form.nontrivial:
        nodes = form.classes[k]
        block = class_block(b, nodes)
        base[nodes] = perron_vector(block).x
        delta = min(delta, 1 - perron_root(block))
    z = np.zeros(n)
    done: List[int] = []
    for nodes in form.classes:
        multiplier = max([z[i] / base[i] for i in done], default=1.0)
        for _ in range(settings.iterations.doublings):
            z[nodes] = multiplier * base[nodes]
            spill = (b[np.ix_(nodes, done)] @ z[done]) if done else np.zeros(len(nodes))
            if np.all(spill < delta / 2 * z[nodes]):
                break
            multiplier *= 2
        else:
            raise ConvergenceError("class multipliers did not converge")
        done.extend(nodes)
    return z / z.max()


def decide(a: MatrixLike) -> RegularityVerdict:
    """
    Decide whether every complex matrix with moduli a is nonsingular
    Note
    ----
    1) regular iff rho(PAD - I) < 1, with a small band around 1 taken as
       singular and flagged as boundary
    2) a regular verdict carries a dominance scaling, a singular one a
       singular member of the class
    """
    settings = get_settings()
    tol = settings.tolerances.decision
    entries = as_array(a)
    assignment = max_product_assignment(entries)
    if assignment is None:
        witness = ComplexMatrix(entries=entries.astype(complex))
        verify_singular_witness(entries, witness, 0.0)
        return RegularityVerdict(regular=False, witness=witness)
    p = assignment.permutation
    pa, d = _unit_diagonal(entries, p)
    f = pa * d[None, :]
    np.fill_diagonal(f, 1.0)
    b = f - np.eye(len(d))
    radius = perron_root(b)
    boundary = abs(radius - 1) <= tol
    verdict = dict(
        permutation=p,
        unit_diagonal_scaling=d.tolist(),
        test_radius=radius,
        boundary=boundary,
    )
    if radius < 1 - tol:
        z = _dominance_scaling(b)
        margins = (z - b @ z) / z
        scaled = b * z[None, :] / z[:, None]
        certificate = DominanceCertificate(
            dominance_scaling=z.tolist(),
            combined_scaling=(d * z).tolist(),
            margin=float(margins.min()),
            aux_cycle_mean=cycle_means(aux(NonnegMatrix(entries=scaled))).mu,
        )
        if certificate.margin <= 0:
            raise VerificationError("dominance scaling has no margin")
        return RegularityVerdict(regular=True, certificate=certificate, **verdict)
    witness = singular_witness(entries, p, d)
    verify_singular_witness(entries, witness, assignment.product)
    return RegularityVerdict(regular=False, witness=witness, **verdict)


def m_matrix_check(a: MatrixLike) -> bool:
    """
    Whether the comparison matrix of PA is a nonsingular M-matrix
    """
    entries = as_array(a)
    assignment = max_product_assignment(entries)
    if assignment is None:
        return False
    pa, _ = _unit_diagonal(entries, assignment.permutation)
    diag = np.diag(pa)
    if np.any(diag <= 0):
        return False
    off = pa - np.diag(diag)
    tol = get_settings().tolerances.decision
    return perron_root(off / diag[:, None]) < 1 - tol
