"""
Eigenvalue sets of complex matrices with a given auxiliary matrix
"""
import logging
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import scipy.linalg
from pydantic import BaseModel, validator
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from spectral_range.base import (
    ConvergenceError,
    InfeasibleError,
    PreconditionError,
    VerificationError,
    get_settings,
)
from spectral_range.cycles import cycle_means, perron_vector
from spectral_range.eta import check_target, describe_eta, realize_perron_root
from spectral_range.matrix import aux_complex, digraph, exit_nodes, frobenius_form
from spectral_range.models import ComplexMatrix, RowUniformMatrix
from spectral_range.utils import complex_to_pairs, isclose, one_based, sup_norm


class DiagonalCount(str, Enum):
    ZERO = "zero"
    ONE = "one"
    MANY = "many"


class CyclicKind(str, Enum):
    UNICYCLIC = "unicyclic"
    MULTICYCLIC = "multicyclic"


class Boundary(str, Enum):
    OPEN = "open"
    CLOSED = "closed"


class GammaStatus(str, Enum):
    REGULAR = "regular"
    SINGULAR_POSSIBLE = "singular_possible"


class ModulusSet(BaseModel):
    """
    Rotation invariant set of complex numbers described by moduli
    disk_radius
        radius R of the punctured disk 0 < |s| < R (or <= R)
    boundary
        whether |s| = R belongs to the disk
    circles
        radii r of circles |s| = r
    zero_included
        whether 0 belongs to the set
    """

    disk_radius: Optional[float] = None
    boundary: Optional[Boundary] = None
    circles: List[float] = []
    zero_included: bool = False

    def canonical(self) -> "ModulusSet":
        """
        Absorb circles dominated by the disk and sort the rest
        Note
        ----
        1) a circle on the boundary of an open disk closes the disk
        """
        tol = get_settings().tolerances.equal_means
        radius, boundary = self.disk_radius, self.boundary
        circles: List[float] = []
        for r in sorted(self.circles):
            if circles and isclose(circles[-1], r, tol):
                continue
            circles.append(r)
        kept = []
        for r in circles:
            if radius is None:
                kept.append(r)
            elif isclose(r, radius, tol):
                boundary = Boundary.CLOSED
            elif r > radius:
                kept.append(r)
        return ModulusSet(
            disk_radius=radius,
            boundary=boundary,
            circles=kept,
            zero_included=self.zero_included,
        )

    def union(self, other: "ModulusSet") -> "ModulusSet":
        tol = get_settings().tolerances.equal_means
        radius, boundary = self.disk_radius, self.boundary
        if other.disk_radius is not None:
            if radius is None or (
                other.disk_radius > radius
                and not isclose(other.disk_radius, radius, tol)
            ):
                radius, boundary = other.disk_radius, other.boundary
            elif isclose(other.disk_radius, radius, tol):
                if other.boundary == Boundary.CLOSED:
                    boundary = Boundary.CLOSED
        return ModulusSet(
            disk_radius=radius,
            boundary=boundary,
            circles=self.circles + other.circles,
            zero_included=self.zero_included or other.zero_included,
        ).canonical()

    def contains(self, modulus: float, tol: Optional[float] = None) -> bool:
        """
        Whether complex numbers of this modulus belong to the set
        Note
        ----
        1) moduli within tol of an open boundary are outside
        """
        if tol is None:
            tol = get_settings().tolerances.equal_means
        if modulus < 0:
            return False
        if modulus == 0:
            return self.zero_included
        for r in self.circles:
            if isclose(modulus, r, tol):
                return True
        if self.disk_radius is None:
            return False
        if isclose(modulus, self.disk_radius, tol):
            return self.boundary == Boundary.CLOSED
        return modulus < self.disk_radius

    def to_json(self) -> Dict:
        disk = None
        if self.disk_radius is not None:
            disk = {"radius": self.disk_radius, "boundary": self.boundary.value}
        return {"disk": disk, "circles": list(self.circles), "zero": self.zero_included}


class EigenWitness(BaseModel):
    matrix: ComplexMatrix
    eigenvalue: complex
    eigenvector: Optional[List[complex]] = None

    class Config:
        arbitrary_types_allowed = True

    @validator("eigenvalue", pre=True)
    def eigenvalue_should_be_complex(cls, v):
        return complex(v)

    @validator("eigenvector", pre=True)
    def eigenvector_should_be_complex(cls, v):
        if v is None:
            return v
        return [complex(z) for z in v]

    def residual(self) -> float:
        """
        Relative residual of the eigen equation, or relative determinant
        when no eigenvector is carried
        """
        c = self.matrix.entries
        lam = self.eigenvalue
        if self.eigenvector is not None:
            v = np.array(self.eigenvector, dtype=complex)
            return sup_norm(c @ v - lam * v) / sup_norm(v)
        shifted = c - lam * np.eye(self.matrix.n)
        scale = float(np.prod(np.abs(shifted).sum(axis=1)))
        if scale == 0:
            return 0.0
        return float(abs(np.linalg.det(shifted)) / scale)

    def rotate(self, phase: complex) -> "EigenWitness":
        """
        Multiply the matrix by a unit modulus phase
        """
        vector = self.eigenvector
        return EigenWitness(
            matrix=ComplexMatrix(entries=phase * self.matrix.entries),
            eigenvalue=phase * self.eigenvalue,
            eigenvector=vector,
        )

    def to_json(self) -> Dict:
        return {
            "matrix": self.matrix.to_json(),
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
            "eigenvector": None
            if self.eigenvector is None
            else complex_to_pairs(np.array(self.eigenvector)),
            "residual": self.residual(),
        }


class ZeroMembership(BaseModel):
    member: bool
    count: DiagonalCount
    witness: Optional[EigenWitness] = None

    def to_json(self) -> Dict:
        return {
            "member": self.member,
            "count": self.count.value,
            "witness": self.witness.to_json() if self.witness else None,
        }


class GammaVerdict(BaseModel):
    status: GammaStatus
    mu: float
    nu: float
    witness: Optional[EigenWitness] = None

    def to_json(self) -> Dict:
        return {
            "status": self.status.value,
            "mu": self.mu,
            "nu": self.nu,
            "witness": self.witness.to_json() if self.witness else None,
        }


class ClassContribution(BaseModel):
    nodes: List[int]
    final: bool
    kind: CyclicKind
    mu: float
    nu: float
    moduli: ModulusSet


class SigmaParameters(BaseModel):
    """
    m_tilde
        largest mu over transient classes and final multicyclic classes,
        0 when there is none
    """

    m_tilde: float
    classes: List[ClassContribution]


def verify_witness(witness: EigenWitness, b: RowUniformMatrix) -> None:
    """
    Raise VerificationError unless the witness belongs to the class of b
    and its eigen residual is small
    """
    settings = get_settings()
    result = aux_complex(witness.matrix)
    has_support = b.support.any(axis=1)
    if not np.array_equal(result.support, b.support):
        raise VerificationError("witness support differs")
    if not np.allclose(
        result.row_value[has_support],
        b.row_value[has_support],
        rtol=settings.tolerances.decision,
        atol=0,
    ):
        raise VerificationError("witness row sums of moduli differ")
    if witness.residual() > settings.tolerances.witness:
        raise VerificationError(f"witness residual {witness.residual()} too large")


def _null_vector(c: np.ndarray, lam: complex) -> np.ndarray:
    _, _, vh = scipy.linalg.svd(c - lam * np.eye(c.shape[0]))
    v = vh[-1].conj()
    return v / v[np.argmax(np.abs(v))]


def _matching(support: np.ndarray) -> np.ndarray:
    return maximum_bipartite_matching(csr_matrix(support.astype(int)), perm_type="column")


def diagonal_product_count(b: RowUniformMatrix) -> DiagonalCount:
    """
    Classify the number of nonzero generalized diagonal products
    Note
    ----
    1) a second product exists iff deleting some matched edge still
       leaves a perfect matching
    """
    support = np.array(b.support)
    match = _matching(support)
    if np.any(match < 0):
        return DiagonalCount.ZERO
    for i, j in enumerate(match):
        reduced = support.copy()
        reduced[i, j] = False
        if np.all(_matching(reduced) >= 0):
            return DiagonalCount.MANY
    return DiagonalCount.ONE


def zero_in_sigma(b: RowUniformMatrix) -> ZeroMembership:
    """
    Whether some matrix of the class is singular, with a singular witness
    Note
    ----
    1) with no nonzero diagonal product any split is singular
    2) otherwise columns are permuted to a nonzero diagonal and a class
       of size > 1 gets roots of unity phases so that its block has
       zero row sums
    """
    count = diagonal_product_count(b)
    if count == DiagonalCount.ONE:
        return ZeroMembership(member=False, count=count)
    split = b.uniform_split().entries.astype(complex)
    if count == DiagonalCount.ZERO:
        c = ComplexMatrix(entries=split)
        return ZeroMembership(
            member=True, count=count, witness=EigenWitness(matrix=c, eigenvalue=0)
        )
    p = _matching(np.array(b.support))
    permuted = split[:, p]
    form = frobenius_form(np.abs(permuted))
    nodes = next(c for c in form.classes if len(c) > 1)
    inside = set(nodes)
    for k in nodes:
        targets = [l for l in np.nonzero(permuted[k])[0] if int(l) in inside]
        count_k = len(targets)
        for t, l in enumerate(targets, start=1):
            permuted[k, l] *= np.exp(2j * np.pi * t / count_k)
    c = np.zeros_like(permuted)
    c[:, p] = permuted
    witness = EigenWitness(
        matrix=ComplexMatrix(entries=c),
        eigenvalue=0,
        eigenvector=list(_null_vector(c, 0)),
    )
    verify_witness(witness, b)
    return ZeroMembership(member=True, count=count, witness=witness)


def _require_irreducible(b: RowUniformMatrix) -> None:
    if not frobenius_form(b.dense()).irreducible:
        raise PreconditionError("row uniform matrix must be irreducible")


def classify_cyclic(b: RowUniformMatrix) -> CyclicKind:
    """
    Unicyclic iff the graph is a single Hamiltonian cycle
    """
    _require_irreducible(b)
    if np.all(b.out_degree() == 1):
        return CyclicKind.UNICYCLIC
    return CyclicKind.MULTICYCLIC


def sigma_irreducible(b: RowUniformMatrix) -> ModulusSet:
    """
    Nonzero eigenvalue moduli for an irreducible class
    """
    kind = classify_cyclic(b)
    report = cycle_means(b.dense())
    if kind == CyclicKind.UNICYCLIC:
        return ModulusSet(circles=[report.mu])
    tol = get_settings().tolerances.equal_means
    if isclose(report.mu, report.nu, tol):
        return ModulusSet(disk_radius=report.mu, boundary=Boundary.CLOSED)
    return ModulusSet(disk_radius=report.mu, boundary=Boundary.OPEN)


def sigma_tilde(b: RowUniformMatrix, k: Sequence[int]) -> ModulusSet:
    """
    Nonzero eigenvalue moduli when rows in k have strictly smaller sums
    b
        irreducible row uniform matrix
    k
        nonempty set of 0-based rows
    """
    _require_irreducible(b)
    rows = list(k)
    if not rows:
        raise PreconditionError("index set must be nonempty")
    if any(i < 0 or i >= b.n for i in rows):
        raise PreconditionError("index set out of range")
    return ModulusSet(disk_radius=cycle_means(b.dense()).mu, boundary=Boundary.OPEN)


def sigma_parameters(b: RowUniformMatrix) -> SigmaParameters:
    """
    Contribution of every nontrivial class to the eigenvalue set
    """
    entries = b.dense()
    form = frobenius_form(entries)
    classes = []
    m_tilde = 0.0
    for k in form.nontrivial:
        nodes = form.classes[k]
        block = b.block(nodes)
        kind = classify_cyclic(block)
        report = cycle_means(block.dense())
        final = form.is_final(k)
        if final:
            moduli = sigma_irreducible(block)
        else:
            local = [nodes.index(i) for i in exit_nodes(entries, nodes)]
            moduli = sigma_tilde(block, local)
        if not final or kind == CyclicKind.MULTICYCLIC:
            m_tilde = max(m_tilde, report.mu)
        classes.append(
            ClassContribution(
                nodes=nodes,
                final=final,
                kind=kind,
                mu=report.mu,
                nu=report.nu,
                moduli=moduli,
            )
        )
    return SigmaParameters(m_tilde=m_tilde, classes=classes)


def sigma_describe(b: RowUniformMatrix) -> ModulusSet:
    """
    All eigenvalue moduli of complex matrices with aux equal to b
    Note
    ----
    1) union over final classes of their irreducible sets and over
       transient classes of the open disk of their maximal cycle mean
    """
    result = ModulusSet()
    for contribution in sigma_parameters(b).classes:
        result = result.union(contribution.moduli)
    membership = zero_in_sigma(b)
    return ModulusSet(
        disk_radius=result.disk_radius,
        boundary=result.boundary,
        circles=result.circles,
        zero_included=membership.member,
    ).canonical()


def _perturbed_row_target(
    b: RowUniformMatrix, r: float
) -> Tuple[int, RowUniformMatrix]:
    """
    Scale one row so that a cycle through it has mean r
    Note
    ----
    1) the row is the first with at least two outgoing edges
    2) the factor is nudged until nu(H) < r < mu(H) or nu = mu = r
    """
    settings = get_settings()
    tol = settings.tolerances.decision
    equal = settings.tolerances.equal_means
    t = int(np.nonzero(b.out_degree() >= 2)[0][0])
    g = digraph(b)
    j = int(np.nonzero(b.support[t])[0][0])
    path = nx.shortest_path(g, j, t)
    cycle = [t] + path[:-1] if j != t else [t]
    c = float(np.exp(np.mean(np.log(b.row_value[cycle]))))
    length = len(cycle)
    z = min((r / c) ** length, 1.0)
    factor = z
    eps = 1e-3
    for _ in range(settings.iterations.halvings):
        values = np.array(b.row_value, dtype=float)
        values[t] *= factor
        h = RowUniformMatrix(support=b.support, row_value=values)
        report = cycle_means(h.dense())
        lower_ok = report.nu < r * (1 - tol)
        upper_ok = r < report.mu * (1 - tol)
        if lower_ok and upper_ok:
            return t, h
        if isclose(report.nu, report.mu, equal) and isclose(report.mu, r, equal):
            return t, h
        if not upper_ok:
            factor = min(z * (1 + eps), 1.0)
        else:
            factor = z * (1 - eps)
        eps /= 2
    raise ConvergenceError("could not separate the modulus from the cycle means")


def _solve_row_defect(
    row: np.ndarray, k: int, l: int, v: np.ndarray, target: float
) -> float:
    """
    Smallest x >= 0 with the row sum of moduli equal to target after
    adding -ix/v_k at k and ix/v_l at l
    """
    settings = get_settings()
    rest = float(row.sum() - row[k] - row[l])

    def total(x: float) -> float:
        return (
            rest
            + np.hypot(row[k], x / v[k])
            + np.hypot(row[l], x / v[l])
        )

    lo, hi = 0.0, target * max(v[k], v[l])
    while total(hi) < target:
        hi *= 2
    for _ in range(settings.iterations.bisection):
        mid = (lo + hi) / 2
        value = total(mid)
        if abs(value - target) <= 1e-12 * target:
            return mid
        if value < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _realize_modulus(b: RowUniformMatrix, r: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Matrix C with aux equal to b and a positive vector v with C v = r v
    """
    eta = describe_eta(b)
    try:
        check_target(eta, r)
        e = realize_perron_root(b, r).matrix.entries
        return e.astype(complex), perron_vector(e).x
    except InfeasibleError:
        if r > eta.upper:
            raise
    logging.debug(f"modulus {r} below the Perron range, perturbing a row")
    t, h = _perturbed_row_target(b, r)
    e = realize_perron_root(h, r).matrix.entries
    v = perron_vector(e).x
    k, l = [int(i) for i in np.nonzero(e[t])[0][:2]]
    x = _solve_row_defect(e[t], k, l, v, float(b.row_value[t]))
    c = e.astype(complex)
    c[t, k] = e[t, k] - 1j * x / v[k]
    c[t, l] = e[t, l] + 1j * x / v[l]
    return c, v


def _realize_irreducible(b: RowUniformMatrix, lam: complex) -> EigenWitness:
    moduli = sigma_irreducible(b)
    r = abs(lam)
    if not moduli.contains(r):
        raise InfeasibleError(
            f"|lambda| = {r} outside the eigenvalue moduli {moduli.to_json()}",
            clause="irreducible-moduli",
        )
    phase = lam / r
    if classify_cyclic(b) == CyclicKind.UNICYCLIC:
        dense = b.dense()
        v = perron_vector(dense).x
        c = phase * dense.astype(complex)
    else:
        c, v = _realize_modulus(b, r)
        c = phase * c
    return EigenWitness(
        matrix=ComplexMatrix(entries=c),
        eigenvalue=lam,
        eigenvector=list(v.astype(complex)),
    )


def _reduced_rows(block: RowUniformMatrix, local: List[int], r: float) -> RowUniformMatrix:
    """
    Block with rows in local scaled down so that r is an eigenvalue modulus
    """
    settings = get_settings()
    report = cycle_means(block.dense())
    values = np.array(block.row_value, dtype=float)
    if classify_cyclic(block) == CyclicKind.UNICYCLIC:
        theta = (r / report.mu) ** (block.n / len(local))
        values[local] *= theta
        return RowUniformMatrix(support=block.support, row_value=values)
    eps = 1e-3
    for _ in range(settings.iterations.halvings):
        trial = values.copy()
        trial[local] *= 1 - eps
        reduced = RowUniformMatrix(support=block.support, row_value=trial)
        if sigma_irreducible(reduced).contains(r):
            return reduced
        eps /= 2
    raise ConvergenceError("could not reduce the transient class")


def _realize_reducible(b: RowUniformMatrix, lam: complex) -> EigenWitness:
    """
    Embed a class witness into the uniform split of b
    """
    entries = b.dense()
    r = abs(lam)
    form = frobenius_form(entries)
    full = b.uniform_split().entries.astype(complex)
    for k in form.nontrivial:
        nodes = form.classes[k]
        block = b.block(nodes)
        idx = np.ix_(nodes, nodes)
        if form.is_final(k):
            if not sigma_irreducible(block).contains(r):
                continue
            witness = _realize_irreducible(block, lam)
            full[idx] = witness.matrix.entries
        else:
            if not r < cycle_means(block.dense()).mu:
                continue
            local = [nodes.index(i) for i in exit_nodes(entries, nodes)]
            reduced = _reduced_rows(block, local, r)
            witness = _realize_irreducible(reduced, lam)
            full[idx] = witness.matrix.entries
            inside = set(nodes)
            for pos in local:
                i = nodes[pos]
                outside = [int(j) for j in np.nonzero(entries[i])[0] if int(j) not in inside]
                rest = b.row_value[i] - reduced.row_value[pos]
                for j in outside:
                    full[i, j] = rest / len(outside)
        logging.debug(f"eigenvalue realized in class {one_based(nodes)}")
        return EigenWitness(
            matrix=ComplexMatrix(entries=full),
            eigenvalue=lam,
            eigenvector=list(_null_vector(full, lam)),
        )
    raise InfeasibleError(
        f"|lambda| = {r} is not an eigenvalue modulus of any class",
        clause="reducible-moduli",
    )


def realize_eigenvalue(b: RowUniformMatrix, lam: complex) -> EigenWitness:
    """
    Complex matrix C with aux equal to b and eigenvalue lam
    b
        row uniform matrix
    lam
        requested eigenvalue
    Note
    ----
    1) the modulus is realized with a real nonnegative matrix, directly
       when it is a Perron root of the class and otherwise after scaling
       one row and adding an imaginary correction on two of its entries
    2) the whole matrix is then rotated by the phase of lam
    3) reducible b embeds a class witness into the uniform split
    """
    lam = complex(lam)
    if lam == 0:
        membership = zero_in_sigma(b)
        if not membership.member:
            raise InfeasibleError(
                "0 is not an eigenvalue: the support has exactly one nonzero "
                "diagonal product",
                clause="zero",
            )
        return membership.witness
    if frobenius_form(b.dense()).irreducible:
        witness = _realize_irreducible(b, lam)
    else:
        witness = _realize_reducible(b, lam)
    verify_witness(witness, b)
    return witness


def gamma_regularity(b: RowUniformMatrix) -> GammaVerdict:
    """
    Whether every complex A with aux equal to b has I - A nonsingular
    b
        irreducible multicyclic row uniform matrix with zero diagonal
    """
    if classify_cyclic(b) != CyclicKind.MULTICYCLIC:
        raise PreconditionError("row uniform matrix must be multicyclic")
    if np.any(np.diag(b.support)):
        raise PreconditionError("row uniform matrix must have zero diagonal")
    tol = get_settings().tolerances.equal_means
    report = cycle_means(b.dense())
    mu, nu = report.mu, report.nu
    if isclose(mu, 1.0, tol):
        regular = nu < 1 and not isclose(nu, 1.0, tol)
    else:
        regular = mu < 1
    if regular:
        return GammaVerdict(status=GammaStatus.REGULAR, mu=mu, nu=nu)
    witness = realize_eigenvalue(b, 1.0)
    return GammaVerdict(
        status=GammaStatus.SINGULAR_POSSIBLE, mu=mu, nu=nu, witness=witness
    )
