import numpy as np
import pytest

from spectral_range.base import InfeasibleError
from spectral_range.cycles import perron_root
from spectral_range.eta import *
from spectral_range.matrix import aux
from spectral_range.models import NonnegMatrix, RowUniformMatrix
from spectral_range.simulation.oracle import random_aux_preimage, random_row_uniform


@pytest.fixture
def example_b():
    return RowUniformMatrix.from_dense(
        [
            [0, 8, 8, 0, 8],
            [2, 0, 0, 2, 2],
            [2, 0, 0, 0, 0],
            [0, 3, 0, 3, 3],
            [0, 3, 0, 0, 0],
        ]
    )


@pytest.fixture
def lower_attained():
    # final loop of mean 1, transient loop of mean 3
    return RowUniformMatrix.from_dense([[1, 0], [3, 3]])


@pytest.fixture
def disconnected_c():
    return RowUniformMatrix.from_dense(
        [
            [5, 0, 0, 0, 0],
            [0, 0, 4, 0, 0],
            [0, 4, 0, 0, 0],
            [0, 0, 0, 3, 3],
            [0, 0, 0, 3, 3],
        ]
    )


def test_describe_eta_example(example_b):
    eta = describe_eta(example_b)
    assert eta.lower == pytest.approx(np.sqrt(6), rel=1e-12)
    assert eta.upper == pytest.approx(4, rel=1e-12)
    assert eta.lower_attained is False
    assert eta.upper_attained is False
    assert eta.degenerate is False


def test_describe_eta_degenerate():
    eta = describe_eta(RowUniformMatrix.from_dense([[0, 1], [1, 0]]))
    assert eta.degenerate
    assert eta.lower == pytest.approx(1)
    assert eta.upper == pytest.approx(1)


def test_describe_eta_acyclic():
    eta = describe_eta(RowUniformMatrix.from_dense(np.triu(np.ones((3, 3)), k=1)))
    assert eta.to_json() == {
        "lower": 0.0,
        "upper": 0.0,
        "lower_attained": True,
        "upper_attained": True,
        "degenerate": True,
    }


def test_describe_eta_lower_attained(lower_attained):
    eta = describe_eta(lower_attained)
    assert eta.lower == pytest.approx(1)
    assert eta.upper == pytest.approx(3)
    assert eta.lower_attained
    assert not eta.upper_attained


def test_describe_eta_reducible_single_value(disconnected_c):
    eta = describe_eta(disconnected_c)
    assert eta.degenerate
    assert eta.upper == pytest.approx(5)


def test_describe_eta_acyclic_final_class():
    # the only final class is trivial, so m = 0 without being attained
    b = RowUniformMatrix.from_dense([[0, 0], [2, 2]])
    eta = describe_eta(b)
    assert eta.lower == 0
    assert eta.upper == pytest.approx(2)
    assert not eta.lower_attained


@pytest.mark.parametrize(
    "target,clause",
    [
        (4.0, "upper-endpoint"),
        (np.sqrt(6), "lower-endpoint"),
        (5.0, "range"),
        (1.0, "range"),
        (-1.0, "range"),
    ],
)
def test_check_target_infeasible(example_b, target, clause):
    with pytest.raises(InfeasibleError) as e:
        check_target(describe_eta(example_b), target)
    assert e.value.clause == clause


def test_check_target_degenerate():
    eta = describe_eta(RowUniformMatrix.from_dense([[0, 1], [1, 0]]))
    check_target(eta, 1.0)
    with pytest.raises(InfeasibleError) as e:
        check_target(eta, 0.5)
    assert e.value.clause == "degenerate"


def test_realize_perron_root_example(example_b):
    result = realize_perron_root(example_b, 3)
    assert result.rho == pytest.approx(3, rel=1e-6)
    assert aux(result.matrix) == example_b
    assert perron_root(result.matrix) == pytest.approx(3, rel=1e-6)


def test_realize_perron_root_closed_form(example_b):
    blend = realize_perron_root(example_b, 3).blend
    assert blend is not None
    assert blend.row == 1
    assert blend.weight == pytest.approx(1.4, abs=1e-9)
    assert blend.matrix.entries[1] == pytest.approx([0.6, 0, 0, 1.4, 0], abs=1e-9)
    x = blend.vector.x
    assert x == pytest.approx([1, 3 / 8, 2 / 3, 3 / 8, 3 / 8], abs=1e-9)
    residual = blend.matrix.entries @ x - 3 * x
    assert np.max(np.abs(residual)) <= 1e-9


@pytest.mark.parametrize("target", [2.5, 3.5, 3.9])
def test_closed_form_blend_weight(example_b, target):
    blend = closed_form_blend(example_b, target)
    assert blend.weight == pytest.approx((16 - target ** 2) / 5, abs=1e-9)


def test_closed_form_blend_not_applicable(disconnected_c):
    assert closed_form_blend(disconnected_c, 5) is None


def test_realize_perron_root_degenerate():
    b = RowUniformMatrix.from_dense([[0, 1], [1, 0]])
    result = realize_perron_root(b, 1)
    assert result.matrix == NonnegMatrix(entries=[[0, 1], [1, 0]])
    assert result.rho == pytest.approx(1)
    assert result.blend is None


def test_realize_perron_root_acyclic():
    b = RowUniformMatrix.from_dense(np.triu(np.ones((3, 3)), k=1))
    result = realize_perron_root(b, 0)
    assert result.matrix == b.uniform_split()
    assert result.rho == 0


def test_realize_perron_root_lower_endpoint(lower_attained):
    result = realize_perron_root(lower_attained, 1)
    assert result.rho == pytest.approx(1)
    assert aux(result.matrix) == lower_attained


def test_realize_perron_root_interior_reducible(lower_attained):
    result = realize_perron_root(lower_attained, 2)
    assert result.rho == pytest.approx(2, rel=1e-6)
    assert aux(result.matrix) == lower_attained


@pytest.mark.parametrize("target", [4.0, np.sqrt(6), 4.5, 2.0])
def test_realize_perron_root_infeasible(example_b, target):
    with pytest.raises(InfeasibleError):
        realize_perron_root(example_b, target)


def test_perron_realization_to_json(example_b):
    data = realize_perron_root(example_b, 3).to_json()
    assert data["matrix"]["n"] == 5
    assert data["blend"]["row"] == 2
    assert data["rho"] == pytest.approx(3)


@pytest.mark.parametrize("seed", range(20))
def test_eta_sampling_soundness(seed):
    b = random_row_uniform(2 + seed % 5, seed, density=0.5)
    eta = describe_eta(b)
    tol = 1e-9
    for k in range(200):
        rho = perron_root(random_aux_preimage(b, seed * 1000 + k))
        assert eta.lower - tol <= rho <= eta.upper + tol
        if eta.degenerate:
            continue
        if not eta.lower_attained:
            assert rho > eta.lower + tol
        if not eta.upper_attained:
            assert rho < eta.upper - tol


def test_realize_perron_root_closed_form_direct():
    # self loop of mean 4 and a two cycle of mean 2 differing in row 1
    b = RowUniformMatrix.from_dense([[4, 4], [1, 0]])
    result = realize_perron_root(b, 3)
    assert result.blend is not None
    assert result.blend.weight == pytest.approx(1.5, abs=1e-12)
    assert result.matrix.entries == pytest.approx(np.array([[2.5, 1.5], [1, 0]]))
    assert result.matrix == result.blend.matrix
    assert result.blend.vector.x == pytest.approx([1, 1 / 3])
    assert result.rho == pytest.approx(3, rel=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_realize_perron_root_random(seed):
    b = random_row_uniform(2 + seed % 5, 100 + seed, density=0.6)
    eta = describe_eta(b)
    if eta.degenerate:
        targets = [eta.upper]
    else:
        targets = [eta.lower + t * (eta.upper - eta.lower) for t in (0.1, 0.3, 0.5, 0.7, 0.9)]
    for target in targets:
        result = realize_perron_root(b, target)
        assert aux(result.matrix) == b
        assert perron_root(result.matrix) == pytest.approx(target, rel=1e-6, abs=1e-12)
