import numpy as np
import pytest

from spectral_range.base import BudgetError
from spectral_range.cycles import cycle_means, perron_root
from spectral_range.matrix import aux, aux_complex, frobenius_form
from spectral_range.models import NonnegMatrix, RowUniformMatrix
from spectral_range.sigma import diagonal_product_count
from spectral_range.simulation.oracle import *
from spectral_range.sunflower import extremal_params


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


def test_oracle_budget_from_settings():
    budget = OracleBudget.from_settings()
    assert budget.max_n == 7
    assert budget.max_cycles == 100000


def test_enumerate_cycle_means():
    result = enumerate_cycle_means([[0, 8], [2, 0]])
    assert result.mu == pytest.approx(4)
    assert result.nu == pytest.approx(4)
    assert len(result.cycles) == 1
    assert sorted(result.cycles[0][0]) == [0, 1]


def test_enumerate_cycle_means_example(example_b):
    result = enumerate_cycle_means(example_b.dense())
    assert result.mu == pytest.approx(4)
    assert result.nu == pytest.approx(np.sqrt(6))


def test_enumerate_cycle_means_acyclic():
    result = enumerate_cycle_means(np.triu(np.ones((3, 3)), k=1))
    assert result == CycleEnumeration(mu=0, nu=0, cycles=[])


def test_enumerate_budget():
    with pytest.raises(BudgetError):
        enumerate_cycle_means(np.ones((3, 3)), OracleBudget(max_n=2))
    with pytest.raises(BudgetError):
        enumerate_cycle_means(np.ones((3, 3)), OracleBudget(max_cycles=2))
    with pytest.raises(BudgetError):
        enumerate_diagonal_products(np.ones((8, 8)))
    with pytest.raises(BudgetError):
        enumerate_sunflowers(np.ones((4, 4)), OracleBudget(max_cycles=100))


def test_enumerate_diagonal_products():
    assert enumerate_diagonal_products(np.ones((2, 2))).count == 2
    result = enumerate_diagonal_products([[0, 3], [2, 0]])
    assert result.count == 1
    assert result.products == [([1, 0], 6.0)]
    assert enumerate_diagonal_products([[0, 1], [0, 1]]).count == 0


def test_enumerate_sunflowers(example_b):
    result = enumerate_sunflowers(example_b.dense())
    assert len(result.out_edges) == 27
    assert max(result.means) == pytest.approx(4)
    assert min(result.means) == pytest.approx(np.sqrt(6))


def test_enumerate_sunflowers_empty_row():
    result = enumerate_sunflowers([[0, 1], [0, 0]])
    assert result.out_edges == [[1, None]]
    assert result.means == [0.0]


def test_small_determinant():
    c = np.array([[1, 2j], [3, 4]])
    assert small_determinant(c) == pytest.approx(4 - 6j)
    assert small_determinant(np.eye(3)[[1, 0, 2]]) == pytest.approx(-1)
    assert small_determinant(np.eye(7)) == pytest.approx(1)
    with pytest.raises(BudgetError):
        small_determinant(np.eye(8))
    with pytest.raises(BudgetError):
        small_determinant(np.eye(3), OracleBudget(max_n=2))


def test_small_eigenvalues():
    values = small_eigenvalues(np.array([[0, 8], [2, 0]]))
    assert sorted(values.real) == pytest.approx([-4, 4])


@pytest.mark.parametrize("seed", range(10))
def test_random_preimages(seed):
    a = random_irreducible(2 + seed % 5, seed)
    assert frobenius_form(a).irreducible
    b = RowUniformMatrix(support=a.support(), row_value=np.arange(1, a.n + 1))
    assert aux(random_aux_preimage(b, seed)) == b
    assert aux_complex(random_complex_preimage(b, seed)) == b


def test_random_nonneg():
    a = random_nonneg(4, 3)
    assert isinstance(a, NonnegMatrix)
    assert a == random_nonneg(4, 3)
    assert np.all((a.entries == 0) | (a.entries >= 0.1))


@pytest.mark.parametrize("seed", range(30))
def test_perron_root_against_eigenvalues(seed):
    a = random_nonneg(1 + seed % 7, seed)
    expected = np.max(np.abs(small_eigenvalues(a.entries)))
    assert perron_root(a) == pytest.approx(expected, rel=1e-8, abs=1e-10)


@pytest.mark.parametrize("seed", range(100))
def test_cycle_means_against_enumeration(seed):
    a = random_nonneg(2 + seed % 6, seed)
    expected = enumerate_cycle_means(a)
    got = cycle_means(a)
    assert got.mu == pytest.approx(expected.mu, rel=1e-10)
    assert got.nu == pytest.approx(expected.nu, rel=1e-10)


@pytest.mark.parametrize("seed", range(100))
def test_diagonal_count_against_enumeration(seed):
    b = random_row_uniform(1 + seed % 7, seed, density=0.5)
    count = enumerate_diagonal_products(b.dense()).count
    expected_kind = ("zero", "one", "many")[min(count, 2)]
    assert diagonal_product_count(b).value == expected_kind


@pytest.mark.parametrize("seed", range(30))
def test_extremal_params_against_enumeration(seed):
    b = random_row_uniform(2 + seed % 4, seed, density=0.5)
    means = enumerate_sunflowers(b.dense()).means
    params = extremal_params(b)
    assert params.M == pytest.approx(max(means), rel=1e-10)
    assert params.m == pytest.approx(min(means), rel=1e-10)


@pytest.mark.parametrize("name", sorted(CHECKS))
def test_run_check(name):
    assert run_check(name, trials=20, seed=7) == []


def test_run_check_unknown():
    with pytest.raises(KeyError):
        run_check("nothing")
