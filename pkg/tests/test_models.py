import numpy as np
import pytest

from spectral_range.models import *


@pytest.fixture
def two_cycle():
    return RowUniformMatrix.from_dense([[0, 8], [2, 0]])


def test_nonneg_matrix_defaults():
    a = NonnegMatrix(entries=[[0, 8], [2, 0]])
    assert a.n == 2
    assert a.entries.dtype == float
    assert np.array_equal(a.support(), [[False, True], [True, False]])
    assert a.to_json() == {"n": 2, "entries": [[0.0, 8.0], [2.0, 0.0]]}


@pytest.mark.parametrize(
    "entries",
    [
        [[1, -1], [0, 1]],
        [[1, 2, 3], [4, 5, 6]],
        [[np.inf]],
        np.zeros((0, 0)),
    ],
)
def test_nonneg_matrix_invalid(entries):
    with pytest.raises(ValueError):
        NonnegMatrix(entries=entries)


def test_nonneg_matrix_is_read_only():
    a = NonnegMatrix(entries=[[1.0]])
    with pytest.raises(ValueError):
        a.entries[0, 0] = 2.0
    with pytest.raises(TypeError):
        a.entries = np.eye(1)


def test_nonneg_matrix_equality():
    assert NonnegMatrix(entries=[[1, 2], [3, 4]]) == NonnegMatrix(
        entries=[[1.0, 2.0], [3.0, 4.0]]
    )
    assert NonnegMatrix(entries=[[1]]) != NonnegMatrix(entries=[[2]])
    assert NonnegMatrix(entries=[[1]]) != ComplexMatrix(entries=[[1]])


def test_complex_matrix():
    c = ComplexMatrix(entries=[[1j, 1], [0, -2]])
    assert c.modulus() == NonnegMatrix(entries=[[1, 1], [0, 2]])
    assert c.to_json()["entries"][0][0] == [0.0, 1.0]
    assert c.to_json()["entries"][1][1] == [-2.0, 0.0]


def test_row_uniform_from_dense(two_cycle):
    assert two_cycle.n == 2
    assert np.array_equal(two_cycle.support, [[False, True], [True, False]])
    assert np.array_equal(two_cycle.row_value, [8, 2])
    assert np.array_equal(two_cycle.dense(), [[0, 8], [2, 0]])


def test_row_uniform_from_dense_tolerance():
    RowUniformMatrix.from_dense([[1, 1 + 1e-14], [1, 0]])
    with pytest.raises(ValueError):
        RowUniformMatrix.from_dense([[1, 2], [1, 0]])


def test_row_uniform_empty_row():
    b = RowUniformMatrix.from_dense([[0, 3], [0, 0]])
    assert np.array_equal(b.row_value, [3, 0])
    assert b.to_json() == {"n": 2, "support": [[1, 2]], "row_value": [3.0, None]}


def test_row_uniform_invalid():
    with pytest.raises(ValueError):
        RowUniformMatrix(support=[[True]], row_value=[-1])
    with pytest.raises(ValueError):
        RowUniformMatrix(support=[[True]], row_value=[1, 2])
    with pytest.raises(ValueError):
        RowUniformMatrix(support=[[True, False]], row_value=[1])


def test_row_uniform_empty_row_value_is_ignored():
    b = RowUniformMatrix(support=[[False, True], [False, False]], row_value=[2, 7])
    assert np.array_equal(b.row_value, [2, 0])


def test_row_uniform_uniform_split():
    b = RowUniformMatrix.from_dense([[0, 8, 8], [2, 0, 0], [3, 3, 3]])
    split = b.uniform_split().entries
    assert np.allclose(split, [[0, 4, 4], [2, 0, 0], [1, 1, 1]])
    assert np.allclose(split.sum(axis=1), b.row_value)
    assert np.array_equal(b.out_degree(), [2, 1, 3])


def test_row_uniform_block_keeps_row_values():
    b = RowUniformMatrix.from_dense([[5, 0, 0], [4, 0, 4], [0, 4, 0]])
    block = b.block([1, 2])
    assert np.array_equal(block.support, [[False, True], [True, False]])
    assert np.array_equal(block.row_value, [4, 4])


def test_row_uniform_equality(two_cycle):
    assert two_cycle == RowUniformMatrix(
        support=[[False, True], [True, False]], row_value=[8, 2]
    )
    assert two_cycle != RowUniformMatrix.from_dense([[0, 8], [3, 0]])


def test_frobenius_form_properties():
    form = FrobeniusForm(
        permutation=[2, 0, 1],
        classes=[[2], [0, 1]],
        class_kind=[ClassKind.TRIVIAL, ClassKind.NONTRIVIAL],
        class_access=[ClassAccess.FINAL, ClassAccess.TRANSIENT],
    )
    assert form.count == 2
    assert form.class_of(1) == 1
    assert form.final == [0]
    assert form.nontrivial == [1]
    assert form.irreducible is False
    assert form.to_json()["classes"] == [[3], [1, 2]]
    with pytest.raises(IndexError):
        form.class_of(5)


def test_critical_graph_to_json():
    cg = CriticalGraph(nodes=[0, 1], edges=[[0, 1], [1, 0]], strict_nodes=[1])
    assert cg.to_json() == {
        "nodes": [1, 2],
        "edges": [[1, 2], [2, 1]],
        "strict_nodes": [2],
    }


def test_scaling_vector():
    x = ScalingVector(x=[2, 1])
    assert np.array_equal(x.apply(np.array([[0, 8], [2, 0]])), [[0, 4], [4, 0]])
    assert np.array_equal(ScalingVector(x=[4, 2]).normalized().x, [1, 0.5])
    assert x == ScalingVector(x=[2.0, 1.0])


@pytest.mark.parametrize("x", [[1, 0], [1, -1], [], [[1]]])
def test_scaling_vector_invalid(x):
    with pytest.raises(ValueError):
        ScalingVector(x=x)
