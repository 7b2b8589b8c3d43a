import numpy as np
import pytest

from spectral_range.matrix import *
from spectral_range.models import ClassAccess, ClassKind, ComplexMatrix, NonnegMatrix, RowUniformMatrix


@pytest.fixture
def sunflower_a1():
    return NonnegMatrix(
        entries=[
            [0, 8, 0, 0, 0],
            [2, 0, 0, 0, 0],
            [2, 0, 0, 0, 0],
            [0, 3, 0, 0, 0],
            [0, 3, 0, 0, 0],
        ]
    )


@pytest.fixture
def reducible_b():
    return RowUniformMatrix.from_dense(
        [
            [5, 0, 0, 0, 0],
            [4, 0, 4, 0, 0],
            [0, 4, 0, 0, 0],
            [3, 0, 0, 3, 3],
            [0, 3, 0, 3, 3],
        ]
    )


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


def test_aux_two_cycle():
    b = aux(NonnegMatrix(entries=[[0, 8], [2, 0]]))
    assert np.array_equal(b.support, [[False, True], [True, False]])
    assert np.array_equal(b.row_value, [8, 2])


def test_aux_sunflower(sunflower_a1):
    b = aux(sunflower_a1)
    assert np.array_equal(b.row_value, [8, 2, 2, 3, 3])
    assert np.array_equal(b.support, sunflower_a1.support())


def test_aux_of_uniform_split(reducible_b):
    assert aux(reducible_b.uniform_split()) == reducible_b


def test_aux_of_dense_row_uniform_scales_by_degree(reducible_b):
    b = aux(NonnegMatrix(entries=reducible_b.dense()))
    assert np.array_equal(b.row_value, reducible_b.row_value * reducible_b.out_degree())


@pytest.mark.parametrize(
    "entries,support,values",
    [
        ([[1j, 1], [0, 2]], [[True, True], [False, True]], [2, 2]),
        ([[1, 1], [-1, -1]], [[True, True], [True, True]], [2, 2]),
    ],
)
def test_aux_complex(entries, support, values):
    b = aux_complex(ComplexMatrix(entries=entries))
    assert np.array_equal(b.support, support)
    assert np.allclose(b.row_value, values)


def test_hadamard_inverse():
    inverse = hadamard_inverse(NonnegMatrix(entries=[[0, 8], [2, 0]]))
    assert np.array_equal(inverse.entries, [[0, 0.125], [0.5, 0]])


def test_digraph():
    g = digraph(NonnegMatrix(entries=[[0, 8], [2, 0]]))
    assert sorted(g.nodes) == [0, 1]
    assert sorted(g.edges) == [(0, 1), (1, 0)]
    assert g[0][1]["weight"] == 8.0
    g = digraph(ComplexMatrix(entries=[[0, 3j], [0, 0]]))
    assert g[0][1]["weight"] == 3.0


def test_frobenius_form_reducible(reducible_b):
    form = frobenius_form(reducible_b)
    assert form.classes == [[0], [1, 2], [3, 4]]
    assert form.permutation == [0, 1, 2, 3, 4]
    assert form.class_access == [
        ClassAccess.FINAL,
        ClassAccess.TRANSIENT,
        ClassAccess.TRANSIENT,
    ]
    assert form.class_kind == [ClassKind.NONTRIVIAL] * 3


def test_frobenius_form_all_final(disconnected_c):
    form = frobenius_form(disconnected_c)
    assert form.classes == [[0], [1, 2], [3, 4]]
    assert form.final == [0, 1, 2]


def test_frobenius_form_acyclic():
    form = frobenius_form(np.array([[0, 1, 1], [0, 0, 1], [0, 0, 0]]))
    assert form.classes == [[2], [1], [0]]
    assert form.permutation == [2, 1, 0]
    assert form.class_kind == [ClassKind.TRIVIAL] * 3
    assert form.final == [0]


def test_frobenius_form_is_block_lower_triangular(reducible_b):
    form = frobenius_form(reducible_b)
    entries = permuted(reducible_b, form)
    position = {}
    for k, nodes in enumerate(form.classes):
        for i in nodes:
            position[i] = k
    p = form.permutation
    for i, j in zip(*np.nonzero(entries)):
        assert position[p[j]] <= position[p[i]]


def test_frobenius_form_final_class_ties():
    # two final classes, the one holding the smaller node comes first
    entries = np.array([[0, 0, 0], [0, 2, 0], [1, 1, 1]])
    form = frobenius_form(entries)
    assert form.classes[:2] == [[0], [1]]
    assert form.is_trivial(0)
    assert not form.is_trivial(1)
    assert form.class_access[2] == ClassAccess.TRANSIENT


def test_is_irreducible(sunflower_a1):
    assert is_irreducible(np.array([[0, 8], [2, 0]]))
    assert is_irreducible(np.array([[3]]))
    assert not is_irreducible(np.array([[0]]))
    assert not is_irreducible(sunflower_a1)


def test_class_block(reducible_b):
    assert np.array_equal(class_block(reducible_b, [1, 2]), [[0, 4], [4, 0]])


def test_exit_nodes(reducible_b):
    assert exit_nodes(reducible_b, [1, 2]) == [1]
    assert exit_nodes(reducible_b, [3, 4]) == [3, 4]
    assert exit_nodes(reducible_b, [0]) == []


def test_is_k_dominated():
    b = RowUniformMatrix.from_dense([[0, 4], [4, 0]])
    reduced = RowUniformMatrix.from_dense([[0, 3], [4, 0]])
    assert is_k_dominated(reduced, b, [0])
    assert not is_k_dominated(reduced, b, [1])
    assert not is_k_dominated(b, b, [0])
    other = RowUniformMatrix.from_dense([[3, 3], [4, 0]])
    assert not is_k_dominated(other, b, [0])
