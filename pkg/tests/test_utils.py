import numpy as np
import pytest

from spectral_range.models import ComplexMatrix, NonnegMatrix, RowUniformMatrix
from spectral_range.utils import *


def test_as_array():
    b = RowUniformMatrix.from_dense([[0, 8], [2, 0]])
    assert np.array_equal(as_array(b), [[0, 8], [2, 0]])
    assert np.array_equal(as_array(NonnegMatrix(entries=[[1, 2], [3, 4]])), [[1, 2], [3, 4]])
    assert as_array([[1, 2], [3, 4]]).dtype == float


def test_as_array_rejects_complex():
    with pytest.raises(TypeError):
        as_array(ComplexMatrix(entries=[[1j]]))


def test_as_array_returns_a_copy():
    a = NonnegMatrix(entries=[[1.0]])
    arr = as_array(a)
    arr[0, 0] = 5
    assert a.entries[0, 0] == 1


def test_log_weights():
    w = log_weights(np.array([[0.0, np.e], [1.0, 0.0]]))
    assert w[0, 0] == -np.inf
    assert w[0, 1] == pytest.approx(1.0)
    assert w[1, 0] == 0.0


@pytest.mark.parametrize(
    "x,y,rel,expected",
    [
        (1.0, 1.0 + 1e-12, 1e-10, True),
        (1.0, 1.1, 1e-10, False),
        (1e6, 1e6 + 1e-5, 1e-10, True),
        (0.0, 1e-11, 1e-10, True),
        (0.0, 1e-9, 1e-10, False),
    ],
)
def test_isclose(x, y, rel, expected):
    assert isclose(x, y, rel) is expected


def test_sup_norm():
    assert sup_norm(np.array([1.0, -3.0, 2.0])) == 3.0
    assert sup_norm(np.array([])) == 0.0
    assert sup_norm(np.array([3 + 4j, 1j])) == 5.0


def test_one_and_zero_based():
    assert one_based([0, 3]) == [1, 4]
    assert zero_based(["1", 4]) == [0, 3]
    with pytest.raises(ValueError):
        zero_based([0, 1])


def test_complex_to_pairs():
    assert complex_to_pairs(np.array([[1 + 2j, 3]])) == [[[1.0, 2.0], [3.0, 0.0]]]
    assert complex_to_pairs(np.array(1j)) == [0.0, 1.0]
