import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from twistchain import linalg
from twistchain.sparse import SparseMatrix

small = st.integers(-4, 4)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def _sym(m):
    return sympy.Matrix(m)


@settings(max_examples=40)
@given(square(4))
def test_det_and_rank_match_sympy(m):
    M = [[mpq(v) for v in row] for row in m]
    assert linalg.det(M) == int(_sym(m).det())
    assert linalg.rank(linalg.dense_to_rows(M)) == _sym(m).rank()


@settings(max_examples=40)
@given(square(3))
def test_inverse_roundtrip(m):
    M = [[mpq(v) for v in row] for row in m]
    if linalg.det(M) == 0:
        return
    inv = linalg.inverse(M)
    eye = linalg.matmul(M, inv)
    assert all(eye[i][j] == (1 if i == j else 0) for i in range(3) for j in range(3))


@settings(max_examples=40)
@given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=4))
def test_nullspace_is_annihilated(rows):
    R = [{j: mpq(v) for j, v in enumerate(r) if v} for r in rows]
    null = linalg.nullspace(R, 5)
    assert len(null) == 5 - linalg.rank(R)
    for vec in null:
        for r in R:
            assert sum(r.get(j, 0) * v for j, v in vec.items()) == 0


def test_sparse_kron_and_inverse():
    a = SparseMatrix.from_dense([[1, 2], [0, 1]])
    b = SparseMatrix.from_dense([[0, 1], [1, 0]])
    k = a.kron(b)
    assert k.get(0, 1) == 1 and k.get(0, 3) == 2 and k.get(1, 2) == 2
    assert a @ a.inverse() == SparseMatrix.identity(2)
    assert (a - a).is_zero()


def test_singular_inverse_raises():
    from twistchain.sparse import Singular
    with pytest.raises(Singular):
        SparseMatrix.from_dense([[1, 1], [1, 1]]).inverse()
