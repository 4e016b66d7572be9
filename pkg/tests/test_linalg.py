import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import cofactor_adjugate, laplace_det, solve_mod_p
from symtensor import linalg
from symtensor.exactfield import field_make
from symtensor.linalg import NoSolution, NotSquare

P = 31
F = field_make(P)
F2 = field_make(7, 2)


def int_matrices(rows, cols):
    return st.lists(st.lists(st.integers(0, P - 1), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def lift(M, spec=F):
    return [[spec(v) for v in row] for row in M]


def ints(M):
    return [[int(v) for v in row] for row in M]


def test_adjugate_of_diagonal_frozen():
    F7 = field_make(7)
    assert ints(linalg.adjugate(lift([[1, 0, 0], [0, 2, 0], [0, 0, 3]], F7))) == [[6, 0, 0], [0, 3, 0], [0, 0, 2]]


@given(st.integers(1, 5).flatmap(lambda n: int_matrices(n, n)))
def test_det_matches_cofactor_expansion(M):
    assert int(linalg.det(lift(M))) == laplace_det(M, P)


@given(st.integers(1, 4).flatmap(lambda n: int_matrices(n, n)))
def test_adjugate_matches_cofactors(M):
    assert ints(linalg.adjugate(lift(M))) == cofactor_adjugate(M, P)


@given(st.integers(1, 4).flatmap(lambda n: int_matrices(n, n)))
def test_adjugate_identity(M):
    A = lift(M)
    d = linalg.det(A)
    prod = linalg.matmul(A, linalg.adjugate(A))
    assert prod == [[d if i == j else F.zero for j in range(len(M))] for i in range(len(M))]


@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(lambda c: int_matrices(r, c))))
def test_rank_nullity(M):
    A = lift(M)
    K = linalg.kernel_basis(A)
    assert linalg.rank(A) + K.dim == len(M[0])
    for v in K.basis:
        assert not any(linalg.mat_vec(A, v))


@given(st.integers(2, 5).flatmap(lambda r: int_matrices(r, 4)), st.randoms(use_true_random=False))
def test_kernel_invariant_under_row_permutation(M, rnd):
    shuffled = list(M)
    rnd.shuffle(shuffled)
    assert linalg.kernel_basis(lift(M)).basis == linalg.kernel_basis(lift(shuffled)).basis


@given(int_matrices(4, 4), st.lists(st.integers(0, P - 1), min_size=4, max_size=4))
def test_solve_matches_oracle(M, b):
    A = lift(M)
    v = linalg.solve(A, [F(x) for x in b])
    if laplace_det(M, P):
        assert [int(x) for x in v] == solve_mod_p(M, b, P)
    elif not isinstance(v, NoSolution):
        assert linalg.mat_vec(A, v) == [F(x) for x in b]


def test_solve_reports_inconsistency():
    A = lift([[1, 0], [1, 0]])
    res = linalg.solve(A, [F(1), F(2)])
    assert isinstance(res, NoSolution) and not res


def test_extension_field_kernel():
    rng = random.Random(3)
    for _ in range(50):
        M = [[F2.random(rng) for _ in range(4)] for _ in range(3)]
        M.append([a + b for a, b in zip(M[0], M[1])])
        K = linalg.kernel_basis(M)
        assert K.dim == 4 - linalg.rank(M) >= 1
        for v in K.basis:
            assert not any(linalg.mat_vec(M, v))


def test_det_rejects_rectangular():
    with pytest.raises(NotSquare):
        linalg.det(lift([[1, 2, 3], [4, 5, 6]]))


def test_normalize_and_proportional():
    u = [F(0), F(3), F(6)]
    assert linalg.normalize(u) == (F(0), F(1), F(2))
    assert linalg.proportional(u, [F(0), F(5), F(10)])
    assert not linalg.proportional(u, [F(0)] * 3)
    with pytest.raises(ValueError):
        linalg.normalize([F(0), F(0)])


def test_subspace_contains():
    K = linalg.kernel_basis(lift([[1, 1, 0]]))
    assert K.contains([F(1), F(-1), F(5)])
    assert not K.contains([F(1), F(0), F(0)])
