import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import det_polynomial, gradient_of_polynomial
from symtensor import linalg
from symtensor.claims import smooth_points
from symtensor.exactfield import field_make
from symtensor.instances import SHAPES, random_tensor
from symtensor.tensor import (
    BlockTensor,
    CorankTooHigh,
    CorankZero,
    InvalidTensor,
    ZeroVector,
    act,
    bilinear_covector,
    block_coranks,
    contract_x,
    contract_x_block,
    contract_xy,
    contract_yy,
    daut_classes,
    daut_elements,
    delete_block,
    embed_from_hyperplane,
    gauss_diagram_holds,
    jacobian_at,
    kernel_map,
    restrict_to_hyperplane,
    sigma,
    splice,
    unsplice,
)

F = field_make(101)
SHAPE_NAMES = sorted(SHAPES)


def rand_vec(rng, k, spec=F):
    while True:
        v = [spec.random(rng) for _ in range(k)]
        if any(v):
            return v


def rand_invertible(rng, k):
    while True:
        M = [[F.random(rng) for _ in range(k)] for _ in range(k)]
        if linalg.det(M):
            return M


cases = st.tuples(st.sampled_from(SHAPE_NAMES), st.integers(0, 10**6))


def test_rejects_asymmetric_slice():
    with pytest.raises(InvalidTensor):
        BlockTensor.from_ints(F, [[[[1, 2], [3, 1]], [[1, 0], [0, 1]]]])


def test_rejects_ragged_slice_counts():
    with pytest.raises(InvalidTensor):
        BlockTensor.from_ints(F, [[[[1, 0], [0, 1]], [[0, 1], [1, 0]]], [[[1, 0], [0, 1]]]])


def test_rejects_zero_block_and_tiny_block():
    with pytest.raises(InvalidTensor):
        BlockTensor.from_ints(F, [[[[0, 0], [0, 0]], [[0, 0], [0, 0]]]])
    with pytest.raises(InvalidTensor):
        BlockTensor.from_ints(F, [[[[1]], [[2]]]])


def test_zero_vectors_rejected(genus3):
    A = genus3.tensor
    with pytest.raises(ZeroVector):
        contract_yy(A, [F.zero] * 4)
    with pytest.raises(ZeroVector):
        contract_x(A, [F.zero] * 3)


@given(cases)
def test_contractions_agree(case):
    shape, s = case
    A = random_tensor(F, shape, s)
    rng = random.Random(s)
    x, y, z = rand_vec(rng, A.n + 1), rand_vec(rng, A.m + 1), rand_vec(rng, A.m + 1)
    Ax = contract_x(A, x)
    assert contract_xy(A, x, y) == linalg.mat_vec(Ax, y)
    cov = bilinear_covector(A, y, z)
    assert sum((xi * ci for xi, ci in zip(x, cov)), F.zero) == linalg._dot(y, linalg.mat_vec(Ax, z))
    assert contract_yy(A, y) == [linalg._dot(y, linalg.mat_vec(A.full_slice(i), y)) for i in range(A.n + 1)]


@given(cases)
def test_psi_invariant_under_sign_patterns(case):
    shape, s = case
    A = random_tensor(F, shape, s)
    y = rand_vec(random.Random(s), A.m + 1)
    pats = daut_elements(A)
    assert len(pats) == 2**A.r and len(daut_classes(A)) == 2 ** (A.r - 1)
    for pat in pats:
        assert contract_yy(A, pat.apply(A, y)) == contract_yy(A, y)
    for l in range(A.r):
        assert sigma(A, l) * sigma(A, l) == pats[0]


@given(cases)
def test_action_transforms_contractions(case):
    shape, s = case
    A = random_tensor(F, shape, s)
    rng = random.Random(s)
    g = rand_invertible(rng, A.n + 1)
    hs = [rand_invertible(rng, d) for d in A.sizes]
    B = act(A, g, hs)
    x = rand_vec(rng, A.n + 1)
    gx = linalg.mat_vec(g, x)
    if not any(gx):
        return
    for l, h in enumerate(hs):
        dh = linalg.det(h)
        assert linalg.det(contract_x_block(B, l, x)) == dh * dh * linalg.det(contract_x_block(A, l, gx))
    y = rand_vec(rng, A.m + 1)
    hy = []
    for l, h in enumerate(hs):
        hy.extend(linalg.mat_vec(h, A.block_part(y, l)))
    if any(hy):
        assert contract_yy(B, y) == linalg.mat_vec(linalg.transpose(g), contract_yy(A, hy))


@given(cases)
def test_restriction_is_contraction_on_hyperplane(case):
    shape, s = case
    A = random_tensor(F, shape, s)
    rng = random.Random(s)
    H = rand_vec(rng, A.n + 1)
    R = restrict_to_hyperplane(A, H)
    assert R.n == A.n - 1
    xr = rand_vec(rng, A.n)
    x = embed_from_hyperplane(F, H, xr)
    assert linalg._dot(H, x) == 0
    assert contract_x(R, xr) == contract_x(A, x)


@given(cases)
def test_jacobian_matches_interpolated_gradient(case):
    shape, s = case
    A = random_tensor(F, shape, s)
    rng = random.Random(s)
    x = rand_vec(rng, A.n + 1)
    J = jacobian_at(A, x)
    for l, b in enumerate(A.blocks):
        slices = [[[int(c) for c in row] for row in S] for S in b.slices]
        mons, coeffs = det_polynomial(slices, F.p, rng)
        assert [int(c) for c in J[l]] == gradient_of_polynomial(mons, coeffs, [int(c) for c in x], F.p)


def test_gauss_diagram_on_smooth_points(genus3):
    A = genus3.tensor
    pts = smooth_points(A)
    assert len(pts) > 50
    for x in pts[:60]:
        assert gauss_diagram_holds(A, x.coords)


def test_accidental_example(accidental_example):
    A = accidental_example
    p = q = [F(1), F(0), F(0)]
    assert not any(contract_yy(A, q))
    assert not any(contract_xy(A, p, q))
    assert block_coranks(A, p) == [2]
    with pytest.raises(CorankTooHigh):
        kernel_map(A, p)


def test_kernel_map_corank_zero(cayley_cubic):
    with pytest.raises(CorankZero):
        kernel_map(cayley_cubic, [F(1), F(1), F(1), F(0)])


def test_kernel_map_on_smooth_point(genus4):
    A = genus4.tensor
    x = smooth_points(A)[0]
    bk = kernel_map(A, x.coords)
    assert bk.span.dim == A.r
    for l in range(A.r):
        assert not any(contract_xy(A, x.coords, bk.embedded(A, l)))


@given(st.integers(0, 10**6))
def test_splice_unsplice_bijection(s):
    A = random_tensor(F, "genus5", s)
    rng = random.Random(s)
    for l in range(A.r):
        D = delete_block(A, l)
        yr = rand_vec(rng, D.m + 1)
        y = splice(A, l, yr)
        assert unsplice(A, l, y) == yr
        assert not any(A.block_part(y, l))
        assert contract_yy(A, y) == contract_yy(D, yr)
    with pytest.raises(ValueError):
        unsplice(A, 0, [F.one] * (A.m + 1))
