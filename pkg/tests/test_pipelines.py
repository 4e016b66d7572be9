from math import comb

import pytest
import sympy

from symtensor.exactfield import field_make
from symtensor.instances import OrbitType, seed_octad
from symtensor.pipelines import (
    BITANGENT_VALUES,
    DegenerateConic,
    NondegeneracyFailure,
    genus3_pipeline,
    genus4_pipeline,
    genus5_pipeline,
    project_genus4,
    quintic_pipeline,
    rational_bitangent_count,
    recillas_construct,
    recillas_instance,
    recillas_lift,
    recillas_slices,
)
from symtensor.tensor import contract_yy

F101 = field_make(101)


def assert_all_pass(res):
    assert res.passed, [(c.claim, c.detail) for c in res.failed()]


def test_genus3_pipeline(genus3):
    res = genus3_pipeline(genus3.tensor, 1, genus3.cayley, genus3.analysis)
    assert_all_pass(res)
    assert res.data["rational_bitangents"] == 28


def test_genus4_pipeline(genus4):
    res, census = genus4_pipeline(genus4.tensor, genus4.cayley, genus4.analysis)
    assert_all_pass(res)
    assert len(census.projected_points) == 8
    assert len(census.lines) == 28 and census.cover_degrees == (4, 2)


def test_genus5_pipeline(genus5):
    assert_all_pass(genus5_pipeline(genus5.tensor, genus5.cayley, genus5.analysis))


def test_pipelines_reject_wrong_shapes(genus3, genus4):
    with pytest.raises(NondegeneracyFailure):
        genus4_pipeline(genus3.tensor)
    with pytest.raises(NondegeneracyFailure):
        genus5_pipeline(genus4.tensor)
    with pytest.raises(NondegeneracyFailure):
        quintic_pipeline(genus4.tensor)
    with pytest.raises(NondegeneracyFailure):
        genus3_pipeline(genus4.tensor)


@pytest.mark.parametrize(
    "orbit_type",
    [OrbitType(8, 0), OrbitType(4, 2), OrbitType(2, 3), OrbitType(1, 2, (3,)), OrbitType(1, 1, (5,)), OrbitType(1, 0, (7,))],
)
def test_rational_bitangents_follow_orbit_type(orbit_type):
    s = seed_octad(F101, orbit_type, 2)
    stable, n1, n2 = rational_bitangent_count(s.cayley)
    assert (n1, n2) == (orbit_type.n1, orbit_type.n2)
    assert stable == comb(n1, 2) + n2 == orbit_type.rational_bitangents()
    assert stable in BITANGENT_VALUES


def test_genus3_pipeline_on_non_split_octad():
    s = seed_octad(F101, OrbitType(2, 3), 1)
    res = genus3_pipeline(s.tensor, 2, s.cayley)
    assert_all_pass(res)
    assert res.data["rational_bitangents"] == 4


def test_recillas_slices_match_printed_matrices():
    a, b, c, d = (sympy.Matrix(3, 3, lambda i, j, s=s: sympy.Symbol(f"{s}{min(i, j) + 2}{max(i, j) + 2}")) for s in "abcd")
    slices = [sympy.Matrix(S) for S in recillas_slices(a.tolist(), b.tolist(), c.tolist(), d.tolist())]
    heads = [
        sympy.Matrix([[-1, 0], [0, 0]]),
        sympy.Matrix([[0, -1], [-1, 0]]),
        sympy.Matrix([[0, 0], [0, -1]]),
        sympy.zeros(2, 2),
    ]
    for S, head, low in zip(slices, heads, (a, b, c, d)):
        assert S == sympy.diag(head, low)
        assert S == S.T


def test_recillas_rejects_singular_conic():
    z = [[0] * 3 for _ in range(3)]
    eye = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    with pytest.raises(DegenerateConic):
        recillas_construct(F101, eye, eye, eye, z)


@pytest.fixture(scope="module")
def recillas():
    return recillas_instance(F101, 1)


def test_recillas_lifts_lie_in_cayley(recillas):
    A = recillas.tensor
    lifts = [y for z in recillas.branch_points for y in recillas_lift(recillas.a, recillas.b, recillas.c, z.coords)]
    assert len(set(lifts)) == 16
    for y in lifts:
        assert not any(contract_yy(A, y.coords))
    assert {project_genus4(y) for y in lifts} == set(recillas.branch_points)


def test_recillas_tensor_passes_genus4_pipeline(recillas):
    res, census = genus4_pipeline(recillas.tensor, recillas.cayley)
    assert_all_pass(res)
    assert set(census.projected_points) == set(recillas.branch_points)
