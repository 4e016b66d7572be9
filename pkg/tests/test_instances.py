import random

import pytest

from symtensor.exactfield import field_make
from symtensor.instances import (
    SHAPES,
    OrbitType,
    RetriesExhausted,
    daut_orbit,
    quadrics_through_points,
    random_combination,
    random_point_of_degree,
    seed,
    seed_octad,
    tensor_from_vector,
)
from symtensor.tensor import Block, BlockTensor, contract_yy
from symtensor.variety import ProjPoint, cayley_points

F101 = field_make(101)


def seven_points(rng):
    return [ProjPoint.of([F101.random(rng) for _ in range(4)]) for _ in range(7)]


def test_net_of_quadrics_through_seven_points():
    rng = random.Random(7)
    pts = seven_points(rng)
    single = quadrics_through_points(F101, 0, (4,), [p.coords for p in pts])
    assert len(single) == 3
    net = quadrics_through_points(F101, 2, (4,), [p.coords for p in pts])
    assert len(net) == 9
    # the three independent quadrics as slices: 7 chosen base points plus a forced rational eighth
    slices = [tensor_from_vector(F101, 0, (4,), b).blocks[0].slices[0] for b in single]
    A = BlockTensor(F101, 2, (Block(4, tuple(slices)),))
    cv = cayley_points(A, 1)
    assert cv.count == 8 and set(pts) <= set(cv.points)


def test_basis_tensors_vanish_on_conditions():
    rng = random.Random(3)
    n, sizes = SHAPES["genus4"]
    pts = [ProjPoint.of([F101.random(rng) for _ in range(5)]) for _ in range(5)]
    basis = quadrics_through_points(F101, n, sizes, [p.coords for p in pts])
    for _ in range(5):
        A = tensor_from_vector(F101, n, sizes, random_combination(F101, basis, rng))
        for p in pts:
            assert not any(contract_yy(A, p.coords))


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_random_point_of_degree(degree):
    y = random_point_of_degree(11, degree, 3, random.Random(degree))
    assert y.degree == degree


def test_seeding_is_deterministic(genus3):
    again = seed("genus3", F101, 1)
    assert again.tensor == genus3.tensor
    assert again.cayley.points == genus3.cayley.points


def test_different_seeds_differ(genus3):
    assert seed("genus3", F101, 2).tensor != genus3.tensor


@pytest.mark.parametrize("name, count", [("genus3", 8), ("genus4", 16), ("genus5", 32)])
def test_seeded_cayley_closed_under_sign_patterns(name, count, request):
    s = request.getfixturevalue(name)
    pts = set(s.cayley.points)
    assert len(pts) == count and s.cayley.complete
    for y in pts:
        assert set(daut_orbit(s.tensor.sizes, y)) <= pts


def test_seeding_gives_up_after_retries():
    with pytest.raises(RetriesExhausted):
        seed("genus4", F101, 1, retries=0)


@pytest.mark.parametrize(
    "orbit_type",
    [OrbitType(8, 0), OrbitType(6, 1), OrbitType(1, 2, (3,)), OrbitType(2, 0, (3, 3)), OrbitType(1, 0, (7,))],
)
def test_octad_orbit_types(orbit_type):
    s = seed_octad(F101, orbit_type, 1)
    degrees = sorted(s.cayley.orbit_degrees())
    expected = sorted([1] * orbit_type.n1 + [2] * orbit_type.n2 + list(orbit_type.higher))
    assert degrees == expected


def test_orbit_type_validation():
    with pytest.raises(ValueError):
        OrbitType(0, 4)
    with pytest.raises(ValueError):
        OrbitType(2, 2)
    assert OrbitType(4, 2).rational_bitangents() == 8
