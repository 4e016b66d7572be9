import numpy as np
import pytest

from oracles import laplace_det
from symtensor.exactfield import field_make
from symtensor.vecfield import vec_det, vecfield


@pytest.mark.parametrize("pe", [(11, 1), (11, 2), (7, 3), (5, 4)])
def test_arithmetic_agrees_with_scalar_field(pe):
    spec = field_make(*pe)
    vf = vecfield(spec)
    codes = np.arange(spec.order, dtype=np.int64)
    a = np.repeat(codes, spec.order)
    b = np.tile(codes, spec.order)
    got_mul, got_add = vf.mul(a, b), vf.add(a, b)
    for x, y, m, s in zip(a[::7], b[::7], got_mul[::7], got_add[::7]):
        ex, ey = spec.from_code(int(x)), spec.from_code(int(y))
        assert (ex * ey).code == m
        assert (ex + ey).code == s
    for x in codes:
        e = spec.from_code(int(x))
        assert vf.neg(x) == (-e).code
        assert vf.frobenius(x) == e.frobenius().code
        if x:
            assert vf.inv(x) == e.inv().code
        assert bool(vf.is_square(x)) == e.is_square()
        if e.is_square():
            r = spec.from_code(int(vf.sqrt(x)))
            assert r * r == e


def test_vec_det_matches_cofactor_oracle():
    p = 31
    vf = vecfield(field_make(p))
    rng = np.random.default_rng(0)
    batch = rng.integers(0, p, size=(4, 4, 40))
    got = vec_det(vf, [[batch[i, j] for j in range(4)] for i in range(4)])
    for k in range(40):
        M = [[int(batch[i, j, k]) for j in range(4)] for i in range(4)]
        assert got[k] == laplace_det(M, p)
