import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import fq_mul, fq_pow, irreducible_by_trial_division
from symtensor.exactfield import CharTwoOrThree, DivisionByZero, FieldMismatch, NotPrime, field_make

# smallest monic irreducible moduli, found by trial division in tests/oracles.py
FROZEN_MODULI = {
    (11, 2): [1, 0, 1],
    (41, 2): [3, 0, 1],
    (101, 2): [2, 0, 1],
    (11, 3): [4, 1, 0, 1],
    (5, 4): [2, 0, 0, 0, 1],
    (7, 3): [2, 0, 0, 1],
}

FIELDS = [(5, 1), (7, 1), (11, 1), (11, 2), (7, 3), (5, 4), (101, 1), (101, 2)]


@pytest.mark.parametrize("pe", sorted(FROZEN_MODULI))
def test_modulus_matches_oracle(pe):
    spec = field_make(*pe)
    assert list(spec.modulus) == FROZEN_MODULI[pe]
    assert irreducible_by_trial_division(list(spec.modulus), pe[0])


@pytest.mark.parametrize("p", [2, 3])
def test_small_characteristic_rejected(p):
    with pytest.raises(CharTwoOrThree):
        field_make(p)


@pytest.mark.parametrize("p", [1, 9, 15, 91])
def test_non_prime_rejected(p):
    with pytest.raises(NotPrime):
        field_make(p)


def test_division_by_zero():
    spec = field_make(11, 2)
    with pytest.raises(DivisionByZero):
        spec.one / spec.zero
    with pytest.raises(DivisionByZero):
        spec.zero.inv()


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        field_make(7)(1) + field_make(11)(1)


def test_prime_field_embeds_in_extension():
    big = field_make(7, 3)
    assert big(field_make(7)(3)) + big.gen() == big([3, 1])


def _elements(pe):
    spec = field_make(*pe)
    return st.integers(0, spec.order - 1).map(spec.from_code)


@pytest.mark.parametrize("pe", FIELDS)
@given(data=st.data())
def test_field_axioms(pe, data):
    a, b, c = (data.draw(_elements(pe)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if a:
        assert a * a.inv() == 1
        assert (b / a) * a == b


@pytest.mark.parametrize("pe", [(11, 2), (7, 3), (5, 4)])
@given(data=st.data())
def test_multiplication_matches_oracle(pe, data):
    spec = field_make(*pe)
    a, b = data.draw(_elements(pe)), data.draw(_elements(pe))
    assert list((a * b).coeffs) == fq_mul(list(a.coeffs), list(b.coeffs), list(spec.modulus), spec.p)


@pytest.mark.parametrize("pe", [(11, 2), (7, 3)])
def test_frobenius_is_pth_power_and_order_e(pe):
    spec = field_make(*pe)
    for a in spec.elements():
        assert list(a.frobenius().coeffs) == fq_pow(list(a.coeffs), spec.p, list(spec.modulus), spec.p)
        x = a
        for _ in range(spec.e):
            x = x.frobenius()
        assert x == a


@pytest.mark.parametrize("pe", FIELDS)
def test_sqrt(pe):
    spec = field_make(*pe)
    rng = random.Random(f"{pe}")
    for _ in range(200):
        a = spec.random(rng)
        r = (a * a).sqrt()
        assert r is not None and r * r == a * a
    squares = {(x * x).code for x in spec.elements()} if spec.order < 5000 else None
    if squares is not None:
        for a in spec.elements():
            assert a.is_square() == (a.code in squares)
            assert (a.sqrt() is None) == (a.code not in squares)


@pytest.mark.parametrize("pe", FIELDS)
def test_codes_enumerate_every_element_once(pe):
    spec = field_make(*pe)
    codes = [a.code for a in spec.elements()]
    assert codes == list(range(spec.order))
