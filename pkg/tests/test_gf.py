import itertools

import numpy as np
import pytest

from insdel.errors import ArithmeticFieldError, InvalidInputError
from insdel.gf import (
    FieldSpec,
    field_arithmetic,
    gf,
    lagrange,
    least_irreducible,
    poly_divmod,
    poly_eval,
    poly_interpolate,
    poly_mul,
)


def test_inverse_gf16():
    F = gf(16)
    for a in range(1, 16):
        assert F.mul(a, F.inv(a)) == 1


def test_gf8_axioms_exhaustive():
    F = gf(8)
    for a, b, c in itertools.product(range(8), repeat=3):
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("q", [2, 4, 8, 64])
def test_characteristic_two(q):
    F = gf(q)
    assert all(F.add(x, x) == 0 for x in range(q))


@pytest.mark.parametrize("q", [5, 7, 9, 25, 27])
def test_odd_fields(q):
    F = gf(q)
    for a in range(1, q):
        assert F.div(a, a) == 1
        assert F.add(a, F.neg(a)) == 0
        assert F.pow(a, q - 1) == 1


def test_vector_ops_match_scalar():
    F = gf(9)
    a = np.arange(9)
    b = (a * 5 + 2) % 9
    assert F.vmul(a, b).tolist() == [F.mul(x, y) for x, y in zip(a.tolist(), b.tolist())]
    assert F.vadd(a, b).tolist() == [F.add(x, y) for x, y in zip(a.tolist(), b.tolist())]
    assert F.vsub(a, b).tolist() == [F.sub(x, y) for x, y in zip(a.tolist(), b.tolist())]


def test_errors():
    F = gf(8)
    with pytest.raises(ArithmeticFieldError):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        field_arithmetic(F, 3, 0, "div")
    with pytest.raises(InvalidInputError):
        F.check(8)
    with pytest.raises(InvalidInputError):
        gf(6)
    with pytest.raises(InvalidInputError):
        FieldSpec(2, 2, modulus=(1, 0, 1))  # x^2 + 1 = (x + 1)^2 over GF(2)


def test_least_irreducible():
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(2, 3) == (1, 1, 0, 1)


def test_constant_polynomial():
    F = gf(7)
    assert all(poly_eval(F, (4,), x) == 4 for x in range(7))


def test_interpolate_quadratic_gf7():
    F = gf(7)
    target = (3, 0, 5)
    pts = [(x, poly_eval(F, target, x)) for x in (1, 2, 4)]
    assert lagrange(F, pts) == target
    assert poly_interpolate(F, pts, 3) == target


def test_interpolate_off_curve_fails():
    F = gf(5)
    pts = [(0, 0), (1, 1), (2, 3)]
    fits = [c for c in itertools.product(range(5), repeat=2)
            if all(poly_eval(F, c, x) == y for x, y in pts)]
    assert fits == []
    assert poly_interpolate(F, pts, 2) is None


def test_divmod_identity():
    F = gf(16)
    a, b = (3, 7, 1, 9, 2), (5, 1, 4)
    quot, rem = poly_divmod(F, a, b)
    back = poly_mul(F, quot, b)
    back = tuple(F.add(x, y) for x, y in itertools.zip_longest(back, rem, fillvalue=0))
    assert back == a
    with pytest.raises(ArithmeticFieldError):
        poly_divmod(F, a, ())
