from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from patchalg.scalars import (
    QQ,
    FieldDescriptor,
    FieldError,
    Scalar,
    cyclotomic_field,
    field_arith,
    root_of_unity,
)

C4 = cyclotomic_field(4)


def q(v):
    return Scalar.of(QQ, v)


def test_div_example():
    assert field_arith("div", q(1), q("3/5")) == q("5/3")


def test_cyclotomic_square():
    w = Scalar.of(C4, 0, 1)
    assert field_arith("mul", w, w) == Scalar.of(C4, -1)


def test_additive_inverse():
    x = q("7/3")
    assert field_arith("add", x, field_arith("neg", x, x)) == q(0)


def test_division_by_zero():
    with pytest.raises(FieldError):
        field_arith("div", q(1), q(0))


def test_descriptor_mismatch():
    with pytest.raises(FieldError):
        field_arith("add", q(1), Scalar.of(C4, 1))


def test_unknown_cyclotomic_order():
    with pytest.raises(FieldError):
        FieldDescriptor("cyclotomic", 8)


@pytest.mark.parametrize("field", [QQ, cyclotomic_field(1), cyclotomic_field(2), C4])
def test_roots_of_unity_orders(field):
    for order in (1, 2, 4):
        if not field.has_root_of_unity(order):
            with pytest.raises(FieldError):
                root_of_unity(order, field)
            continue
        z = root_of_unity(order, field)
        assert (z ** order).is_one()
        p = Scalar.one(field)
        for e in range(1, order):
            p = p * z
            assert not p.is_one(), f"zeta^{e} = 1 for order {order}"


def test_root_examples():
    assert root_of_unity(2, QQ) == q(-1)
    assert root_of_unity(4, C4) == Scalar.of(C4, 0, 1)
    with pytest.raises(FieldError):
        root_of_unity(4, QQ)


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)


@given(rationals, rationals, rationals)
def test_field_axioms_rationals(a, b, c):
    x, y, z = q(a), q(b), q(c)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == q(0)
    if not x.is_zero():
        assert x * x.inverse() == q(1)


@given(rationals, rationals, rationals, rationals)
def test_field_axioms_cyclotomic(a, b, c, d):
    x = Scalar.of(C4, a, b)
    y = Scalar.of(C4, c, d)
    z = Scalar.of(C4, d, a)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    if not x.is_zero():
        assert (x * x.inverse()).is_one()


def test_string_coercion():
    assert Scalar.of(QQ, "-7/2").rational == Fraction(-7, 2)
    with pytest.raises(FieldError):
        Scalar.of(QQ, 1.5)
