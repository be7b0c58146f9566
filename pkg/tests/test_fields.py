from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from epwkit.fields import GF, QQ, FieldSpec, FieldError, UnsupportedField, make_field, smallest_nonsquare, sqrt_in_field

from .strategies import elements, fields


def test_square_roots_in_small_prime_field():
    F = GF(7)
    assert F.sqrt(4) in (2, 5)
    assert F.sqrt(3) is None
    assert sqrt_in_field(3, F) is None


def test_nonsquare_gets_a_root_in_the_quadratic_extension():
    E = GF(49)
    r = E.sqrt(E.coerce(3))
    assert r is not None and E.mul(r, r) == E.coerce(3)


def test_extension_generator_squares_to_smallest_nonsquare():
    for p in (3, 5, 7, 11, 13):
        E = GF(p * p)
        w = (0, 1)
        assert E.mul(w, w) == E.coerce(smallest_nonsquare(p))


def test_characteristic_two_rejected():
    with pytest.raises(FieldError):
        make_field("prime", 2)


def test_square_roots_over_rationals_are_unsupported():
    with pytest.raises(UnsupportedField):
        QQ.sqrt(Fraction(4))


@pytest.mark.parametrize("text,order", [("F7", 7), ("F49", 49), ("prime 13", 13), ("Q", None)])
def test_field_spec_parsing(text, order):
    F = FieldSpec.parse(text).field
    if order is None:
        assert F is QQ or F.kind == "rationals"
    else:
        assert F.order == order


def test_rational_parse_and_inverse_stay_exact():
    assert QQ.parse("-3/4") == Fraction(-3, 4)
    assert isinstance(QQ.inv(3), Fraction)


@given(st.data())
def test_format_parse_round_trip(data):
    F = data.draw(fields)
    a = data.draw(elements(F))
    a = F.coerce(a)
    assert F.parse(F.format(a)) == a


@given(st.data())
def test_field_axioms(data):
    F = data.draw(fields)
    a, b, c = (F.coerce(data.draw(elements(F))) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == F.zero
    if not F.is_zero(a):
        assert F.mul(a, F.inv(a)) == F.one


@given(st.data())
def test_sqrt_is_a_root_when_found(data):
    F = data.draw(fields.filter(lambda F: F.is_finite))
    a = F.coerce(data.draw(elements(F)))
    r = F.sqrt(F.mul(a, a))
    assert r is not None and F.mul(r, r) == F.mul(a, a)
