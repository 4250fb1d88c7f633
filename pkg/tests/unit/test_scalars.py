"""Arithmetic in Q and Q(zeta_n)."""

import random
from fractions import Fraction

import pytest

from src.algebra.scalars import cyclotomic_context, parse_scalar
from src.common.errors import FieldMismatchError, ParseError


@pytest.mark.parametrize(
    "order, expected",
    [(1, (-1, 1)), (2, (1, 1)), (3, (1, 1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1)), (8, (1, 0, 0, 0, 1))],
)
def test_cyclotomic_minimal_polynomial(order, expected):
    assert cyclotomic_context(order).minimal_polynomial == expected


def test_orders_one_and_two_are_rational():
    assert cyclotomic_context(1).is_rational
    assert cyclotomic_context(2).is_rational
    assert cyclotomic_context(2).zeta == cyclotomic_context(2).scalar(-1)
    assert not cyclotomic_context(3).is_rational


def test_rational_arithmetic(rationals):
    half = rationals.scalar(Fraction(1, 2))
    assert half + 1 == rationals.scalar(Fraction(3, 2))
    assert 1 - half == half
    assert half * 4 == rationals.scalar(2)
    assert (half / 3).as_rational() == Fraction(1, 6)
    assert (half**-2).as_rational() == 4


def test_zeta_relations():
    ctx = cyclotomic_context(3)
    z = ctx.zeta
    assert z**3 == ctx.one
    assert z**2 == -ctx.one - z
    assert ctx.zeta_power(-1) == z**2
    assert ctx.zeta_power(4) == z


def test_inverse_in_cyclotomic_field():
    ctx = cyclotomic_context(5)
    value = ctx.one + ctx.zeta * 2
    assert value * value.inverse() == ctx.one
    assert (ctx.one / value) * value == ctx.one


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        cyclotomic_context(3).zero.inverse()


def test_mixed_fields_raise():
    with pytest.raises(FieldMismatchError):
        cyclotomic_context(3).one + cyclotomic_context(4).one


def test_as_rational_rejects_irrational():
    with pytest.raises(ValueError):
        cyclotomic_context(4).zeta.as_rational()


def test_parse_literals():
    assert parse_scalar("2/3", cyclotomic_context(1)).as_rational() == Fraction(2, 3)
    assert parse_scalar(" -7 ", cyclotomic_context(1)).as_rational() == -7
    # z^2 = -1 in Q(i)
    assert parse_scalar("1 - z^2/3", cyclotomic_context(4)).as_rational() == Fraction(4, 3)
    ctx = cyclotomic_context(3)
    assert parse_scalar("-z^2", ctx) == ctx.one + ctx.zeta
    assert ctx.parse("(1+z)*(1-z)") == ctx.one - ctx.zeta**2


@pytest.mark.parametrize("literal", ["", "1.5", "x", "2**", "z +", "import os", "(1", "1)", "1/0"])
def test_parse_rejects_malformed_literals(literal):
    with pytest.raises(ParseError):
        parse_scalar(literal, cyclotomic_context(3))


def test_str_forms():
    ctx = cyclotomic_context(3)
    assert str(ctx.scalar(Fraction(-2, 3))) == "-2/3"
    assert str(ctx.zeta) == "1*z"
    assert str(ctx.one - ctx.zeta * Fraction(1, 2)) == "1 + (-1/2)*z"
    assert parse_scalar(str(ctx.one - ctx.zeta * Fraction(1, 2)), ctx) == ctx.one - ctx.zeta * Fraction(1, 2)


def test_residue(rationals):
    assert rationals.scalar(Fraction(1, 2)).residue(7, 1) == 4
    with pytest.raises(ZeroDivisionError):
        rationals.scalar(Fraction(1, 7)).residue(7, 1)


def test_residue_maps_zeta_to_root():
    ctx = cyclotomic_context(3)
    # 2 has order 3 modulo 7
    assert ctx.zeta.residue(7, 2) == 2
    assert (ctx.zeta**2).residue(7, 2) == 4


def test_context_rejects_nonpositive_order():
    with pytest.raises(ValueError):
        cyclotomic_context(0)


def test_products_are_reduced_modulo_phi():
    ctx = cyclotomic_context(3)
    assert ctx.from_coefficients([0, 0, 0, 1]) == ctx.one
    assert ctx.from_coefficients([5, 0, 1]).coefficients == (Fraction(4), Fraction(-1))
    assert len((ctx.zeta * ctx.zeta).coefficients) == 2


def _random_element(ctx, rng):
    return ctx.from_coefficients(Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(ctx.degree))


@pytest.mark.parametrize("order", [1, 3, 5, 8])
def test_field_axioms_on_sampled_triples(order):
    ctx = cyclotomic_context(order)
    rng = random.Random(order)
    for _ in range(20):
        a, b, c = (_random_element(ctx, rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + ctx.zero == a
        assert a * ctx.one == a
        assert a - a == ctx.zero
        if not a.is_zero():
            assert a * a.inverse() == ctx.one
            assert (b / a) * a == b


def test_scalars_hash_by_value():
    ctx = cyclotomic_context(4)
    assert len({ctx.zeta**2, -ctx.one, ctx.scalar(-1)}) == 1
    assert ctx.one != cyclotomic_context(3).one
