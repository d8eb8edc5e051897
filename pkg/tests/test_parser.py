import pytest
from gmpy2 import mpq
from hypothesis import given

from lfed.parser import (
    MAX_EXPONENT,
    ExponentOverflowError,
    PolynomialSyntaxError,
    UnknownVariableError,
    parse_polynomial,
    parse_scalar,
)
from lfed.polyring import PolyRing
from lfed.scalar import field

from conftest import polynomials

R3 = PolyRing(3)
R2z = PolyRing(2, field(3))
R3z5 = PolyRing(3, field(5))


def test_two_term_example():
    p = parse_polynomial("x1^2 - 3/2*x2*x3", 3)
    x1, x2, x3 = R3.gens()
    assert p == x1 ** 2 - (x2 * x3).scalar_mul(field(1).rational(3, 2))
    assert len(p.terms) == 2


def test_zeta_example():
    p = parse_polynomial("z*x1 + x2", 2, 3)
    x1, x2 = R2z.gens()
    assert p == x1.scalar_mul(field(3).z) + x2


@pytest.mark.parametrize("src", ["x1 + + x2", "x1 +", "(x1", "x1 x2", "x1^", "2/0", "x1 * * x2", "", "x1^-1", "3 $ x1"])
def test_syntax_errors(src):
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial(src, R3)


def test_error_position():
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial("x1 +\n  + x2", R3)
    assert (info.value.line, info.value.column) == (2, 3)
    with pytest.raises(UnknownVariableError) as info:
        parse_polynomial("x1 + x4", R3)
    assert info.value.column == 6
    with pytest.raises(ExponentOverflowError):
        parse_polynomial(f"x1^{MAX_EXPONENT + 1}", R3)


def test_leading_sign_and_parentheses():
    x1, x2, _ = R3.gens()
    assert parse_polynomial("-x1 + x2", R3) == x2 - x1
    assert parse_polynomial("(x1 - x2)^2", R3) == x1 ** 2 - x1 * x2 * 2 + x2 ** 2
    assert parse_polynomial("2*(-(x1))", R3) == x1 * (-2)


def test_zeta_powers():
    K = field(5)
    assert parse_scalar("z^5", R3z5) == K.one
    assert parse_scalar("z^-1", R3z5) == K.z.inverse()
    assert parse_scalar("1/2z^2", R3z5) == K.rational(1, 2) * K.z ** 2
    with pytest.raises(PolynomialSyntaxError):
        parse_scalar("x1", R3z5)
    assert parse_scalar("3/4", R3).coords == (mpq(3, 4),)


@given(polynomials(R3))
def test_round_trip_rational(p):
    printed = str(p)
    again = parse_polynomial(printed, R3)
    assert again == p and str(again) == printed


@given(polynomials(R3z5, max_terms=3))
def test_round_trip_cyclotomic(p):
    printed = str(p)
    assert str(parse_polynomial(printed, R3z5)) == printed
