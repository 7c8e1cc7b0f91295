from fractions import Fraction

import pytest

from padic_dynamics import Domain, PadicNumber, digits, norm, parse_literal, valuation
from padic_dynamics.errors import DivisionByZero, LiteralSyntaxError, NotPrime, PrimeMismatch
from padic_dynamics.padic import Prime, format_padic, format_rational, rational_reconstruction, truncate


def P(x, p=5):
    return PadicNumber(x, p)


@pytest.mark.parametrize("x,v", [(75, 2), (Fraction(4, 29), 0), (Fraction(3, 25), -2), (-10, 1)])
def test_valuation(x, v):
    assert valuation(P(x)) == v


def test_zero():
    z = P(0)
    assert z.is_zero
    assert valuation(z) == float("inf")
    assert norm(z) == 0
    assert (P(1) - P(1)).is_zero


@pytest.mark.parametrize("x,n", [(5, Fraction(1, 5)), (Fraction(-24325, 24389), Fraction(1, 25)), (1, 1)])
def test_norm(x, n):
    assert norm(P(x)) == n


def test_arithmetic_is_exact():
    x = P(5) + P(Fraction(1, 5))
    assert x.valuation == -1
    assert x.unit_num == 26
    assert P(Fraction(4, 29)) ** 3 == P(Fraction(64, 24389))
    assert (P(Fraction(4, 29)) ** 3).valuation == 0


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        P(1) / P(0)


def test_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        P(1, 5) + P(1, 7)


def test_not_prime():
    with pytest.raises(NotPrime):
        Prime(9)
    assert Prime(11).residue_class_mod_3 == 2


def test_digits():
    assert digits(P(7), 2).digits == (2, 1)
    assert digits(P(Fraction(1, 2)), 3).digits == (3, 2, 2)
    d = digits(P(5), 3)
    assert d.valuation == 1 and d.digits[0] == 1


def test_truncate_and_agreement():
    x = P(Fraction(1, 2))
    t = truncate(x, 4)
    assert t.agrees_with(x)
    assert (t.value() * 2 - 1).valuation >= 4


@pytest.mark.parametrize("x,dom", [(26, Domain.UNIT_SPHERE), (5, Domain.MAXIMAL_IDEAL),
                                   (Fraction(1, 5), Domain.OUTSIDE_INTEGERS)])
def test_domain(x, dom):
    assert P(x).domain() == dom


@pytest.mark.parametrize("text,value", [("26/1", 26), ("-3/4", Fraction(-3, 4)), ("1+p^2", 26),
                                        ("2-26-5", -29), ("3+4*p", 23)])
def test_parse_literal(text, value):
    assert parse_literal(text, 5) == P(value)


@pytest.mark.parametrize("bad", ["", "import os", "1/0", "x+1", "p^(1/2)", "__import__('os')"])
def test_parse_literal_rejects(bad):
    with pytest.raises((LiteralSyntaxError, DivisionByZero)):
        parse_literal(bad, 5)


def test_formatting_round_trip():
    x = P(Fraction(64, 24389))
    assert format_rational(x) == "64/24389"
    lit = format_padic(x, 6)
    assert (parse_literal(lit, 5) - x).valuation >= 6


def test_rational_reconstruction():
    assert rational_reconstruction(pow(3, -1, 5**10) * 2 % 5**10, 5**10) == Fraction(2, 3)
