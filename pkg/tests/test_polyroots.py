from fractions import Fraction

import pytest

from padic_dynamics import (PadicNumber, Polynomial, cubic_roots_Qp, hensel_lift, legendre_symbol,
                            newton_polygon, roots_mod_pk, roots_Qp, sqrt_exists)
from padic_dynamics.errors import NotARootModP

WRTY = [-900, 1590, -703, 1]


@pytest.mark.parametrize("a,p,s", [(-3, 5, -1), (1, 5, 1), (-3, 7, 1)])
def test_legendre(a, p, s):
    assert legendre_symbol(a, p) == s


def test_sqrt():
    r = sqrt_exists(PadicNumber(6, 5), n=4)
    assert r.exists and r.root.residue(2) in (16, 9)
    assert sqrt_exists(PadicNumber(25, 5), n=4).exists
    for u in (1, 2, 7):
        assert not sqrt_exists(PadicNumber(-3 * u * u, 5), n=4).exists
        assert not sqrt_exists(PadicNumber(-3 * u * u, 11), n=4).exists


def test_hensel():
    assert hensel_lift(Polynomial([-6, 0, 1], 5), 1, 2).residue(2) == 16
    assert hensel_lift(Polynomial([-3, 1], 5), 3, 4).value() == PadicNumber(3, 5)
    assert hensel_lift(Polynomial(WRTY, 5), 3, 2).residue(2) == 23
    with pytest.raises(NotARootModP):
        hensel_lift(Polynomial([-6, 0, 1], 5), 2, 2)


def test_roots_mod_pk():
    assert roots_mod_pk(Polynomial([-6, 0, 1], 5), 2) == {16, 9}
    assert roots_mod_pk(Polynomial([-3, 1], 5), 1) == {3}
    # y^3 - 703y^2 + 1590y - 900 = y^2 (y + 2) mod 5; the double residue 0 never lifts
    assert roots_mod_pk(Polynomial(WRTY, 5), 1) == {0, 3}
    assert {r for r in roots_mod_pk(Polynomial(WRTY, 5), 2) if r % 5 == 3} == {23}
    (r3,) = roots_mod_pk(Polynomial(WRTY, 5), 3)
    assert r3 % 25 == 23


def test_newton_polygon():
    segs = newton_polygon(Polynomial([25, 5, 1, 1], 5))
    vals = sorted(v for s in segs for v in [s.root_valuation] * s.length)
    assert vals == [0, 1, 1]
    (seg,) = newton_polygon(Polynomial([-5, 1], 5))
    assert seg.root_valuation == 1
    assert all(s.root_valuation >= 0 for s in newton_polygon(Polynomial(WRTY, 5)))


def test_cubic_roots():
    (r,) = cubic_roots_Qp(Polynomial(WRTY, 5), 6)
    assert r.residue(2) == 23
    rs = cubic_roots_Qp(Polynomial.from_roots([1, 2, 3], 5), 6)
    assert sorted(r.residue(1) for r in rs) == [1, 2, 3]
    (c,) = cubic_roots_Qp(Polynomial([-2, 0, 0, 1], 5), 6)
    assert c.initial_residue == 3
    assert (c.value() ** 3 - 2).valuation >= 6


def test_repeated_roots():
    # (z - 1)^2 (z + 8): double root with p | 9 for p = 3 is out of scope; use p = 5
    rs = roots_Qp(Polynomial.from_roots([1, 1, -8], 5), 8)
    vals = {r.value().rational for r in rs}
    assert vals == {Fraction(1), Fraction(-8)}


def test_non_integral_roots():
    rs = roots_Qp(Polynomial.from_roots([Fraction(1, 5), 25], 5), 6)
    assert sorted(r.value().valuation for r in rs) == [-1, 2]
