from fractions import Fraction

import pytest

from padic_dynamics import PadicNumber, exp_p, in_Ep, log_p, theta_from_J
from padic_dynamics.errors import OutsideConvergenceDomain
from padic_dynamics.functions import exp_series, factorial_valuation, log_series


def P(x, p=5):
    return PadicNumber(x, p)


def test_exp_basics():
    assert exp_series(P(0), 8) == P(1)
    e = exp_series(P(5), 10)
    assert (e - 1).norm() == Fraction(1, 5)
    assert e.residue(2) == 6


def test_log_basics():
    assert log_series(P(1), 8).is_zero
    assert log_series(P(6), 10).norm() == Fraction(1, 5)
    e = exp_p(P(5), 12).value()
    assert log_p(e, 12).value().residue(3) == 5


def test_domains():
    with pytest.raises(OutsideConvergenceDomain):
        exp_series(P(1), 8)
    with pytest.raises(OutsideConvergenceDomain):
        log_series(P(2), 8)
    assert in_Ep(P(26)) and in_Ep(P(1)) and not in_Ep(P(2))


def test_theta_from_J():
    assert theta_from_J(P(0), 6) == P(1)
    th = theta_from_J(P(25), 3)
    assert (th - 1).norm() == Fraction(1, 25)
    assert th.residue(3) == 26


def test_factorial_valuation():
    assert factorial_valuation(25, 5) == 6
