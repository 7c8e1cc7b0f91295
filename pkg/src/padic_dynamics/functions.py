"""p-adic exponential and logarithm, the set E_p, and theta = exp_p(J)."""

from __future__ import annotations

import enum
from fractions import Fraction

from gmpy2 import mpq

from .errors import OutsideConvergenceDomain
from .padic import DEFAULT_PRECISION, DigitExpansion, PadicNumber, truncate


class ConvergenceDomain(enum.Enum):
    EXP = "B(0, p^(-1/(p-1)))"
    LOG = "B(1, 1)"

    def contains(self, x: PadicNumber) -> bool:
        if self is ConvergenceDomain.EXP:
            return in_exp_domain(x)
        return in_log_domain(x)


def digit_sum(n: int, p: int) -> int:
    total = 0
    while n:
        n, d = divmod(n, p)
        total += d
    return total


def factorial_valuation(n: int, p: int) -> int:
    """v_p(n!) via Legendre's digit-sum formula."""
    return (n - digit_sum(n, p)) // (p - 1)


def in_exp_domain(x: PadicNumber) -> bool:
    # |x| < p^(-1/(p-1))  <=>  v(x) * (p - 1) > 1
    return x.is_zero or x.valuation * (x.p - 1) > 1


def in_log_domain(x: PadicNumber) -> bool:
    d = x - 1
    return d.is_zero or d.valuation > 0


def in_Ep(x: PadicNumber) -> bool:
    """Membership in E_p = {|x - 1|_p < p^(-1/(p-1))}."""
    return in_exp_domain(x - 1)


def exp_series(x: PadicNumber, n: int = DEFAULT_PRECISION) -> PadicNumber:
    """Exact partial sum of exp_p(x) that agrees with the limit mod p**n."""
    if not in_exp_domain(x):
        raise OutsideConvergenceDomain(f"exp_p diverges at {x} (valuation {x.valuation})")
    p = x.p
    if x.is_zero:
        return PadicNumber(1, p)
    v = x.valuation
    base = x._value
    total = mpq(1)
    term = mpq(1)
    k = 1
    # v(term_k) >= k*v - (k-1)/(p-1), increasing in k once x is in the domain.
    while k * v * (p - 1) - (k - 1) < n * (p - 1):
        term = term * base / k
        total += term
        k += 1
    return PadicNumber._raw(total, p)


def exp_p(x: PadicNumber, n: int = DEFAULT_PRECISION) -> DigitExpansion:
    """exp_p(x) modulo p**n as a digit expansion."""
    return truncate(exp_series(x, n), n)


def _floor_log(k: int, p: int) -> int:
    e = 0
    while k >= p:
        k //= p
        e += 1
    return e


def log_series(x: PadicNumber, n: int = DEFAULT_PRECISION) -> PadicNumber:
    """Exact partial sum of log_p(x) that agrees with the limit mod p**n."""
    if not in_log_domain(x):
        raise OutsideConvergenceDomain(f"log_p diverges at {x}: |x - 1|_p >= 1")
    p = x.p
    t = x - 1
    if t.is_zero:
        return PadicNumber(0, p)
    v = t.valuation
    base = t._value
    total = mpq(0)
    power = mpq(1)
    k = 1
    # v(t^k / k) >= k*v - floor(log_p k), nondecreasing in k.
    while k * v - _floor_log(k, p) < n:
        power *= base
        if k % 2:
            total += power / k
        else:
            total -= power / k
        k += 1
    return PadicNumber._raw(total, p)


def log_p(x: PadicNumber, n: int = DEFAULT_PRECISION) -> DigitExpansion:
    """log_p(x) modulo p**n as a digit expansion."""
    return truncate(log_series(x, n), n)


def theta_from_J(J: PadicNumber, n: int = DEFAULT_PRECISION) -> PadicNumber:
    """theta = exp_p(J) reduced to an integer representative mod p**n."""
    return exp_p(J, n).value()


def reduce_mod(x: PadicNumber, n: int) -> PadicNumber:
    """Canonical representative of x modulo p**n (digits below p**n kept)."""
    return truncate(x, n).value()


def log_norm(x: PadicNumber) -> Fraction:
    return (x - 1).norm()
