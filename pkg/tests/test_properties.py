import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from padic_dynamics import PadicNumber, Polynomial, digits, hensel_lift, parse_literal
from padic_dynamics.basin import region_membership, classify_region
from padic_dynamics.functions import exp_series, log_series
from padic_dynamics.padic import format_padic
from padic_dynamics.potts import find_fixed_points, sample_params

PRIMES = st.sampled_from([5, 11, 17])
nonzero = st.fractions(max_denominator=10**6).filter(lambda f: f != 0)


@given(nonzero, nonzero, PRIMES)
def test_ultrametric(a, b, p):
    x, y = PadicNumber(a, p), PadicNumber(b, p)
    s = x + y
    if not s.is_zero:
        assert s.norm() <= max(x.norm(), y.norm())
        if x.norm() != y.norm():
            assert s.norm() == max(x.norm(), y.norm())
    assert (x * y).norm() == x.norm() * y.norm()


@given(nonzero, PRIMES, st.integers(1, 20))
def test_digits_round_trip(a, p, n):
    x = PadicNumber(a, p)
    d = digits(x, n)
    assert d.valuation == x.valuation and len(d.digits) == n
    assert all(0 <= c < p for c in d.digits)
    assert d.agrees_with(x)
    assert (parse_literal(format_padic(x, n), p) - x).valuation >= x.valuation + n


@given(st.integers(1, 10**6), st.integers(1, 3), PRIMES)
@settings(max_examples=50)
def test_exp_log_inverse(u, v, p):
    if u % p == 0:
        u += 1
    x = PadicNumber(u * p**v, p)
    n = 12
    e = exp_series(x, n)
    assert (e - 1).norm() == x.norm()
    assert (log_series(e, n) - x).valuation >= n


@given(st.integers(0, 10**9), PRIMES)
@settings(max_examples=40)
def test_hensel_square_roots(seed, p):
    rng = random.Random(seed)
    r = rng.randrange(1, p)
    d = r * r + p * rng.randrange(p**4)
    cert = hensel_lift(Polynomial([-d, 0, 1], p), r, 8)
    assert (cert.value() ** 2 - d).valuation >= 8


@given(st.integers(0, 10**9), st.sampled_from([5, 11]))
@settings(max_examples=25, deadline=None)
def test_partition_identity(seed, p):
    rng = random.Random(seed)
    pr = sample_params(rng, p, tier=2)
    fps = find_fixed_points(pr, 8)
    for _ in range(20):
        x = PadicNumber(Fraction(rng.randrange(p**6), p), p)
        if x == pr.x_inf:
            continue
        assert region_membership(pr, fps, x) == {classify_region(pr, fps, x)}
