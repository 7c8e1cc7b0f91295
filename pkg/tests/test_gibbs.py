from types import SimpleNamespace

import pytest

from padic_dynamics import (Case, ModelParams, PadicNumber, Partition, case_cubic, consistency_residual,
                            enumerate_tipgm, recursion_step, roots_mod_pk, solve_E3, tipgm_to_boundary_field)
from padic_dynamics.errors import GuardViolated, HypothesisViolated
from padic_dynamics.functions import in_Ep, log_series
from padic_dynamics.gibbs import (d_parameterisations_agree, e3_cubic, e3_factorisation_holds, partitions_for,
                                  recursion_check, verify_vector)


def test_case_b_cubic(p5):
    f = case_cubic(Case.B, p5)
    want = [1, 12 - 625 * 28, 48 - 625 * 37, 64]
    assert [int(c.rational) for c in f.coefficients] == want


def test_case_c_degenerates_to_b(p5):
    # m1 = 0 is not a valid Partition, but the case C formula only reads the block sizes
    degenerate = SimpleNamespace(m1=0, m2=p5.q - 1)
    assert case_cubic(Case.C, p5, degenerate).coefficients == case_cubic(Case.B, p5).coefficients


def test_guard():
    # theta - 1 + 3 m1 = 0 for theta = -14, m1 = 5; theta stays in E_5
    pr = ModelParams(5, 11, PadicNumber(-14, 5), 3)
    with pytest.raises(GuardViolated):
        case_cubic(Case.D1, pr, Partition(5, 5))


def test_partitions():
    assert partitions_for(Case.C, 5) == [Partition(1, 3), Partition(2, 2), Partition(3, 1)]
    assert partitions_for(Case.D1, 5) == [Partition(1, 3), Partition(2, 2)]
    assert all(p.total == 4 for p in partitions_for(Case.E1, 5))
    with pytest.raises(HypothesisViolated):
        Partition(0, 4)


def test_catalogue_anchor(p5):
    cat = enumerate_tipgm(p5, 12)
    assert cat.by_case("A")
    assert cat.by_case("A")[0].z == (PadicNumber(1, 5),) * 4
    b = cat.by_case("B")
    f = case_cubic(Case.B, p5)
    # the residue 1 is a multiple root mod 5, so the scan over-counts; lifted roots must sit inside it
    scan = {r for r in roots_mod_pk(f, 3) if r % 5 == 1}
    assert b and {v.z[0].residue(3) for v in b} <= scan
    for v in b:
        assert f(v.z[0]).valuation >= 10
    for v in cat.vectors:
        assert all(in_Ep(z) for z in v.z)
        chk = verify_vector(p5, v, 12)
        assert chk.passed, v


def test_residuals(p5):
    assert consistency_residual(p5, [1] * 4).valuations == (float("inf"),) * 4
    assert min(consistency_residual(p5, [2] * 4).valuations) < 4


def test_recursion(p5):
    zero = [PadicNumber(0, 5)] * 4
    assert all(h.is_zero for h in recursion_step(p5, zero, 10))
    assert recursion_check(p5, [1] * 4, 10).passed


def test_boundary_field(p5):
    cat = enumerate_tipgm(p5, 12, cases=["A", "B"])
    a = cat.by_case("A")[0]
    assert all(h.is_zero for h in tipgm_to_boundary_field(a, 1, 12))
    b = cat.by_case("B")[0]
    h = tipgm_to_boundary_field(b, 1, 12)
    want = log_series(b.z[0], 14)
    assert (h[0] - want).valuation >= 12
    assert h[-1].is_zero


def test_d_parameterisations():
    pr = ModelParams(5, 5, PadicNumber(26, 5), 3)
    assert d_parameterisations_agree(pr, Partition(1, 3), n=8) in (True, None)


def test_e3():
    assert e3_factorisation_holds()
    f = e3_cubic(5, PadicNumber(1, 5))
    assert [int(c.rational) for c in f.coefficients] == [8, -15, 6, 1]
    q = 6
    roots = solve_E3(11, q, PadicNumber(1 - q, 11), 1, 8)
    assert any(r.value() == PadicNumber(1, 11) for r in roots)
    with pytest.raises(HypothesisViolated):
        solve_E3(11, q, 26, 1, 8)
