from fractions import Fraction

import pytest

from padic_dynamics import (BallSpec, ModelParams, PadicNumber, Region, basin_membership, check_transition,
                            classify_region, enumerate_ball_representatives, find_fixed_points, pairwise_scaling,
                            predict_escape_time)
from padic_dynamics.basin import (REGION_ORDER, BasinStatus, empty_regions, observed_escape_time,
                                  region_membership)
from padic_dynamics.errors import AtRepeller, CoverageUnreachable, SingularInput

P = lambda x: PadicNumber(x, 5)  # noqa: E731


def test_anchor_regions(p5, p5_fps):
    assert classify_region(p5, p5_fps, 0) is Region.A1
    assert classify_region(p5, p5_fps, 26) is Region.A0
    assert classify_region(p5, p5_fps, p5_fps.x1 + P(125)) is Region.A1_INF2
    assert classify_region(p5, p5_fps, p5.x_inf) is Region.SINGULAR
    # |x - x_inf| = |q||theta - 1| = 5^-3 is AInf2; one digit deeper is AInf1
    assert classify_region(p5, p5_fps, p5.x_inf + P(125)) is Region.AINF2
    assert classify_region(p5, p5_fps, p5.x_inf + P(625)) is Region.AINF1


def test_membership_agrees(p5, p5_fps):
    for x in (0, 26, Fraction(1, 5), -29 + 5, -29 + 25):
        assert region_membership(p5, p5_fps, x) == {classify_region(p5, p5_fps, x)}


def test_transitions(p5, p5_fps):
    t = check_transition(p5, p5_fps, 0)
    assert t.target is Region.A0 and t.satisfied
    x = p5.x_inf + P(125)
    t = check_transition(p5, p5_fps, x)
    assert t.source is Region.AINF2 and t.target is Region.A1 and t.satisfied
    with pytest.raises(SingularInput):
        check_transition(p5, p5_fps, p5.x_inf)


def test_scaling(p5, p5_fps):
    x1 = p5_fps.x1
    chk = pairwise_scaling(p5, p5_fps, x1 + P(125), x1 + P(250))
    assert chk.equal and chk.lhs == Fraction(1, 25)
    assert pairwise_scaling(p5, p5_fps, x1 + P(125), x1 + P(125)).lhs == 0
    chk = pairwise_scaling(p5, p5_fps, x1 + P(125), x1 + P(125 + 625))
    assert chk.equal and chk.lhs == Fraction(1, 125)


def test_escape_time(p5, p5_fps):
    x1 = p5_fps.x1
    assert predict_escape_time(p5, p5_fps, x1 + P(125)) == 1
    assert predict_escape_time(p5, p5_fps, x1 + P(625)) == 2
    for d in (3, 4, 5, 6):
        x = x1 + P(5**d * 2)
        assert predict_escape_time(p5, p5_fps, x) == observed_escape_time(p5, p5_fps, x)
    with pytest.raises(AtRepeller):
        predict_escape_time(p5, p5_fps, x1)


def test_basin(p5, p5_fps):
    v = basin_membership(p5, p5_fps, 0)
    assert v.status is BasinStatus.IN_BASIN and v.steps == 1
    v = basin_membership(p5, p5_fps, p5.x_inf)
    assert v.status is BasinStatus.EVENTUALLY_SINGULAR and v.steps == 0
    v = basin_membership(p5, p5_fps, p5_fps.x1 + P(125))
    assert v.status is BasinStatus.IN_BASIN and v.steps <= 3 and v.within_bound
    assert basin_membership(p5, p5_fps, p5_fps.x1).status is BasinStatus.REPELLER
    near = p5_fps.x1 + P(5**20)
    assert basin_membership(p5, p5_fps, near).status is BasinStatus.UNKNOWN_AT_PRECISION


def test_empty_regions(p5):
    # a - m = 1 and m = 1: A2 and AInf3 cannot be populated
    assert empty_regions(p5) == {Region.A2, Region.AINF3}


def test_enumeration_window(p5, p5_fps):
    spec = BallSpec(j=1, n=4, count=200, seed=1, require_all=False)
    pts = list(enumerate_ball_representatives(p5, p5_fps, spec))
    assert any(x.valuation == -1 and classify_region(p5, p5_fps, x) is Region.A1 for x in pts if not x.is_zero)
    with pytest.raises(CoverageUnreachable):
        list(enumerate_ball_representatives(p5, p5_fps, BallSpec(j=1, n=4, count=10)))


def test_full_coverage():
    pr = ModelParams(5, 25, PadicNumber(1 + 5**4 * 2, 5), 3)
    fps = find_fixed_points(pr, 8)
    spec = BallSpec(j=1, n=8, count=300, seed=2)
    seen = {}
    for x in enumerate_ball_representatives(pr, fps, spec):
        r = classify_region(pr, fps, x)
        seen[r] = seen.get(r, 0) + 1
    assert set(seen) == set(REGION_ORDER)
    assert all(c >= 10 for r, c in seen.items() if r is not Region.SINGULAR)
