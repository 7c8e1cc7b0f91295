"""Region partition of Q_p for f with k = 3, transitions between regions,
escape from the repelling annulus and basin-of-attraction membership.

Valuations used throughout: a = v(theta - 1), m = v(q), with a > m >= 1.
The fixed point x1 is known only modulo p**M (M = report.x1_precision), so
every distance to x1 below p**-M is reported as unresolved.
"""

from __future__ import annotations

import enum
import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import AtRepeller, CoverageUnreachable, HypothesisViolated, SingularInput, WrongRegion
from .padic import PadicNumber
from .potts import FixedPointReport, ModelParams, _as_padic, eval_map


class Region(enum.Enum):
    A0 = "A0"
    A1 = "A1"
    A2 = "A2"
    A0_INF = "A0Inf"
    A1_INF1 = "A1Inf1"
    A1_INF2 = "A1Inf2"
    AINF1 = "AInf1"
    AINF2 = "AInf2"
    AINF3 = "AInf3"
    SINGULAR = "Singular"

    @property
    def tag(self) -> str:
        return self.value


REGION_ORDER = tuple(Region)
A_INF = frozenset({Region.AINF1, Region.AINF2, Region.AINF3})


def _check_scope(params: ModelParams, fps: FixedPointReport) -> None:
    params.require_classification_scope(tier=2)
    if fps.params != params:
        raise HypothesisViolated("fixed-point report belongs to different parameters")


def _val(x: PadicNumber):
    return math.inf if x.is_zero else x.valuation


def distance_to_x1(fps: FixedPointReport, x: PadicNumber):
    """(valuation of x - x1, resolved). Unresolved means v(x - x1) >= x1_precision."""
    d = fps.x1_distance_valuation(x)
    if d is None:
        return fps.x1_precision, False
    return d, True


def classify_region(params: ModelParams, fps: FixedPointReport, x) -> Region:
    """The unique region containing ``x`` (decision tree on valuations)."""
    _check_scope(params, fps)
    x = _as_padic(x, params.p)
    a, m = params.theta_val, params.q_val
    d_inf = _val(x - params.x_inf)
    if d_inf == math.inf:
        return Region.SINGULAR
    d0 = _val(x - 1)
    if d0 > m:
        return Region.A0
    if d0 < m:
        return Region.A1
    # |x - 1| = |q| forces |x - x_inf| <= |q|
    if d_inf == m:
        return Region.A0_INF
    if d_inf < a:
        return Region.A2
    if d_inf == a:
        d1, _ = distance_to_x1(fps, x)
        return Region.A1_INF1 if d1 == a else Region.A1_INF2
    if d_inf < a + m:
        return Region.AINF3
    if d_inf == a + m:
        return Region.AINF2
    return Region.AINF1


def region_membership(params: ModelParams, fps: FixedPointReport, x) -> frozenset:
    """Every tag whose defining norm condition holds at ``x``, evaluated independently."""
    _check_scope(params, fps)
    x = _as_padic(x, params.p)
    p = params.p
    nq = params.q_padic.norm()
    nt = (params.theta - 1).norm()
    n0 = (x - 1).norm()
    ninf = (x - params.x_inf).norm()
    d1, resolved = distance_to_x1(fps, x)
    n1 = Fraction(p) ** -d1  # an upper bound when unresolved, still below nt
    tags = set()
    if ninf == 0:
        tags.add(Region.SINGULAR)
    if n0 < nq:
        tags.add(Region.A0)
    if n0 > nq:
        tags.add(Region.A1)
    if ninf == n0 == nq:
        tags.add(Region.A0_INF)
    if nt < ninf < nq:
        tags.add(Region.A2)
    if n1 == ninf == nt:
        tags.add(Region.A1_INF1)
    if n1 < ninf == nt:
        tags.add(Region.A1_INF2)
    if 0 < ninf < nq * nt:
        tags.add(Region.AINF1)
    if ninf == nq * nt:
        tags.add(Region.AINF2)
    if nq * nt < ninf < nt:
        tags.add(Region.AINF3)
    return frozenset(tags)


def empty_regions(params: ModelParams) -> frozenset:
    """Regions with no points for these parameters (valuations are integers)."""
    a, m = params.theta_val, params.q_val
    empty = set()
    if a - m < 2:
        empty.add(Region.A2)
    if m < 2:
        empty.add(Region.AINF3)
    return frozenset(empty)


# -- transitions -------------------------------------------------------------------


@dataclass(frozen=True)
class Transition:
    source: Region
    target: Region
    claim: str
    satisfied: bool
    detail: str = ""


_TO_A0 = frozenset({Region.A0, Region.A1, Region.A2, Region.A0_INF})


def check_transition(params: ModelParams, fps: FixedPointReport, x) -> Transition:
    """Classify x and f(x) and test the inclusion claimed for x's region."""
    x = _as_padic(x, params.p)
    src = classify_region(params, fps, x)
    if src is Region.SINGULAR:
        raise SingularInput("x is the pole x_inf")
    fx = eval_map(params, x)
    dst = classify_region(params, fps, fx)
    if src in _TO_A0:
        ok = dst is Region.A0
        detail = ""
        if ok and src is Region.A0:
            bound = params.contraction_ratio * (x - 1).norm()
            ok = (fx - 1).norm() <= bound
            detail = "A0 contraction"
        return Transition(src, dst, "to A0", ok, detail)
    if src in A_INF:
        ok = dst is Region.A1
        detail = ""
        if src is Region.AINF2:
            ok = ok and (fx - 1).norm() == 1
            detail = "|f(x) - 1| = 1"
        return Transition(src, dst, "to A1", ok, detail)
    if src is Region.A1_INF1:
        return Transition(src, dst, "to A0Inf", dst is Region.A0_INF)
    return Transition(src, dst, "none", True)


@dataclass(frozen=True)
class ScalingCheck:
    lhs: Fraction
    rhs: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def pairwise_scaling(params: ModelParams, fps: FixedPointReport, x_bar, x_bbar) -> ScalingCheck:
    """|f(x') - f(x'')| against (|q|/|theta - 1|) |x' - x''| for x', x'' in A1Inf2."""
    x_bar = _as_padic(x_bar, params.p)
    x_bbar = _as_padic(x_bbar, params.p)
    for pt in (x_bar, x_bbar):
        if classify_region(params, fps, pt) is not Region.A1_INF2:
            raise WrongRegion(f"{pt} is not in A1Inf2")
    lhs = (eval_map(params, x_bar) - eval_map(params, x_bbar)).norm()
    rhs = (x_bar - x_bbar).norm() / params.contraction_ratio
    return ScalingCheck(lhs, rhs)


def _resolved_distance(params: ModelParams, fps: FixedPointReport, x: PadicNumber) -> int:
    if x == fps.x1:
        raise AtRepeller("x is the fixed point x1")
    d1, resolved = distance_to_x1(fps, x)
    if not resolved:
        raise HypothesisViolated(
            f"x agrees with x1 modulo p^{fps.x1_precision}; rerun with higher precision"
        )
    return d1


def predict_escape_time(params: ModelParams, fps: FixedPointReport, x) -> int:
    """Steps needed to leave A1Inf2: the least n0 with (|q|/|theta-1|)^n0 |x - x1| >= |theta - 1|."""
    x = _as_padic(x, params.p)
    j = _resolved_distance(params, fps, x)
    if classify_region(params, fps, x) is not Region.A1_INF2:
        raise WrongRegion(f"{x} is not in A1Inf2")
    a, m = params.theta_val, params.q_val
    return -((a - j) // (a - m))


def observed_escape_time(params: ModelParams, fps: FixedPointReport, x, budget: int = 500) -> int:
    x = _as_padic(x, params.p)
    _resolved_distance(params, fps, x)
    if classify_region(params, fps, x) is not Region.A1_INF2:
        raise WrongRegion(f"{x} is not in A1Inf2")
    for n in range(1, budget + 1):
        x = eval_map(params, x)
        if classify_region(params, fps, x) is not Region.A1_INF2:
            return n
    raise HypothesisViolated(f"no escape from A1Inf2 within {budget} steps")


# -- basin membership --------------------------------------------------------------


class BasinStatus(enum.Enum):
    IN_BASIN = "InBasin"
    EVENTUALLY_SINGULAR = "EventuallySingular"
    REPELLER = "Repeller"
    UNKNOWN_AT_PRECISION = "UnknownAtPrecision"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass(frozen=True)
class BasinVerdict:
    status: BasinStatus
    steps: int | None
    path: tuple
    bound: int | None

    @property
    def within_bound(self) -> bool:
        return self.bound is None or self.steps is None or self.steps <= self.bound


def step_bound(params: ModelParams, fps: FixedPointReport, x: PadicNumber, region: Region) -> int | None:
    """Steps into A0 promised by the transition and escape results."""
    if region is Region.A0:
        return 0
    if region in _TO_A0:
        return 1
    if region in A_INF or region is Region.A1_INF1:
        return 2
    if region is Region.A1_INF2:
        try:
            return predict_escape_time(params, fps, x) + 2
        except (AtRepeller, HypothesisViolated):
            return None
    return None


def basin_membership(params: ModelParams, fps: FixedPointReport, x, budget: int = 500) -> BasinVerdict:
    """Follow the orbit of x until it enters A0, hits x_inf, or sits on x1."""
    x = _as_padic(x, params.p)
    path = []
    bound = None
    for step in range(budget + 1):
        region = classify_region(params, fps, x)
        path.append(region)
        if step == 0:
            bound = step_bound(params, fps, x, region)
        if region is Region.SINGULAR:
            return BasinVerdict(BasinStatus.EVENTUALLY_SINGULAR, step, tuple(path), bound)
        if region is Region.A0:
            return BasinVerdict(BasinStatus.IN_BASIN, step, tuple(path), bound)
        if fps.x1_distance_valuation(x) is None:
            status = BasinStatus.REPELLER if x == fps.x1 else BasinStatus.UNKNOWN_AT_PRECISION
            return BasinVerdict(status, None, tuple(path), bound)
        if step < budget:
            x = eval_map(params, x)
    return BasinVerdict(BasinStatus.BUDGET_EXCEEDED, None, tuple(path), bound)


def contraction_after_entry(params: ModelParams, x, steps: int = 2) -> bool:
    """From a point of A0, check |f(y) - 1| <= (|theta-1|/|q|) |y - 1| for ``steps`` iterates.

    Rational heights triple with every application of f, so only a few steps
    are affordable in exact arithmetic.
    """
    y = _as_padic(x, params.p)
    ratio = params.contraction_ratio
    for _ in range(steps):
        if y == 1:
            return True
        fy = eval_map(params, y)
        if (fy - 1).norm() > ratio * (y - 1).norm():
            return False
        y = fy
    return True


# -- test-point generation ---------------------------------------------------------


@dataclass(frozen=True)
class BallSpec:
    """Points a * p**-j with a drawn modulo p**(n + j), plus targeted top-ups.

    Targeted points are center + p**d * u for a small random unit u, with
    center 1, x_inf or x1 and d chosen inside the region's valuation window.
    """

    j: int = 1
    n: int = 8
    count: int = 1000
    min_per_region: int = 10
    seed: int = 0
    require_all: bool = True


def _unit(rng: random.Random, p: int, digits: int = 2) -> int:
    while True:
        u = rng.randrange(1, p**digits)
        if u % p:
            return u


def _targeted_point(params: ModelParams, fps: FixedPointReport, region: Region, rng: random.Random,
                    spec: BallSpec) -> PadicNumber:
    p = int(params.p)
    a, m = params.theta_val, params.q_val
    M = fps.x1_precision
    one = PadicNumber(1, p)

    def near(center, lo, hi):
        d = rng.randint(lo, hi)
        return center + PadicNumber(Fraction(p) ** d * _unit(rng, p), p)

    x_inf, x1 = params.x_inf, fps.x1
    if region is Region.A0:
        return near(one, m + 1, max(m + 1, spec.n))
    if region is Region.A1:
        return near(one, -spec.j, m - 1)
    if region is Region.A0_INF:
        # x - 1 = p^m s with s chosen so x - x_inf keeps valuation m
        while True:
            x = near(one, m, m)
            if (x - x_inf).valuation == m:
                return x
    if region is Region.A2:
        return near(x_inf, m + 1, a - 1)
    if region is Region.A1_INF1:
        while True:
            x = near(x_inf, a, a)
            if fps.x1_distance_valuation(x) == a:
                return x
    if region is Region.A1_INF2:
        return near(x1, a + 1, M - 1)
    if region is Region.AINF3:
        return near(x_inf, a + 1, a + m - 1)
    if region is Region.AINF2:
        return near(x_inf, a + m, a + m)
    if region is Region.AINF1:
        return near(x_inf, a + m + 1, a + m + 1 + max(1, spec.n - a - m))
    return x_inf


def enumerate_ball_representatives(params: ModelParams, fps: FixedPointReport, spec: BallSpec):
    """Yield ``spec.count`` uniform points, then top up under-covered regions.

    Singular holds the single point x_inf and is covered once. Raises
    CoverageUnreachable before yielding when a required region is empty.
    """
    _check_scope(params, fps)
    empty = empty_regions(params)
    if spec.require_all and empty:
        first = min(empty, key=REGION_ORDER.index)
        raise CoverageUnreachable(
            f"region {first.tag} is empty for v(theta - 1) = {params.theta_val}, v(q) = {params.q_val}",
            tag=first.tag,
        )
    rng = random.Random(spec.seed)
    p = int(params.p)
    modulus = p ** (spec.n + spec.j)
    scale = Fraction(1, p**spec.j)
    counts = Counter()
    for _ in range(spec.count):
        x = PadicNumber(rng.randrange(modulus) * scale, p)
        counts[classify_region(params, fps, x)] += 1
        yield x
    for region in REGION_ORDER:
        if region in empty:
            continue
        need = 1 if region is Region.SINGULAR else spec.min_per_region
        attempts = 0
        while counts[region] < need:
            x = _targeted_point(params, fps, region, rng, spec)
            got = classify_region(params, fps, x)
            attempts += 1
            if got is region:
                counts[region] += 1
                yield x
            elif attempts > 1000 * need:
                raise CoverageUnreachable(f"could not generate points of {region.tag}", tag=region.tag)


# -- census ------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusRecord:
    point: PadicNumber
    region_from: Region
    region_to: Region | None
    steps_to_A0: int | None
    status: BasinStatus
    transition_ok: bool


def census_point(params: ModelParams, fps: FixedPointReport, x, budget: int = 500) -> CensusRecord:
    x = _as_padic(x, params.p)
    verdict = basin_membership(params, fps, x, budget)
    src = verdict.path[0]
    if src is Region.SINGULAR:
        return CensusRecord(x, src, None, None, verdict.status, True)
    tr = check_transition(params, fps, x)
    steps = verdict.steps if verdict.status is BasinStatus.IN_BASIN else None
    return CensusRecord(x, src, tr.target, steps, verdict.status, tr.satisfied)


def transition_matrix(records) -> list:
    """10 x 10 counts indexed by REGION_ORDER (rows: from, columns: to)."""
    idx = {r: i for i, r in enumerate(REGION_ORDER)}
    mat = [[0] * len(REGION_ORDER) for _ in REGION_ORDER]
    for rec in records:
        if rec.region_to is not None:
            mat[idx[rec.region_from]][idx[rec.region_to]] += 1
    return mat
