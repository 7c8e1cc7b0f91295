"""Property suites over sampled parameters and points.

Each suite fills a ``Tally`` with pass/fail counts per named check and a
short list of counterexamples. Parameter sets are drawn up front from a
single seeded generator, so results do not depend on how tasks are spread
over worker processes.
"""

from __future__ import annotations

import os
import random
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .basin import (
    REGION_ORDER,
    BallSpec,
    BasinStatus,
    Region,
    basin_membership,
    check_transition,
    classify_region,
    contraction_after_entry,
    enumerate_ball_representatives,
    observed_escape_time,
    pairwise_scaling,
    predict_escape_time,
    region_membership,
    census_point,
    transition_matrix,
)
from .functions import exp_series, in_exp_domain, log_series
from .padic import PadicNumber, format_padic, format_rational, truncate
from .polyroots import cubic_roots_Qp, roots_mod_pk
from .potts import (
    ModelParams,
    eval_derivative,
    eval_map,
    find_fixed_points,
    fixed_point_cubics,
    fixed_point_norm_formula,
    multiplier_closed_form,
    sample_params,
    verify_corollary_congruence,
)

FIXED_POINT_PRIMES = (5, 11, 17, 23, 29)
BASIN_PRIMES = (5, 11)
MAX_COUNTEREXAMPLES = 20
THREADS_ENV = "PADIC_DYNAMICS_THREADS"


@dataclass
class Tally:
    counts: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def record(self, name: str, ok: bool, **context) -> bool:
        passed, failed = self.counts.get(name, (0, 0))
        if ok:
            self.counts[name] = (passed + 1, failed)
        else:
            self.counts[name] = (passed, failed + 1)
            if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
                self.counterexamples.append({"check": name, **context})
        return ok

    def bump(self, key: str, value: int) -> None:
        self.stats[key] = max(self.stats.get(key, value), value)

    def merge(self, other: Tally) -> None:
        for name, (p, f) in other.counts.items():
            a, b = self.counts.get(name, (0, 0))
            self.counts[name] = (a + p, b + f)
        room = MAX_COUNTEREXAMPLES - len(self.counterexamples)
        self.counterexamples.extend(other.counterexamples[:max(room, 0)])
        for k, v in other.stats.items():
            self.bump(k, v)

    @property
    def failures(self) -> int:
        return sum(f for _, f in self.counts.values())

    def to_json(self) -> dict:
        return {
            "checks": {k: {"passed": p, "failed": f} for k, (p, f) in sorted(self.counts.items())},
            "counterexamples": self.counterexamples,
            "stats": dict(sorted(self.stats.items())),
            "ok": self.failures == 0,
        }


def describe_params(params: ModelParams) -> dict:
    return {"p": int(params.p), "q": params.q, "theta": format_rational(params.theta), "k": params.k}


def _lit(x: PadicNumber, n: int) -> str:
    return f"{format_rational(x)} = {format_padic(x, n)}"


# -- fixed points -------------------------------------------------------------------


def fixed_point_checks(params: ModelParams, n: int, tally: Tally, inject_failure: bool = False) -> None:
    """Unique root, residue 3, norm formula, scan cross-check; tier2 extras."""
    ctx = describe_params(params)
    cubic = fixed_point_cubics(params).y_form
    certs = cubic_roots_Qp(cubic, n)
    if not tally.record("unique_root", len(certs) == 1, params=ctx, roots=len(certs)):
        return
    cert = certs[0]
    p = int(params.p)
    tally.record("root_residue_3", cert.residue(1) == 3, params=ctx)
    y = cert.value()
    tally.record("unit_root", y.valuation == 0, params=ctx)
    expected = fixed_point_norm_formula(params)
    dz = y - 3
    if expected.valuation < n:
        ok = not dz.is_zero and dz.valuation == expected.valuation
    else:
        ok = dz.is_zero or dz.valuation >= n
    tally.record("norm_formula", ok, params=ctx, y1=_lit(y, n))
    # every scan root that is 3 mod p must be the lifted root reduced
    chain_ok = True
    for k in range(1, min(4, n) + 1):
        scan = {r for r in roots_mod_pk(cubic, k) if r % p == 3}
        chain_ok &= scan == {cert.residue(k)}
    tally.record("scan_chain_k4", chain_ok, params=ctx)
    if not params.tier2:
        return
    fps = find_fixed_points(params, n)
    tally.record("corollary_congruence", verify_corollary_congruence(params, fps).passed, params=ctx)
    ratio = params.contraction_ratio
    m0 = fps.multiplier_x0
    if inject_failure:
        m0 = m0 * p
    tally.record("multiplier_x0", m0 == ratio, params=ctx, got=str(m0), want=str(ratio))
    tally.record("multiplier_x1", fps.multiplier_x1 == 1 / ratio, params=ctx)
    tally.record("classes", fps.class_x0.value == "Attracting" and fps.class_x1.value == "Repelling", params=ctx)
    closed0 = multiplier_closed_form(params, PadicNumber(1, p))
    tally.record("closed_form_x0", closed0 == eval_derivative(params, 1), params=ctx)
    closed1 = multiplier_closed_form(params, fps.x1).norm()
    tally.record("closed_form_x1", closed1 == fps.multiplier_x1, params=ctx)
    a, m = params.theta_val, params.q_val
    rng = random.Random(zlib.crc32(f"{p}:{params.q}:{format_rational(params.theta)}".encode()))
    u = rng.randrange(1, p)
    x = PadicNumber(1 + p ** (m + 2) * u, p)
    fd0 = (eval_map(params, x) - 1).norm() / (x - 1).norm()
    tally.record("finite_difference_x0", fd0 == ratio, params=ctx, x=_lit(x, n))
    # at x1 the representative error p^-M must stay below the image distance
    x = fps.x1 + PadicNumber(p ** (a + 1) * u, p)
    fd1 = (eval_map(params, x) - fps.x1).norm() / (x - fps.x1).norm()
    tally.record("finite_difference_x1", fd1 == 1 / ratio, params=ctx, x=_lit(x, n))
    drift = eval_map(params, fps.x1) - fps.x1
    tally.record("x1_fixed_mod_pN", drift.is_zero or drift.valuation >= n - 2, params=ctx)


def sample_fixed_point_params(rng: random.Random, count: int, tier: int) -> list:
    return [sample_params(rng, FIXED_POINT_PRIMES[i % len(FIXED_POINT_PRIMES)], tier=tier) for i in range(count)]


# -- basin ----------------------------------------------------------------------------


def sample_full_coverage_params(rng: random.Random, p: int) -> ModelParams:
    """Tier-2 parameters with v(q) = 2 and v(theta - 1) >= 4, so every region is non-empty."""
    while True:
        m = 2
        a = m + 2 + rng.randint(0, 1)
        s = rng.randrange(1, p)
        u = rng.randrange(1, p**2)
        if u % p == 0:
            continue
        theta = 1 + p**a * (u if rng.random() < 0.5 else -u)
        return ModelParams(p, p**m * s, PadicNumber(theta, p), 3)


def basin_checks(params: ModelParams, n: int, points: int, seed: int, tally: Tally, budget: int = 500,
                 pairs: int = 100, escape_points: int = 100) -> None:
    ctx = describe_params(params)
    fps = find_fixed_points(params, n)
    spec = BallSpec(j=1, n=n, count=points, min_per_region=10, seed=seed)
    seen = set()
    for x in enumerate_ball_representatives(params, fps, spec):
        region = classify_region(params, fps, x)
        seen.add(region)
        tally.record("partition", region_membership(params, fps, x) == {region}, params=ctx, x=_lit(x, n))
        if region is Region.SINGULAR:
            tally.record("basin", True)
            continue
        tr = check_transition(params, fps, x)
        tally.record(f"transition_{region.tag}", tr.satisfied, params=ctx, x=_lit(x, n),
                     source=tr.source.tag, target=tr.target.tag)
        _basin_point(params, fps, x, budget, tally, ctx, n)
    tally.record("all_regions_covered", len(seen) == len(REGION_ORDER), params=ctx,
                 missing=sorted(r.tag for r in set(REGION_ORDER) - seen))
    rng = random.Random(seed ^ 0x5EED)
    _scaling_pairs(params, fps, rng, pairs, tally, ctx, n)
    _escape_times(params, fps, rng, escape_points, tally, ctx, n)


def _basin_point(params, fps, x, budget, tally, ctx, n) -> None:
    verdict = basin_membership(params, fps, x, budget)
    ok = verdict.status in (BasinStatus.IN_BASIN, BasinStatus.EVENTUALLY_SINGULAR)
    tally.record("basin", ok, params=ctx, x=_lit(x, n), status=verdict.status.value)
    if verdict.status is BasinStatus.IN_BASIN:
        tally.bump("max_steps_to_A0", verdict.steps)
        tally.record("step_bound", verdict.within_bound, params=ctx, x=_lit(x, n),
                     steps=verdict.steps, bound=verdict.bound)
        y = x
        for _ in range(verdict.steps):
            y = eval_map(params, y)
        tally.record("contraction_in_A0", contraction_after_entry(params, y, 2), params=ctx, x=_lit(x, n))


def _x1_neighbour(params, fps, rng, depth):
    p = int(params.p)
    while True:
        u = rng.randrange(1, p**2)
        if u % p:
            return fps.x1 + PadicNumber(p**depth * u, p)


def _scaling_pairs(params, fps, rng, count, tally, ctx, n) -> None:
    a = params.theta_val
    top = fps.x1_precision - 1
    for _ in range(count):
        d1 = rng.randint(a + 1, top)
        d2 = rng.randint(a + 1, top)
        xb = _x1_neighbour(params, fps, rng, d1)
        xbb = _x1_neighbour(params, fps, rng, d2)
        chk = pairwise_scaling(params, fps, xb, xbb)
        tally.record("pairwise_scaling", chk.equal, params=ctx, x_bar=_lit(xb, n), x_bbar=_lit(xbb, n))


def escape_levels(params: ModelParams, fps, levels: int = 5) -> list:
    a = params.theta_val
    top = fps.x1_precision - 1
    return list(range(a + 1, min(a + levels, top) + 1))


def _escape_times(params, fps, rng, count, tally, ctx, n) -> None:
    levels = escape_levels(params, fps)
    tally.bump("escape_levels", len(levels))
    for i in range(count):
        j = levels[i % len(levels)]
        x = _x1_neighbour(params, fps, rng, j)
        n0 = predict_escape_time(params, fps, x)
        obs = observed_escape_time(params, fps, x)
        tally.record("escape_time", n0 == obs, params=ctx, x=_lit(x, n), predicted=n0, observed=obs)
        tally.bump("max_escape_time", obs)


# -- exp / log ----------------------------------------------------------------------


def exp_log_checks(rng: random.Random, p: int, n: int, count: int, tally: Tally) -> None:
    """Norm identities and round trips for exp_p and log_p at precision n."""
    for _ in range(count):
        v = rng.randint(1, 4)
        u = rng.randrange(1, p**6)
        if u % p == 0:
            u += 1
        x = PadicNumber(p**v * u * (1 if rng.random() < 0.5 else -1), p)
        if not in_exp_domain(x):
            continue
        e = exp_series(x, n)
        e_trunc = truncate(e, n).value()
        lg = log_series(1 + x, n)
        ctx = {"p": p, "N": n, "x": format_rational(x)}
        tally.record("exp_norm_one", e.norm() == 1, **ctx)
        tally.record("exp_minus_one_norm", (e - 1).norm() == x.norm(), **ctx)
        tally.record("log_norm", lg.norm() == x.norm(), **ctx)
        back = log_series(e_trunc, n) - x
        tally.record("log_exp_roundtrip", back.is_zero or back.valuation >= n, **ctx)
        fwd = exp_series(truncate(lg, n).value(), n) - (1 + x)
        tally.record("exp_log_roundtrip", fwd.is_zero or fwd.valuation >= n, **ctx)
        longer = exp_series(x, n + 8) - e
        tally.record("truncation_stable", longer.is_zero or longer.valuation >= n, **ctx)


# -- driver ---------------------------------------------------------------------------


def worker_count(threads: int | None = None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else 1
    return max(1, threads)


def _fixed_point_task(args) -> Tally:
    params, n, inject = args
    t = Tally()
    fixed_point_checks(params, n, t, inject)
    return t


def _basin_task(args) -> Tally:
    params, n, points, seed, budget = args
    t = Tally()
    basin_checks(params, n, points, seed, t, budget)
    return t


def _run(fn, tasks, threads: int) -> list:
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


def run_verify(seed: int = 0, samples: int = 20, n: int = 12, budget: int = 500, points: int = 500,
               basin_sets: int = 2, threads: int | None = None, inject_failure: bool = False) -> dict:
    """Sample parameters, run the fixed-point and basin suites, and report counts."""
    if samples < 1:
        raise ValueError("verification needs at least one sample")
    rng = random.Random(seed)
    tier1 = sample_fixed_point_params(rng, samples, tier=1)
    tier2 = sample_fixed_point_params(rng, samples, tier=2)
    basin_params = [sample_full_coverage_params(rng, BASIN_PRIMES[i % len(BASIN_PRIMES)]) for i in range(basin_sets)]
    basin_seeds = [rng.getrandbits(32) for _ in basin_params]
    workers = worker_count(threads)
    tasks = [(pr, n, False) for pr in tier1]
    tasks += [(pr, n, inject_failure and i == 0) for i, pr in enumerate(tier2)]
    total = Tally()
    for t in _run(_fixed_point_task, tasks, workers):
        total.merge(t)
    basin_n = max(n, 8)
    btasks = [(pr, basin_n, points, s, budget) for pr, s in zip(basin_params, basin_seeds)]
    for t in _run(_basin_task, btasks, workers):
        total.merge(t)
    exp_rng = random.Random(rng.getrandbits(32))
    exp_log_checks(exp_rng, 5, n, samples, total)
    report = total.to_json()
    report["seed"] = seed
    report["samples"] = samples
    report["precision"] = n
    report["parameter_sets"] = {
        "tier1": len(tier1),
        "tier2": len(tier2),
        "basin": [describe_params(pr) for pr in basin_params],
    }
    return report


def census(params: ModelParams, n: int, spec: BallSpec, budget: int = 500):
    """Yield one JSON-ready dict per point, then a summary with the transition matrix."""
    fps = find_fixed_points(params, n)
    records = []
    for x in enumerate_ball_representatives(params, fps, spec):
        rec = census_point(params, fps, x, budget)
        records.append(rec)
        yield {
            "record": "point",
            "point": format_rational(x),
            "region_from": rec.region_from.tag,
            "region_to": rec.region_to.tag if rec.region_to is not None else None,
            "steps_to_A0": rec.steps_to_A0,
            "status": rec.status.value,
            "transition_ok": rec.transition_ok,
        }
    steps = [r.steps_to_A0 for r in records if r.steps_to_A0 is not None]
    yield {
        "record": "summary",
        "params": describe_params(params),
        "regions": [r.tag for r in REGION_ORDER],
        "transition_matrix": transition_matrix(records),
        "points": len(records),
        "max_steps_to_A0": max(steps) if steps else None,
        "transition_failures": sum(not r.transition_ok for r in records),
    }
