"""Acceptance criteria 1-9, each at its stated tolerance.

Each test files a one-line verdict that is printed in the terminal summary.
"""

import io
import random
import time

import pytest

from padic_dynamics import ModelParams, PadicNumber, enumerate_tipgm, find_fixed_points
from padic_dynamics.cli import main
from padic_dynamics.gibbs import Case, e3_factorisation_holds, solve_E3, verify_vector
from padic_dynamics.suites import (Tally, basin_checks, exp_log_checks, fixed_point_checks,
                                   sample_fixed_point_params, sample_full_coverage_params)

from conftest import ACCEPTANCE


def verdict(key, ok, detail):
    ACCEPTANCE[key] = (bool(ok), detail)
    print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def counts(tally, *names):
    return {n: tally.counts.get(n, (0, 0)) for n in names}


def all_passed(c, minimum=1):
    return all(f == 0 and p >= minimum for p, f in c.values())


@pytest.fixture(scope="module")
def tier2_tally():
    rng = random.Random(2024)
    tally = Tally()
    sets = sample_fixed_point_params(rng, 200, tier=2)
    for pr in sets:
        fixed_point_checks(pr, 12, tally)
    return tally, sets


@pytest.fixture(scope="module")
def basin_run():
    rng = random.Random(7)
    sets = [sample_full_coverage_params(rng, p) for p in (5, 11, 5)]
    tally = Tally()
    start = time.perf_counter()
    per_set = []
    for i, pr in enumerate(sets):
        t = Tally()
        basin_checks(pr, 8, 10_000, 100 + i, t, pairs=1000 if i == 0 else 0,
                     escape_points=1000 if i == 0 else 0)
        per_set.append(sum(t.counts["partition"]))
        tally.merge(t)
    return tally, per_set, time.perf_counter() - start


def test_criterion_1_unique_fixed_point():
    rng = random.Random(1)
    start = time.perf_counter()
    sets = sample_fixed_point_params(rng, 200, tier=1)
    tally = Tally()
    for pr in sets:
        fixed_point_checks(pr, 12, tally)
    elapsed = time.perf_counter() - start
    c = counts(tally, "unique_root", "root_residue_3", "unit_root", "norm_formula", "scan_chain_k4")
    primes = sorted({int(pr.p) for pr in sets})
    ok = all_passed(c, 200) and elapsed < 30 and primes == [5, 11, 17, 23, 29] and all(pr.tier1 for pr in sets)
    verdict(1, ok, f"{len(sets)} tier1 sets over p={primes}, {c}, {elapsed:.1f}s")


def test_criterion_2_congruence(tier2_tally):
    tally, sets = tier2_tally
    c = counts(tally, "corollary_congruence")
    anchor = find_fixed_points(ModelParams(5, 5, PadicNumber(26, 5), 3), 2).y1.residue(2)
    ok = all_passed(c, 200) and anchor == 23 and all(pr.tier2 for pr in sets)
    verdict(2, ok, f"{c}, anchor y1 mod 25 = {anchor}")


def test_criterion_3_multipliers(tier2_tally):
    tally, _ = tier2_tally
    c = counts(tally, "multiplier_x0", "multiplier_x1", "classes", "closed_form_x0", "closed_form_x1",
               "finite_difference_x0", "finite_difference_x1")
    verdict(3, all_passed(c, 200), f"{c}")


def test_criterion_4_transitions(basin_run):
    tally, per_set, elapsed = basin_run
    trans = {k: v for k, v in tally.counts.items() if k.startswith("transition_")}
    c = counts(tally, "partition", "all_regions_covered")
    ok = (all_passed(c) and all(f == 0 for _, f in trans.values()) and len(trans) == 9
          and min(per_set) >= 10_000 and tally.counts["all_regions_covered"] == (len(per_set), 0)
          and elapsed < 120)
    verdict(4, ok, f"points per set {per_set}, {len(trans)} source regions + Singular, "
                   f"transition failures {sum(f for _, f in trans.values())}, {elapsed:.1f}s")


def test_criterion_5_scaling_and_escape(basin_run):
    tally, _, _ = basin_run
    c = counts(tally, "pairwise_scaling", "escape_time")
    levels = tally.stats.get("escape_levels", 0)
    ok = all_passed(c, 1000) and levels >= 5
    verdict(5, ok, f"{c}, {levels} distance levels, max escape {tally.stats.get('max_escape_time')}")


def test_criterion_6_basin(basin_run):
    tally, _, _ = basin_run
    c = counts(tally, "basin", "step_bound", "contraction_in_A0")
    ok = all_passed(c, 10_000)
    verdict(6, ok, f"{c}, observed max steps to A0 = {tally.stats.get('max_steps_to_A0')}")


def test_criterion_7_exp_log():
    tally = Tally()
    for n in (16, 64):
        exp_log_checks(random.Random(n), 5, n, 1000, tally)
    c = counts(tally, "exp_norm_one", "exp_minus_one_norm", "log_norm", "log_exp_roundtrip",
               "exp_log_roundtrip", "truncation_stable")
    verdict(7, all_passed(c, 2000), f"{c}")


def test_criterion_8_gibbs():
    rng = random.Random(8)
    n = 12
    vectors = failures = 0
    families = {}
    missing_a = []
    for p in (5, 11, 17):
        for q in range(p, 21, p):
            for _ in range(3):
                a = rng.randint(1, 3)
                theta = 1 + p**a * rng.randrange(1, p * p) * rng.choice((1, -1))
                pr = ModelParams(p, q, PadicNumber(theta, p), 3)
                cat = enumerate_tipgm(pr, n)
                if not cat.by_case("A"):
                    missing_a.append((p, q, theta))
                for v in cat.vectors:
                    vectors += 1
                    families[v.case.family] = families.get(v.case.family, 0) + 1
                    failures += not verify_vector(pr, v, n).passed
    e3_symbolic = e3_factorisation_holds()
    e3_roots = solve_E3(11, 6, PadicNumber(-5, 11), 1, n)
    e3_ok = any(r.value() == PadicNumber(1, 11) for r in e3_roots)
    ok = failures == 0 and not missing_a and e3_symbolic and e3_ok and vectors > families.get("A", 0)
    verdict(8, ok, f"{vectors} vectors {families}, {failures} failing, case A missing {len(missing_a)}, "
                   f"E(iii) identity {e3_symbolic}")


def test_criterion_9_determinism():
    outs = []
    for threads in ("1", "1", "2"):
        buf = io.StringIO()
        code = main(["verify", "--seed", "11", "--json", "--threads", threads], buf)
        outs.append((code, buf.getvalue().encode()))
    ok = outs[0] == outs[1] == outs[2] and outs[0][0] == 0
    verdict(9, ok, f"{len(outs[0][1])} bytes, identical across 2 serial runs and 1 parallel run")
