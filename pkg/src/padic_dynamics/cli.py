"""Command-line front end: ``padic-dynamics <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 budget exhausted.
JSON output is one record per line with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys

from .basin import BallSpec, basin_membership, classify_region, empty_regions
from .errors import (
    BudgetExceeded,
    CoverageUnreachable,
    GuardViolated,
    HypothesisViolated,
    LiteralSyntaxError,
    NotPrime,
    OutsideConvergenceDomain,
    PadicError,
    SingularInput,
    TheoremViolation,
)
from .functions import theta_from_J
from .gibbs import Partition, catalogue_records, enumerate_tipgm
from .padic import Prime, format_padic, format_rational, parse_literal
from .potts import ModelParams, OrbitStatus, find_fixed_points, orbit
from .suites import census, describe_params, run_verify

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


class InputError(Exception):
    pass


def emit(obj, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n")
    else:
        out.write(_human(obj) + "\n")


def _human(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {_scalar(v)}" if _flat(v) or not isinstance(v, (dict, list))
                         else _human(v, indent + 1) for v in obj)
    return pad + _scalar(obj)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values())
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return True


def _scalar(v) -> str:
    if isinstance(v, dict):
        return ", ".join(f"{k}={v[k]}" for k in sorted(v))
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


# -- configuration --------------------------------------------------------------------


def _params(args) -> ModelParams:
    if args.p is None or args.q is None:
        raise InputError("--p and --q are required")
    if (args.theta is None) == (args.J is None):
        raise InputError("give exactly one of --theta and --J")
    p = Prime(args.p)
    if args.theta is not None:
        theta = parse_literal(args.theta, p)
        source = "direct"
    else:
        theta = theta_from_J(parse_literal(args.J, p), args.prec)
        source = f"exp_p(J) mod p^{args.prec}"
    return ModelParams(p, args.q, theta, args.k, theta_source=source)


def _exponent(norm, p: int) -> int:
    """e with norm = p**e."""
    num, den = norm.numerator, norm.denominator
    base, sign = (num, 1) if den == 1 else (den, -1)
    e = 0
    while base % p == 0:
        base //= p
        e += 1
    return sign * e


def _param_record(params: ModelParams) -> dict:
    rec = describe_params(params)
    rec["theta_source"] = params.theta_source
    return rec


# -- commands -------------------------------------------------------------------------


def cmd_fixed_points(args, out) -> int:
    params = _params(args)
    n = args.prec
    fps = find_fixed_points(params, n)
    p = int(params.p)
    rec = {
        "record": "fixed_points",
        "params": _param_record(params),
        "precision": n,
        "x0": format_rational(fps.x0),
        "y1_residue": fps.y1.residue(min(n, fps.y1.absolute_precision)),
        "y1_digits": format_padic(fps.y1.value(), n),
        "x1_residue": fps.x1.residue(fps.x1_precision),
        "x1_modulus_exponent": fps.x1_precision,
        "x1_digits": format_padic(fps.x1, fps.x1_precision - max(fps.x1.valuation, 0)),
        "multiplier_x0": str(fps.multiplier_x0),
        "multiplier_x1": str(fps.multiplier_x1),
        "multiplier_exponents": [_exponent(fps.multiplier_x0, p), _exponent(fps.multiplier_x1, p)],
        "class_x0": fps.class_x0.value,
        "class_x1": fps.class_x1.value,
        "tier2": params.tier2,
        "y1_congruence": None,
    }
    if fps.congruence is not None:
        s0, m = fps.congruence
        rec["y1_congruence"] = {"s0": s0, "m": m, "residue": (3 + s0 * p**m) % p ** (m + 1)}
    emit(rec, args.json, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.samples is not None and args.samples < 1:
        raise InputError("--samples must be positive for verification; the suite would be empty")
    report = run_verify(
        seed=args.seed,
        samples=args.samples or 20,
        n=args.prec if args.prec_given else 12,
        budget=args.budget,
        points=args.points,
        threads=args.threads,
        inject_failure=args.inject_failure,
    )
    report["record"] = "verify"
    emit(report, args.json, out)
    return EXIT_OK if report["ok"] else EXIT_VERIFY


def _x_arg(args, params) -> object:
    if args.x is None:
        raise InputError("--x is required")
    return parse_literal(args.x, params.p)


def _region_or_none(params, fps, x):
    if fps is None:
        return None
    return classify_region(params, fps, x).tag


def _fps_if_available(params, n):
    if params.tier2 and params.k == 3 and params.p.residue_class_mod_3 == 2 and params.p >= 5:
        return find_fixed_points(params, n)
    return None


def cmd_orbit(args, out) -> int:
    params = _params(args)
    x = _x_arg(args, params)
    fps = _fps_if_available(params, args.prec)
    orb = orbit(params, x, args.budget, fixed_points=fps)
    steps = []
    for i, pt in enumerate(orb.trajectory):
        steps.append({"step": i, "x": format_rational(pt), "digits": format_padic(pt, args.prec),
                      "region": _region_or_none(params, fps, pt)})
    rec = {"record": "orbit", "params": _param_record(params), "status": orb.status.value,
           "steps": orb.steps, "trajectory": steps}
    emit(rec, args.json, out)
    return EXIT_BUDGET if orb.status is OrbitStatus.BUDGET_EXHAUSTED else EXIT_OK


def cmd_classify(args, out) -> int:
    params = _params(args)
    params.require_classification_scope(tier=2)
    x = _x_arg(args, params)
    fps = find_fixed_points(params, args.prec)
    region = classify_region(params, fps, x)
    verdict = basin_membership(params, fps, x, args.budget)
    rec = {"record": "classify", "params": _param_record(params), "x": format_rational(x),
           "region": region.tag, "basin": verdict.status.value, "steps": verdict.steps}
    emit(rec, args.json, out)
    return EXIT_BUDGET if verdict.status.value == "BudgetExceeded" else EXIT_OK


def cmd_census(args, out) -> int:
    params = _params(args)
    params.require_classification_scope(tier=2)
    n = max(args.prec if args.prec_given else 8, params.theta_val + 2)
    count = args.samples if args.samples is not None else 1000
    if count < 0:
        raise InputError("--samples must be non-negative")
    strict = args.min_per_region is not None
    spec = BallSpec(j=1, n=n, count=count, min_per_region=args.min_per_region or 1,
                    seed=args.seed, require_all=strict)
    failures = 0
    for rec in census(params, n, spec, args.budget):
        if rec["record"] == "summary":
            rec["empty_regions"] = sorted(r.tag for r in empty_regions(params))
            rec["seed"] = args.seed
            failures = rec["transition_failures"]
        emit(rec, args.json, out)
    return EXIT_VERIFY if failures else EXIT_OK


def _partition(text):
    if text is None:
        return None
    try:
        parts = [int(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"bad partition {text!r}; expected m1,m2 or m1,m2,m3") from None
    if len(parts) not in (2, 3):
        raise InputError("a partition has two or three parts")
    return Partition(*parts)


def cmd_gibbs(args, out) -> int:
    params = _params(args)
    n = args.prec if args.prec_given else 16
    part = _partition(args.partition)
    cases = args.cases.split(",") if args.cases else None
    h_free = parse_literal(args.h, params.p) if args.h is not None else 1
    cat = enumerate_tipgm(params, n, cases=cases, partition=part, h_free=h_free)
    records = catalogue_records(cat)
    failed = 0
    for r in records:
        r["record"] = "gibbs"
        failed += r["consistency_check"] != "pass" or r["recursion_check"] == "fail"
        emit(r, args.json, out)
    summary = {
        "record": "gibbs_summary",
        "params": _param_record(params),
        "precision": n,
        "vectors": len(records),
        "unique": len(records) == 1,
        "diagnostics": [{"case": d.case.value, "partition": d.partition.as_list() if d.partition else [],
                         "kind": d.kind, "message": d.message} for d in cat.diagnostics],
    }
    emit(summary, args.json, out)
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {
    "fixed-points": cmd_fixed_points,
    "verify": cmd_verify,
    "orbit": cmd_orbit,
    "classify": cmd_classify,
    "census": cmd_census,
    "gibbs": cmd_gibbs,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--q", type=int)
    common.add_argument("--theta", help="rational a/b or digit literal such as 1+p^2")
    common.add_argument("--J", help="coupling; theta = exp_p(J)")
    common.add_argument("--k", type=int, default=3)
    common.add_argument("--prec", type=int, default=None, help="precision N (default 64)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--budget", type=int, default=500)
    common.add_argument("--json", action="store_true")
    common.add_argument("--min-per-region", type=int, default=None)
    common.add_argument("--x", help="point literal")
    common.add_argument("--points", type=int, default=500, help="points per basin parameter set (verify)")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--partition", help="single partition m1,m2[,m3] for gibbs")
    common.add_argument("--cases", help="comma-separated case families for gibbs, e.g. A,B,C")
    common.add_argument("--h", help="free boundary parameter h in E_p (gibbs)")
    common.add_argument("--inject-failure", action="store_true", help=argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="padic-dynamics", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args.prec_given = args.prec is not None
    if args.prec is None:
        args.prec = 64
    if args.prec < 1:
        print("error: --prec must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args, out)
    except (InputError, HypothesisViolated, NotPrime, LiteralSyntaxError, SingularInput, GuardViolated,
            OutsideConvergenceDomain, CoverageUnreachable, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (TheoremViolation, PadicError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
