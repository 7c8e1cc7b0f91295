import io
import json
from importlib import resources

import jsonschema
import pytest

from padic_dynamics.cli import main

SCHEMA = json.loads(resources.files("padic_dynamics").joinpath("schema/records.schema.json").read_text())
P5 = ["--p", "5", "--q", "5", "--theta", "26/1"]


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def records(text):
    recs = [json.loads(line) for line in text.splitlines() if line]
    for r in recs:
        jsonschema.validate(r, SCHEMA)
    return recs


def test_fixed_points_anchor():
    code, text = run("fixed-points", *P5, "--prec", "4", "--json")
    assert code == 0
    (r,) = records(text)
    assert r["y1_residue"] % 25 == 23
    assert r["multiplier_x0"] == "1/5" and r["multiplier_x1"] == "5"
    assert r["y1_congruence"] == {"s0": 4, "m": 1, "residue": 23}


def test_human_output():
    code, text = run("fixed-points", *P5, "--prec", "4")
    assert code == 0 and "class_x1: Repelling" in text


def test_theta_via_J():
    code, text = run("fixed-points", "--p", "5", "--q", "5", "--J", "25", "--prec", "6", "--json")
    (r,) = records(text)
    assert code == 0 and r["params"]["theta_source"].startswith("exp_p")


@pytest.mark.parametrize("argv", [
    ["fixed-points", "--p", "5", "--q", "5", "--theta", "1/1"],
    ["fixed-points", "--p", "7", "--q", "7", "--theta", "50/1"],
    ["fixed-points", "--p", "6", "--q", "5", "--theta", "26/1"],
    ["fixed-points", "--p", "5", "--q", "5"],
    ["fixed-points", *P5, "--J", "25"],
    ["fixed-points", "--p", "5", "--q", "5", "--theta", "1+"],
    ["verify", "--samples", "0"],
    ["classify", *P5],
    ["gibbs", *P5, "--partition", "1,x"],
    ["nonsense"],
])
def test_input_errors(argv):
    assert run(*argv)[0] == 2


def test_orbit_and_classify():
    code, text = run("orbit", *P5, "--x", "0/1", "--prec", "8", "--json")
    (r,) = records(text)
    assert code == 0 and r["status"] == "ConvergedToA0" and r["steps"] == 1
    assert [s["region"] for s in r["trajectory"]] == ["A1", "A0"]
    code, text = run("classify", *P5, "--x", "2-26-5", "--prec", "8", "--json")
    (r,) = records(text)
    assert r["region"] == "Singular" and r["basin"] == "EventuallySingular"


def test_orbit_budget():
    code, _ = run("orbit", *P5, "--x", "0/1", "--budget", "0", "--prec", "8", "--json")
    assert code == 3


def test_census():
    argv = ["census", "--p", "5", "--q", "25", "--theta", "1251/1", "--samples", "200",
            "--min-per-region", "10", "--json"]
    code, text = run(*argv)
    recs = records(text)
    summary = recs[-1]
    assert code == 0 and summary["record"] == "summary"
    assert all(sum(row) > 0 for row in summary["transition_matrix"][:-1])
    assert summary["transition_failures"] == 0
    assert run(*argv)[1] == text
    code, _ = run("census", *P5, "--samples", "20", "--min-per-region", "5", "--json")
    assert code == 2


def test_gibbs():
    code, text = run("gibbs", *P5, "--prec", "10", "--json")
    recs = records(text)
    assert code == 0
    assert recs[0]["case"] == "A"
    assert recs[-1]["record"] == "gibbs_summary" and recs[-1]["vectors"] == len(recs) - 1
    code, text = run("gibbs", *P5, "--prec", "10", "--cases", "C", "--partition", "2,2", "--json")
    assert {r["partition"] == [2, 2] for r in records(text)[:-1]} == {True}


def test_verify_small_and_deterministic():
    argv = ["verify", "--seed", "3", "--samples", "5", "--points", "150", "--json"]
    code, text = run(*argv)
    (r,) = records(text)
    assert code == 0 and r["ok"]
    assert run(*argv)[1] == text


def test_verify_injected_failure():
    code, text = run("verify", "--samples", "2", "--points", "100", "--inject-failure", "--json")
    (r,) = records(text)
    assert code == 1 and not r["ok"]
    assert r["counterexamples"][0]["check"] == "multiplier_x0"
    assert "theta" in r["counterexamples"][0]["params"]
