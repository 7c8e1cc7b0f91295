import pytest

from padic_dynamics import ModelParams, PadicNumber, find_fixed_points


@pytest.fixture(scope="session")
def p5():
    return ModelParams(5, 5, PadicNumber(26, 5), 3)


@pytest.fixture(scope="session")
def p5_fps(p5):
    return find_fixed_points(p5, 8)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
