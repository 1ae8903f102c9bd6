from __future__ import annotations

import pytest

from dicyclic_drg.groups import abelian_group, generalized_dicyclic, parse_group_spec

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def q8():
    return generalized_dicyclic(abelian_group([4]))


@pytest.fixture(scope="session")
def dic3():
    return generalized_dicyclic(abelian_group([6]))


@pytest.fixture
def el(q8):
    """Q8 element by name: 1, x, a (= x^2), x3, t, tx, ta (= t^-1), tx3."""
    names = {"1": "(0)", "x": "(1)", "a": "(2)", "x3": "(3)", "t": "t*(0)", "tx": "t*(1)", "ta": "t*(2)", "tx3": "t*(3)"}
    return lambda name: q8.element(names[name])


@pytest.fixture(scope="session")
def group():
    return parse_group_spec


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


@pytest.fixture
def criterion(request):
    """Declare the acceptance criterion a test covers; logs one pass/fail line."""
    state = {}

    def declare(number: int, text: str):
        state.update(number=number, text=text)

    yield declare
    rep = getattr(request.node, "rep_call", None)
    if state and rep is not None:
        verdict = "PASS" if rep.passed else "FAIL"
        ACCEPTANCE_LINES.append(f"{verdict} criterion {state['number']}: {state['text']}")
