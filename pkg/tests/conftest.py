import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ultrawave.cyclotomic import root_of_unity, simplify
from ultrawave.gfq import field_params
from ultrawave.localfield import Ball, FieldElement
from ultrawave.stepfn import StepFunction

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

QS = (2, 3, 4, 5, 9)


@st.composite
def params_st(draw, qs=QS):
    return field_params(draw(st.sampled_from(qs)))


@st.composite
def element_st(draw, params, lo=-4, hi=4):
    terms = {e: draw(st.integers(0, params.q - 1)) for e in range(lo, hi)}
    return FieldElement(params, terms)


@st.composite
def step_st(draw, params, max_pieces=3, levels=(-2, 2)):
    pieces = []
    for _ in range(draw(st.integers(1, max_pieces))):
        lev = draw(st.integers(*levels))
        center = draw(element_st(params, lo=min(lev, 0) - 2, hi=lev))
        val = Fraction(draw(st.integers(-4, 4)), draw(st.integers(1, 3)))
        if params.p > 2 and draw(st.booleans()):
            val = simplify(val * root_of_unity(params.p, draw(st.integers(0, params.p - 1))))
        pieces.append((Ball(center, lev), val))
    return StepFunction(params, pieces)


@pytest.fixture
def rng():
    return random.Random(1234)


# -- acceptance reporting ----------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = mark.args
    ok = rep.passed
    prev = _CRITERIA.get(number)
    _CRITERIA[number] = (title, (prev[1] if prev else True) and ok, (prev[2] if prev else 0.0) + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, secs = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'} {secs:7.2f}s  {title}")
