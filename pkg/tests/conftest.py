import pytest
from hypothesis import HealthCheck, settings, strategies as st

from dkf import PolyA, fq_from_order

settings.register_profile("dkf", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("dkf")

FIELDS = {q: fq_from_order(q) for q in (2, 3, 4, 5, 7, 8, 9)}


@pytest.fixture
def F2():
    return FIELDS[2]


@pytest.fixture
def F3():
    return FIELDS[3]


def polys(F, max_deg=4, nonzero=False):
    coeffs = st.lists(st.integers(0, F.size - 1), min_size=0, max_size=max_deg + 1)
    out = coeffs.map(lambda c: PolyA(F, c))
    return out.filter(bool) if nonzero else out


def t_of(F):
    return PolyA.t(F)


# -- acceptance reporting ------------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title, limit): acceptance criterion with a time limit in seconds")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    n, title, limit = mark.args
    _CRITERIA[n] = (title, limit, rep.passed, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, limit, ok, dur = _CRITERIA[n]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {title}  ({dur:.2f} s, limit {limit} s)")
