import pytest

from shiftexp.primeset import make_params, stream_records


@pytest.fixture(scope="session")
def params25():
    return make_params(2, -5)


@pytest.fixture(scope="session")
def records_1e6(params25):
    """Every prime record for (2, -5) up to 10^6."""
    return list(stream_records(params25, 10**6))


@pytest.fixture(scope="session")
def s_records_1e6(records_1e6):
    return [r for r in records_1e6 if r.in_S]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    store = item.config._criteria
    # a failure in any phase sticks
    if rep.failed or n not in store:
        if rep.when == "call" or rep.failed:
            store[n] = (title, "FAIL" if rep.failed else "PASS")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = getattr(config, "_criteria", {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(store):
        title, verdict = store[n]
        terminalreporter.write_line(f"criterion {n:2d} {verdict}: {title}")
