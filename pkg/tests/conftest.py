import pytest

from helpers import DATA
from tracegroup.model import load_trace_set

_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.fixture(scope="session")
def fixture24():
    return load_trace_set((DATA / "fixture24.json").read_bytes())


@pytest.fixture(scope="session")
def example_pair():
    return load_trace_set((DATA / "example_pair.json").read_bytes())


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and report.when == "call":
        doc = (item.obj.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE.append((item.name, doc, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _name, doc, status in _ACCEPTANCE:
        terminalreporter.write_line(f"[{status}] {doc}")
