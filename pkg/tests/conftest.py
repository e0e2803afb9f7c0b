from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance: dict[str, list] = {}


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = getattr(report, "_acceptance", None)
    if marker is None:
        return
    number, title = marker
    entry = _acceptance.setdefault(number, [title, True])
    entry[1] = entry[1] and report.passed


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is not None:
        rep._acceptance = (str(m.args[0]), m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance, key=int):
        title, ok = _acceptance[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
