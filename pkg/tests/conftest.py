import sys
from collections import defaultdict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[int, dict] = defaultdict(lambda: {"title": "", "passed": 0, "failed": 0})


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        entry = _CRITERIA[marker.args[0]]
        entry["title"] = marker.args[1]
        entry["passed" if report.passed else "failed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "PASS" if entry["failed"] == 0 else "FAIL"
        total = entry["passed"] + entry["failed"]
        terminalreporter.write_line(f"[{status}] criterion {number}: {entry['title']} ({entry['passed']}/{total} checks)")
