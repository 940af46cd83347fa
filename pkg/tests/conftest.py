import time

import pytest

from qlaplace.qcore import QBase

SESSION_START = time.perf_counter()
ACCEPTANCE_LINES: dict = {}


def pytest_collection_modifyitems(session, config, items):
    # the acceptance module runs last so that its runtime criterion sees the whole suite
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[num])


@pytest.fixture
def base():
    return QBase(0.5)
