import sys

import pytest

from polydyn import _core


@pytest.fixture(params=sorted(_core.BACKENDS))
def backend(request):
    """Each available kernel module in turn."""
    return _core.get_backend(request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
