import numpy as np
import pytest

_ACCEPTANCE = []


@pytest.fixture
def record():
    """Log one acceptance line; the summary prints them in criterion order."""
    def _record(number, title, ok, detail=""):
        _ACCEPTANCE.append((number, title, bool(ok), detail))
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"[{number:2d}] {'PASS' if ok else 'FAIL'}  {title}  {detail}")


@pytest.fixture
def mercedes_benz():
    c = np.sqrt(3.0) / 2.0
    return np.array([[1.0, -0.5, -0.5], [0.0, c, -c]])
