import pytest

_LINES = []


@pytest.fixture
def report():
    """Record one summary line; all lines are printed at the end of the run."""

    def record(criterion, ok, detail):
        _LINES.append(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")
        print(_LINES[-1])

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
