import pytest

_LINES = []


@pytest.fixture
def criterion_log():
    """Record one result line per acceptance criterion; printed in the summary."""

    def log(number: int, passed: bool, text: str):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {text}"
        _LINES.append(line)
        print(line)
        return passed

    return log


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
