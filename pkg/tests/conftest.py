import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record the single pass/fail line for an acceptance criterion."""

    def record(number: int, passed: bool, text: str) -> bool:
        line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}: {text}"
        _LINES[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_LINES):
            terminalreporter.write_line(_LINES[n])
