import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(label, ok, measured_text)."""

    def record(label: str, ok: bool, measured: str) -> bool:
        _LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {measured}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
