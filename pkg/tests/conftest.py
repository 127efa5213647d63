import pytest

_VERDICTS: dict[int, tuple[str, str]] = {}


@pytest.fixture
def verdict():
    """Record ``(criterion, passed, detail)`` for the acceptance summary."""

    def record(number: int, passed: bool, detail: str):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        _VERDICTS[number] = ("PASS" if passed else "FAIL", line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        terminalreporter.write_line(_VERDICTS[number][1])
