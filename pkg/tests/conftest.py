import pytest

# filled by test_acceptance.py; one line per criterion
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    def _record(num: int, ok: bool, detail: str) -> None:
        ACCEPTANCE[num] = f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {detail}"
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
