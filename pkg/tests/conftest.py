import pytest

# criterion number -> (title, passed, note); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def record(number: int, title: str, passed: bool, note: str = ""):
    ACCEPTANCE[number] = (title, passed, note)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, passed, note = ACCEPTANCE[n]
        line = f"criterion {n:>2}: {'PASS' if passed else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({note})" if note else ""))


@pytest.fixture(scope="session")
def acceptance_record():
    return record
