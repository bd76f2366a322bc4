import pytest

# Filled in by test_acceptance.py: (number, title, passed, detail)
ACCEPTANCE_RESULTS: list = []


def pytest_terminal_summary(terminalreporter) -> None:
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number} {status}  {title}  ({detail})")


@pytest.fixture
def record():
    def _record(number: int, title: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE_RESULTS.append((number, title, passed, detail))
        print(f"criterion {number} {'PASS' if passed else 'FAIL'}  {title}  ({detail})")

    return _record
