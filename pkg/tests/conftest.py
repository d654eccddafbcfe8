import pytest

from eponlab.core import default_config
from eponlab.traffic import default_profile

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def config():
    return default_config()


@pytest.fixture
def profile():
    return default_profile(0.02)


@pytest.fixture
def record_criterion():
    """Log one acceptance line; the summary prints at the end of the session."""

    def record(name: str, passed: bool, detail: str) -> None:
        _ACCEPTANCE.append((name, bool(passed), detail))
        print(f"{name} {'PASS' if passed else 'FAIL'}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{name} {'PASS' if passed else 'FAIL'}: {detail}")
