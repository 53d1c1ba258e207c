from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

# filled by test_acceptance; printed once at the end of the session
ACCEPTANCE: dict = {}


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
