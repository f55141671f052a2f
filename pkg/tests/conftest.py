import pytest

from conleymorse import fixtures

from support import ACCEPTANCE_LINES


@pytest.fixture
def fix_a():
    return fixtures.fix_a()


@pytest.fixture
def fix_c():
    return fixtures.fix_c()


@pytest.fixture
def fix_r():
    return fixtures.fix_r()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
