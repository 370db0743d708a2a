import pytest

from sawbox import io

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def table1():
    return io.load_bundled("table1")


@pytest.fixture(scope="session")
def table2():
    return io.load_bundled("table2")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
