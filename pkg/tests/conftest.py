import pytest

from rhpp.census import CensusConfig, run_census

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def default_report():
    return run_census(CensusConfig())


@pytest.fixture(scope="session")
def small_report():
    return run_census(CensusConfig(max_q=40, max_len=12, sweep_len=8))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
