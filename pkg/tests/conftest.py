import pytest

from preimlab import build_sieve

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def sieve_small():
    return build_sieve(10**4 + 10)


@pytest.fixture(scope="session")
def sieve_mid():
    return build_sieve(10**6)


@pytest.fixture(scope="session")
def sieve_big():
    return build_sieve(10**7)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
