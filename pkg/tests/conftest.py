import json
from pathlib import Path

import pytest

from clam import HkParams, Tables

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def small():
    return Tables.build(10**4)


@pytest.fixture(scope="session")
def mid():
    return Tables.build(10**6)


@pytest.fixture(scope="session")
def big():
    return Tables.build(10**7)


@pytest.fixture(scope="session")
def p7():
    # x = 1e7, k = 2: y ~ 2.78, small primes {2, 3, 5, 7}
    return HkParams(1e7, 2)


@pytest.fixture(scope="session")
def golden():
    return json.loads((Path(__file__).parent / "data" / "golden.json").read_text())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
