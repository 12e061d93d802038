from __future__ import annotations

import pytest

from zetaforms.params import ProofParameters
from zetaforms.sieve import build_sieve_sets


@pytest.fixture(scope="session")
def config_a() -> ProofParameters:
    return ProofParameters(1, (0,), r=1, s=6, B=1)


@pytest.fixture(scope="session")
def config_b() -> ProofParameters:
    return ProofParameters(7, (0, 1), r=1, s=8, B=1)


@pytest.fixture(scope="session")
def sieve_a(config_a):
    return build_sieve_sets(1, 1, 1)


@pytest.fixture(scope="session")
def sieve_b(config_b):
    return build_sieve_sets(1, 7, 1)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
