from __future__ import annotations

import functools
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "fixtures"
sys.path.insert(0, str(HERE))

from symucc.solvers import Problem  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def load_problem(name: str) -> Problem:
    return Problem.from_fcidump(FIXTURES / f"{name}.fcidump")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def problem():
    return load_problem


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
