"""Shared fixtures: canonical puzzles and lazily loaded fixture bundles."""

from __future__ import annotations

import pytest

from sudoku_l1.puzzle import parse_puzzle

# 17-clue puzzle with a non-unique relaxation (its completion is unique);
# the flagship worked example for certificates, key cells, and repair.
FIG1_TEXT = (
    "040600005000070100000000802000021000090000030"
    "000008000000400070105000000200000000"
)

# first TypeI member of the generated corpus, pinned for cheap single-puzzle
# tests (unique relaxation: the LP returns the completion directly)
TYPEI_TEXT = (
    "000000080060803140000510000040000200502040000"
    "980300007009020806800070000076000000"
)


@pytest.fixture(scope="session")
def fig1():
    return parse_puzzle(FIG1_TEXT)


@pytest.fixture(scope="session")
def typei_puzzle():
    return parse_puzzle(TYPEI_TEXT)


@pytest.fixture(scope="session")
def mixed_bundle():
    from sudoku_l1.datasets import load_bundle

    return load_bundle("mixed_1000")


@pytest.fixture(scope="session")
def typeii_bundle():
    from sudoku_l1.datasets import load_bundle

    return load_bundle("typeii_200")


@pytest.fixture(scope="session")
def seventeen_bundle():
    from sudoku_l1.datasets import load_bundle

    return load_bundle("seventeen_25")


# One line per acceptance criterion, echoed after the test summary (terminal
# sections are written outside pytest's output capture, so the lines are
# visible for passing criteria too).
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
