import pytest

import acceptance_log

from helpers import BARBELL, TWO_TRIANGLES
from keypapers.graph import CitationGraph, UndirectedGraph


@pytest.fixture
def fig2_graph():
    # A, B cited by C; C cited by D and E
    years = {"A": 1990, "B": 1991, "C": 1995, "D": 2000, "E": 2001}
    return CitationGraph(years, [("C", "A"), ("C", "B"), ("D", "C"), ("E", "C")])


@pytest.fixture
def barbell():
    return UndirectedGraph("abcdef", BARBELL)


@pytest.fixture
def two_triangles():
    return UndirectedGraph("abcdef", TWO_TRIANGLES)


def pytest_terminal_summary(terminalreporter):
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
