import itertools

import pytest


def brute_is_sidon(elems):
    """Quadruple loop: a + b = c + d with {a, b} != {c, d}."""
    for a, b in itertools.combinations_with_replacement(elems, 2):
        for c, d in itertools.combinations_with_replacement(elems, 2):
            if (a, b) != (c, d) and a + b == c + d:
                return False
    return True


@pytest.fixture
def small_sets():
    return [(1, 2, 5, 11), (1, 2, 4, 8, 13), (1,), (), (3, 7)]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
