import itertools

import pytest
from hypothesis import strategies as st

from stirtree.generators import stirling_from_trace


def is_stirling_bruteforce(seq):
    """Definition check: each value twice, everything between the copies of i exceeds i."""
    seq = list(seq)
    if len(seq) % 2:
        return False
    n = len(seq) // 2
    if sorted(seq) != sorted(list(range(1, n + 1)) * 2):
        return False
    for i in range(1, n + 1):
        first = seq.index(i)
        second = seq.index(i, first + 1)
        if any(v <= i for v in seq[first + 1:second]):
            return False
    return True


def stirling_bruteforce(n):
    """All Stirling permutations of size n by filtering multiset permutations."""
    base = [v for v in range(1, n + 1) for _ in range(2)]
    return {p for p in set(itertools.permutations(base)) if is_stirling_bruteforce(p)}


@st.composite
def growth_traces(draw, min_n=1, max_n=40):
    n = draw(st.integers(min_n, max_n))
    return [draw(st.integers(0, 2 * k)) for k in range(1, n)]


@st.composite
def stirling_perms(draw, min_n=1, max_n=40):
    return stirling_from_trace(draw(growth_traces(min_n, max_n)))


@pytest.fixture(scope="session")
def bruteforce_sets():
    return {n: stirling_bruteforce(n) for n in range(1, 5)}


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    def log(criterion, title, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion:>2}: {title} -- {detail}"
        _ACCEPTANCE_LINES.append((criterion, line))
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
