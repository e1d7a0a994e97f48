"""Shared small markets, written with 1-based labels."""

import pytest

from hmatch.core import Matching, validate_instance
from hmatch.feasibility import Capacities, RegionalCaps, conjunction


def build(prefs, priorities, feasibility):
    """prefs/priorities use 1-based ids as in the printed examples."""
    return validate_instance(
        len(prefs),
        len(priorities),
        [[c - 1 for c in p] for p in prefs],
        [[s - 1 for s in p] for p in priorities],
        feasibility,
    )


def total_cap(m, cap, per_college=None):
    parts = [RegionalCaps((0,) * m, (cap,))]
    if per_college is not None:
        parts.insert(0, Capacities((per_college,) * m))
    return conjunction(*parts)


def pairs(n, *ps):
    """Matching from 1-based (student, college) pairs."""
    return Matching.from_pairs(n, [(s - 1, c - 1) for s, c in ps])


def fixture_a():
    return build([[1, 2], [2, 1]], [[2, 1], [1, 2]], total_cap(2, 1))


def fixture_b():
    return build([[1], [1], [1]], [[1, 2, 3]], Capacities((2,)))


def fixture_c():
    return build(
        [[2, 1], [1, 2], [2, 1]],
        [[1, 2, 3], [3, 2, 1]],
        total_cap(2, 2, per_college=1),
    )


def fixture_d():
    return build(
        [[3, 1, 2], [2, 3, 1], [3, 2, 1], [3, 2, 1]],
        [[1, 2, 3, 4], [1, 2, 3, 4], [4, 3, 2, 1]],
        total_cap(3, 3, per_college=2),
    )


def fixture_e(n):
    """Cyclic market: s_i ranks c_i first; c_i ranks s_{i+1} first; one seat overall."""
    prefs = [[(i + j) % n + 1 for j in range(n)] for i in range(n)]
    prios = [[(i + 1 + j) % n + 1 for j in range(n)] for i in range(n)]
    return build(prefs, prios, total_cap(n, 1))


# The four non-empty feasible matchings of fixture A.
def fixture_a_matchings():
    return {
        "Y1": pairs(2, (1, 1)),
        "Y2": pairs(2, (1, 2)),
        "Y3": pairs(2, (2, 1)),
        "Y4": pairs(2, (2, 2)),
    }


Y6 = ((1, 3), (2, 2), (3, 3))


@pytest.fixture
def inst_a():
    return fixture_a()


@pytest.fixture
def inst_b():
    return fixture_b()


@pytest.fixture
def inst_c():
    return fixture_c()


@pytest.fixture
def inst_d():
    return fixture_d()


# Acceptance verdicts, printed once at the end of the session.
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion, ok, detail=""):
    ACCEPTANCE[criterion] = (bool(ok), detail)
    return bool(ok)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda s: (len(s), s)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
