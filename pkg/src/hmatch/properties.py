"""Exact checkers for envy, claims and objections, plus brute-force search.

All checkers assume the matching is feasible; they do not re-verify it.
Counting is done per college by walking its priority order once, so a full
pass over a matching costs O(|S| * |C|) comparisons and at most |S| * |C|
oracle queries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .core import Instance, Matching, load_vector
from .errors import InstanceTooLarge

MAX_ENUMERATION = 10**7


@dataclass(frozen=True)
class EnvyEdge:
    envier: int
    envied: int
    at_college: int


@dataclass(frozen=True)
class Claim:
    """``claimant`` could feasibly move to ``college``; ``objectors`` would then envy them."""

    claimant: int
    college: int
    objectors: frozenset[int]


def _current_ranks(instance: Instance, matching: Matching) -> list[int]:
    return [instance.option_rank(s, c) for s, c in enumerate(matching.assignment)]


def envy_edges(instance: Instance, matching: Matching) -> list[EnvyEdge]:
    cur = _current_ranks(instance, matching)
    edges = []
    for s2, c in matching.pairs():
        prio = instance.priority_rank[c]
        for s in instance.students:
            if prio[s] < prio[s2] and instance.pref_rank[s][c] < cur[s]:
                edges.append(EnvyEdge(s, s2, c))
    return edges


def envy_set(instance: Instance, matching: Matching, s: int) -> set[int]:
    """Students whom ``s`` justifiably envies."""
    cur = instance.option_rank(s, matching[s])
    out = set()
    for s2, c in matching.pairs():
        if instance.pref_rank[s][c] < cur and instance.priority_rank[c][s] < instance.priority_rank[c][s2]:
            out.add(s2)
    return out


def envied_by_set(instance: Instance, matching: Matching, s: int) -> set[int]:
    """Students who justifiably envy ``s``."""
    c = matching[s]
    if c is None:
        return set()
    prio = instance.priority_rank[c]
    return {
        s2
        for s2 in instance.students
        if prio[s2] < prio[s] and instance.pref_rank[s2][c] < instance.option_rank(s2, matching[s2])
    }


def envy_received_counts(instance: Instance, matching: Matching) -> list[int]:
    """``|Evd(Y, s)|`` for every student."""
    cur = _current_ranks(instance, matching)
    counts = [0] * instance.n_students
    assignment = matching.assignment
    for c in instance.colleges:
        wanting_above = 0
        for s in instance.college_priorities[c]:
            if assignment[s] == c:
                counts[s] = wanting_above
            elif instance.pref_rank[s][c] < cur[s]:
                wanting_above += 1
    return counts


def envy_given_counts(instance: Instance, matching: Matching) -> list[int]:
    """``|Ev(Y, s)|`` for every student."""
    cur = _current_ranks(instance, matching)
    counts = [0] * instance.n_students
    assignment = matching.assignment
    for c in instance.colleges:
        seated_below = 0
        for s in reversed(instance.college_priorities[c]):
            if assignment[s] == c:
                seated_below += 1
            elif instance.pref_rank[s][c] < cur[s]:
                counts[s] += seated_below
    return counts


def is_er_k(instance: Instance, matching: Matching, k: int) -> bool:
    return min_er_index(instance, matching) <= k


def is_fair(instance: Instance, matching: Matching) -> bool:
    return is_er_k(instance, matching, 0)


def is_ef_k(instance: Instance, matching: Matching, k: int) -> bool:
    return max(envy_given_counts(instance, matching), default=0) <= k


def min_er_index(instance: Instance, matching: Matching) -> int:
    """Smallest k for which the matching is ER-k."""
    return max(envy_received_counts(instance, matching), default=0)


def _scan_claims(instance: Instance, matching: Matching) -> Iterator[tuple[int, int, list[int]]]:
    """Yield ``(claimant, college, objectors-above-claimant)`` per claim.

    The objector list is shared and grows as the scan proceeds; callers must
    copy or measure it immediately.
    """
    cur = _current_ranks(instance, matching)
    load = list(load_vector(instance, matching))
    feasible = instance.feasibility.is_feasible
    assignment = matching.assignment
    for c in instance.colleges:
        blocked: list[int] = []
        for s in instance.college_priorities[c]:
            if instance.pref_rank[s][c] >= cur[s]:
                continue
            old = assignment[s]
            load[c] += 1
            if old is not None:
                load[old] -= 1
            movable = feasible(load)
            load[c] -= 1
            if old is not None:
                load[old] += 1
            if movable:
                yield s, c, blocked
            else:
                blocked.append(s)


def claims_of(instance: Instance, matching: Matching) -> list[Claim]:
    """Every empty-seat claim with its objectors, sorted by (claimant, college)."""
    claims = [Claim(s, c, frozenset(obj)) for s, c, obj in _scan_claims(instance, matching)]
    claims.sort(key=lambda cl: (cl.claimant, cl.college))
    return claims


def objection_counts(instance: Instance, matching: Matching) -> list[int]:
    """Number of objectors for each claim (unordered)."""
    return [len(obj) for _, _, obj in _scan_claims(instance, matching)]


def is_nw_k(instance: Instance, matching: Matching, k: int) -> bool:
    """No claim has k or fewer objectors."""
    return all(n > k for n in objection_counts(instance, matching))


def is_cnw(instance: Instance, matching: Matching) -> bool:
    return is_nw_k(instance, matching, 0)


def is_nonwasteful(instance: Instance, matching: Matching) -> bool:
    return is_nw_k(instance, matching, instance.n_students)


def is_stable(instance: Instance, matching: Matching) -> bool:
    return is_fair(instance, matching) and is_nonwasteful(instance, matching)


def enumerate_feasible_matchings(instance: Instance) -> Iterator[Matching]:
    """Every feasible matching exactly once, the empty one first.

    Infeasible partial assignments are pruned: under heredity no extension
    of an infeasible prefix can be feasible.
    """
    size = math.prod(len(p) + 1 for p in instance.student_prefs)
    if size > MAX_ENUMERATION:
        raise InstanceTooLarge(f"{size} candidate matchings exceeds {MAX_ENUMERATION}")
    n = instance.n_students
    feasible = instance.feasibility.is_feasible
    assignment: list[int | None] = [None] * n
    load = [0] * instance.n_colleges

    def extend(s: int) -> Iterator[Matching]:
        if s == n:
            yield Matching(tuple(assignment))
            return
        yield from extend(s + 1)
        for c in instance.student_prefs[s]:
            load[c] += 1
            if feasible(load):
                assignment[s] = c
                yield from extend(s + 1)
                assignment[s] = None
            load[c] -= 1

    if not feasible(load):
        return
    yield from extend(0)


def exists_matching(instance: Instance, er_k: int, nw_k: int) -> Matching | None:
    """Some feasible matching that is both ER-``er_k`` and NW-``nw_k``, if any."""
    for matching in enumerate_feasible_matchings(instance):
        if is_er_k(instance, matching, er_k) and is_nw_k(instance, matching, nw_k):
            return matching
    return None
