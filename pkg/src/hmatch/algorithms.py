"""Constructions of ER-k and NW-k matchings.

Three procedures are provided:

* :func:`construct_er_nw`: the generic improvement loop. Any student with
  an empty-seat claim whose move keeps the matching ER-k is moved, until no
  such move remains.
* :func:`k_cutoff`: the k-admissible cutoff algorithm. Colleges are scanned
  in index order below a moving cutoff score.
* :func:`k_spda`: the same search phrased as college-proposing deferred
  acceptance restricted to k-admissible proposals.

Students only ever move to colleges they strictly prefer. Each student moves
at most ``len(prefs)`` times, so both cutoff-style algorithms issue at most
``ORACLE_QUERY_FACTOR * |S|**2 * |C|**2`` feasibility queries.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Sequence

from .core import Instance, Matching, load_vector, score_of
from .errors import SelfCheckFailed

# (reassignments + 1) * |C| scans of at most |S| queries each, with
# reassignments <= |S| * |C|.
ORACLE_QUERY_FACTOR = 2


def query_ceiling(instance: Instance) -> int:
    return ORACLE_QUERY_FACTOR * instance.n_students**2 * max(instance.n_colleges, 1) ** 2


@dataclass(frozen=True)
class TraceEvent:
    kind: str  # examine | propose | assign | reset | cutoff
    college: int
    student: int | None = None
    previous: int | None = None  # assign: old college; cutoff: old score
    value: int | None = None  # cutoff: new score

    def to_json(self) -> str:
        return json.dumps({k: v for k, v in asdict(self).items() if v is not None})


@dataclass
class AlgoTrace:
    events: list[TraceEvent] = field(default_factory=list)
    oracle_queries: int = 0

    def log(self, kind: str, college: int, student: int | None = None, previous: int | None = None, value: int | None = None) -> None:
        self.events.append(TraceEvent(kind, college, student, previous, value))

    def replay(self, n_students: int) -> Matching:
        """Rebuild the output matching from the assign events alone."""
        assignment: list[int | None] = [None] * n_students
        for ev in self.events:
            if ev.kind == "assign":
                assignment[ev.student] = ev.college
        return Matching(tuple(assignment))

    def matchings(self, n_students: int) -> list[Matching]:
        """The matching after each assign event, starting from the empty one."""
        assignment: list[int | None] = [None] * n_students
        out = [Matching(tuple(assignment))]
        for ev in self.events:
            if ev.kind == "assign":
                assignment[ev.student] = ev.college
                out.append(Matching(tuple(assignment)))
        return out

    def to_jsonl(self) -> str:
        return "".join(ev.to_json() + "\n" for ev in self.events)


class AlgorithmResult(NamedTuple):
    matching: Matching
    cutoffs: tuple[int, ...]
    trace: AlgoTrace


def k_admissible(instance: Instance, matching: Matching, s: int, c: int, k: int) -> bool:
    """Moving ``s`` to ``c`` stays feasible and at most ``k`` students envy ``s`` afterwards."""
    moved = matching.moved(s, c)
    if not instance.feasibility.is_feasible(load_vector(instance, moved)):
        return False
    prio = instance.priority_rank[c]
    enviers = 0
    for t in instance.students:
        if prio[t] < prio[s] and instance.pref_rank[t][c] < instance.option_rank(t, moved[t]):
            enviers += 1
    return enviers <= k


def compute_cutoff(instance: Instance, matching: Matching, c: int) -> int:
    """Score of the cutoff student at ``c``; |S|+1 when it is the imaginary top student.

    The cutoff student closes the longest prefix of ``c``'s priority order
    in which everyone weakly prefers their assignment to ``c``.
    """
    satisfied = 0
    for s in instance.college_priorities[c]:
        if instance.pref_rank[s][c] < instance.option_rank(s, matching[s]):
            break
        satisfied += 1
    return instance.n_students + 1 - satisfied


def _update_cutoff(instance: Instance, cur: Sequence[int], c: int, cutoff: int) -> int:
    n = instance.n_students
    order = instance.college_priorities[c]
    col = [instance.pref_rank[s][c] for s in order]
    out = cutoff
    for pos in range(n - cutoff + 1, n):
        if col[pos] < cur[order[pos]]:
            return out
        out -= 1
        if out == 1:
            return out
    return out


def update_cutoff(instance: Instance, matching: Matching, c: int, cutoff: int) -> int:
    """Lower ``cutoff`` past every student below it who does not strictly prefer ``c``.

    Stops at the first student who strictly prefers ``c``; bottoms out at 1.
    """
    cur = [instance.option_rank(s, a) for s, a in enumerate(matching.assignment)]
    return _update_cutoff(instance, cur, c, cutoff)


class _State:
    """Mutable matching state shared by the cutoff-style algorithms."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.assignment: list[int | None] = [None] * instance.n_students
        self.cur = [len(p) for p in instance.student_prefs]
        self.load = [0] * instance.n_colleges
        self.feasible = instance.feasibility.is_feasible
        self.trace = AlgoTrace()

    def can_move(self, s: int, c: int) -> bool:
        old = self.assignment[s]
        load = self.load
        load[c] += 1
        if old is not None:
            load[old] -= 1
        self.trace.oracle_queries += 1
        ok = self.feasible(load)
        load[c] -= 1
        if old is not None:
            load[old] += 1
        return ok

    def move(self, s: int, c: int) -> None:
        old = self.assignment[s]
        self.load[c] += 1
        if old is not None:
            self.load[old] -= 1
        self.assignment[s] = c
        self.cur[s] = self.instance.pref_rank[s][c]
        self.trace.log("assign", c, s, previous=old)

    def wants(self, s: int, c: int) -> bool:
        return self.instance.pref_rank[s][c] < self.cur[s]

    def matching(self) -> Matching:
        return Matching(tuple(self.assignment))


def _run_cutoff_loop(instance: Instance, k: int, propose_first: bool) -> AlgorithmResult:
    n, m = instance.n_students, instance.n_colleges
    state = _State(instance)
    trace = state.trace
    cutoffs = [n + 1] * m
    in_stack = [False] * m
    stack_size = 0
    while stack_size < m:
        c = in_stack.index(False)
        trace.log("examine", c)
        order = instance.college_priorities[c]
        start = n - cutoffs[c] + 1
        # Students above the cutoff never want c, but counting them keeps the
        # envy tally exact without relying on that invariant.
        wanting_above = sum(1 for s in order[:start] if state.wants(s, c))
        moved = False
        for pos in range(start, n):
            s = order[pos]
            wants = state.wants(s, c)
            if propose_first:
                # Propose when k-admissible; the student accepts only a strictly better offer.
                if wanting_above <= k and state.can_move(s, c):
                    trace.log("propose", c, s)
                    if wants:
                        state.move(s, c)
                        moved = True
                        continue
            elif wants and wanting_above <= k and state.can_move(s, c):
                state.move(s, c)
                moved = True
                continue
            if wants:
                wanting_above += 1
        new = _update_cutoff(instance, state.cur, c, cutoffs[c])
        trace.log("cutoff", c, previous=cutoffs[c], value=new)
        cutoffs[c] = new
        if moved:
            # A move can make students already passed in this scan movable
            # again, so c stays off the stack and gets rescanned.
            in_stack = [False] * m
            stack_size = 0
            trace.log("reset", c)
        else:
            in_stack[c] = True
            stack_size += 1
    return AlgorithmResult(state.matching(), tuple(cutoffs), trace)


def k_cutoff(instance: Instance, k: int) -> AlgorithmResult:
    """k-admissible cutoff algorithm.

    Repeatedly takes the lowest-index college not on the stack, scans its
    priority list below the cutoff score and moves every student who prefers
    the college and is k-admissible to it. After the scan the cutoff is
    updated. A scan without moves pushes the college onto the stack; a scan
    with moves empties the stack instead, so every college is rescanned
    against the new matching. Stops once every college is on the stack.
    Returns an ER-k and NW-k matching together with the final cutoffs.
    """
    return _run_cutoff_loop(instance, k, propose_first=False)


def k_spda(instance: Instance, k: int) -> AlgorithmResult:
    """College-proposing deferred acceptance restricted to k-admissible proposals.

    Colleges propose to every k-admissible student below their cutoff; a
    student accepts when she strictly prefers the proposer. Produces the same
    matching and cutoffs as :func:`k_cutoff`.
    """
    return _run_cutoff_loop(instance, k, propose_first=True)


SelectionRule = Callable[[Instance, Matching, list[tuple[int, int]]], tuple[int, int]]


def _candidate_pairs(instance: Instance, state: _State, k: int) -> list[tuple[int, int]]:
    """Pairs (s, c) where s can claim c and the move keeps ER-k, ordered by (c, -score)."""
    out = []
    for c in instance.colleges:
        wanting_above = 0
        for s in instance.college_priorities[c]:
            if not state.wants(s, c):
                continue
            # Moving s only adds envy toward s; everyone else's received
            # envy can only shrink, so checking s suffices when Y is ER-k.
            if wanting_above <= k and state.can_move(s, c):
                out.append((s, c))
            wanting_above += 1
    return out


def lexicographic_rule(instance: Instance, matching: Matching, candidates: list[tuple[int, int]]) -> tuple[int, int]:
    """Lowest college index first, then highest score at that college."""
    return min(candidates, key=lambda sc: (sc[1], -score_of(instance, sc[1], sc[0])))


def construct_er_nw(instance: Instance, k: int, selection_rule: SelectionRule | None = None) -> Matching:
    """Generic improvement loop: start empty, apply ER-k-preserving claims until none remain."""
    state = _State(instance)
    limit = sum(len(p) for p in instance.student_prefs)
    for _ in range(limit + 1):
        candidates = _candidate_pairs(instance, state, k)
        if not candidates:
            return state.matching()
        if selection_rule is None:
            s, c = candidates[0]
        else:
            s, c = selection_rule(instance, state.matching(), candidates)
            if (s, c) not in candidates:
                raise ValueError(f"selection rule returned non-candidate pair {(s, c)}")
        state.move(s, c)
    raise SelfCheckFailed("improvement loop exceeded its move bound")


ALGORITHMS = {"alg1": "construct_er_nw", "cutoff": "k_cutoff", "spda": "k_spda"}


def run_algorithm(instance: Instance, k: int, algorithm: str) -> Matching:
    if algorithm == "alg1":
        return construct_er_nw(instance, k)
    if algorithm == "cutoff":
        return k_cutoff(instance, k).matching
    if algorithm == "spda":
        return k_spda(instance, k).matching
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {sorted(ALGORITHMS)}")
