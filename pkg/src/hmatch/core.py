"""Instances, matchings and the rank/score arithmetic everything else uses.

Students and colleges are dense 0-based indices internally. Labels such as
``s1`` / ``c3`` are 1-based and only appear at the I/O boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Iterable, Mapping, Sequence

from .errors import (
    DimensionMismatch,
    DuplicateInPreference,
    IdOutOfRange,
    Inconsistent,
    PriorityNotPermutation,
)

UNMATCHED = None


class Preference(IntEnum):
    WORSE = -1
    EQUAL = 0
    BETTER = 1


def student_label(s: int) -> str:
    return f"s{s + 1}"


def college_label(c: int) -> str:
    return f"c{c + 1}"


def parse_label(label: str, prefix: str, bound: int) -> int:
    """Inverse of ``student_label``/``college_label``; raises IdOutOfRange."""
    if not isinstance(label, str) or not label.startswith(prefix) or not label[len(prefix):].isdigit():
        raise IdOutOfRange(f"bad {prefix!r} label: {label!r}")
    idx = int(label[len(prefix):]) - 1
    if not 0 <= idx < bound:
        raise IdOutOfRange(f"{label} out of range 1..{bound}")
    return idx


@dataclass(frozen=True, eq=False)
class Instance:
    """A validated market: truncated student preferences, total college priorities, oracle.

    A contract (s, c) exists iff ``c`` appears in ``student_prefs[s]``.
    Build through :func:`validate_instance` unless the data is known good.
    """

    n_students: int
    n_colleges: int
    student_prefs: tuple[tuple[int, ...], ...]
    college_priorities: tuple[tuple[int, ...], ...]
    feasibility: Any
    # pref_rank[s][c]: 0-based position in s's list; len(list) means unmatched,
    # len(list) + 1 marks an unacceptable college.
    pref_rank: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    # priority_rank[c][s]: 0-based position of s in c's priority order.
    priority_rank: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        pref_rank = []
        for prefs in self.student_prefs:
            row = [len(prefs) + 1] * self.n_colleges
            for pos, c in enumerate(prefs):
                row[c] = pos
            pref_rank.append(tuple(row))
        prio_rank = []
        for order in self.college_priorities:
            row = [0] * self.n_students
            for pos, s in enumerate(order):
                row[s] = pos
            prio_rank.append(tuple(row))
        object.__setattr__(self, "pref_rank", tuple(pref_rank))
        object.__setattr__(self, "priority_rank", tuple(prio_rank))

    @property
    def students(self) -> range:
        return range(self.n_students)

    @property
    def colleges(self) -> range:
        return range(self.n_colleges)

    def option_rank(self, s: int, option: int | None) -> int:
        """Rank of ``option`` for ``s``; smaller is better, ``None`` is unmatched."""
        if option is None:
            return len(self.student_prefs[s])
        return self.pref_rank[s][option]

    def acceptable(self, s: int, c: int) -> bool:
        return self.pref_rank[s][c] < len(self.student_prefs[s])


def validate_instance(
    n_students: int,
    n_colleges: int,
    student_prefs: Iterable[Iterable[int]],
    college_priorities: Iterable[Iterable[int]],
    feasibility: Any,
) -> Instance:
    """Check raw 0-based data and freeze it into an :class:`Instance`."""
    if n_students < 0 or n_colleges < 0:
        raise IdOutOfRange("counts must be non-negative")
    prefs = tuple(tuple(int(c) for c in p) for p in student_prefs)
    prios = tuple(tuple(int(s) for s in p) for p in college_priorities)
    if len(prefs) != n_students:
        raise IdOutOfRange(f"expected {n_students} preference lists, got {len(prefs)}")
    if len(prios) != n_colleges:
        raise IdOutOfRange(f"expected {n_colleges} priority lists, got {len(prios)}")
    for s, p in enumerate(prefs):
        for c in p:
            if not 0 <= c < n_colleges:
                raise IdOutOfRange(f"{student_label(s)} lists unknown college index {c}")
        if len(set(p)) != len(p):
            raise DuplicateInPreference(f"{student_label(s)} lists a college twice: {p}")
    everyone = set(range(n_students))
    for c, p in enumerate(prios):
        for s in p:
            if not 0 <= s < n_students:
                raise IdOutOfRange(f"{college_label(c)} ranks unknown student index {s}")
        if len(p) != n_students or set(p) != everyone:
            raise PriorityNotPermutation(f"{college_label(c)} priority is not a permutation of all students")
    dim = getattr(feasibility, "dim", n_colleges)
    if dim != n_colleges:
        raise DimensionMismatch(f"oracle has dimension {dim}, instance has {n_colleges} colleges")
    return Instance(n_students, n_colleges, prefs, prios, feasibility)


@dataclass(frozen=True)
class Matching:
    """Per-student assignment; ``None`` means unmatched."""

    assignment: tuple[int | None, ...]

    @classmethod
    def empty(cls, n_students: int) -> Matching:
        return cls((None,) * n_students)

    @classmethod
    def from_pairs(cls, n_students: int, pairs: Iterable[tuple[int, int]]) -> Matching:
        out: list[int | None] = [None] * n_students
        for s, c in pairs:
            if out[s] is not None:
                raise Inconsistent(f"{student_label(s)} assigned twice")
            out[s] = c
        return cls(tuple(out))

    def __getitem__(self, s: int) -> int | None:
        return self.assignment[s]

    def __len__(self) -> int:
        return len(self.assignment)

    def pairs(self) -> list[tuple[int, int]]:
        return [(s, c) for s, c in enumerate(self.assignment) if c is not None]

    def moved(self, s: int, c: int | None) -> Matching:
        """(Y minus Y_s) plus (s, c)."""
        a = list(self.assignment)
        a[s] = c
        return Matching(tuple(a))

    def to_labels(self) -> dict[str, str]:
        return {student_label(s): college_label(c) for s, c in self.pairs()}

    @classmethod
    def from_labels(cls, n_students: int, n_colleges: int, labels: Mapping[str, str]) -> Matching:
        pairs = [
            (parse_label(s, "s", n_students), parse_label(c, "c", n_colleges))
            for s, c in labels.items()
        ]
        return cls.from_pairs(n_students, pairs)


def check_matching(instance: Instance, matching: Matching) -> None:
    """Raise :class:`Inconsistent` unless every contract in ``matching`` exists."""
    if len(matching) != instance.n_students:
        raise Inconsistent(f"matching covers {len(matching)} students, instance has {instance.n_students}")
    for s, c in matching.pairs():
        if not 0 <= c < instance.n_colleges:
            raise Inconsistent(f"{student_label(s)} assigned to unknown college index {c}")
        if not instance.acceptable(s, c):
            raise Inconsistent(f"{student_label(s)} assigned to unlisted {college_label(c)}")


def score_of(instance: Instance, c: int, s: int) -> int:
    """|S| - rank + 1 with 1-based rank; the top student scores |S|."""
    return instance.n_students - instance.priority_rank[c][s]


def student_at_score(instance: Instance, c: int, score: int) -> int:
    return instance.college_priorities[c][instance.n_students - score]


def prefers(instance: Instance, s: int, a: int | None, b: int | None) -> Preference:
    """How ``s`` ranks option ``a`` against option ``b`` (``None`` = unmatched)."""
    ra, rb = instance.option_rank(s, a), instance.option_rank(s, b)
    if ra < rb:
        return Preference.BETTER
    if ra > rb:
        return Preference.WORSE
    return Preference.EQUAL


def load_vector(instance: Instance, matching: Matching | Sequence[int | None]) -> tuple[int, ...]:
    load = [0] * instance.n_colleges
    for c in (matching.assignment if isinstance(matching, Matching) else matching):
        if c is not None:
            load[c] += 1
    return tuple(load)
