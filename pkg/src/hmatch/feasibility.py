"""Hereditary feasibility oracles over load vectors.

Every oracle answers one question: is this vector of per-college counts
allowed? Verdicts depend on counts only, never on which students fill the
seats. Each shipped family is downward closed by construction;
:func:`verify_hereditary` checks that claim exhaustively on a box.

A query costs O(m + number of constraints).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .errors import BoxTooLarge, DimensionMismatch, ParseError

MAX_BOX_POINTS = 10**7


@dataclass(frozen=True)
class Capacities:
    """Each college ``c`` admits at most ``q[c]`` students."""

    q: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(int(x) for x in self.q))

    @property
    def dim(self) -> int:
        return len(self.q)

    def is_feasible(self, load: Sequence[int]) -> bool:
        for v, cap in zip(load, self.q):
            if v > cap:
                return False
        return True

    def box(self) -> tuple[int | None, ...]:
        return self.q

    def to_dict(self) -> dict:
        return {"type": "capacities", "q": list(self.q)}


@dataclass(frozen=True)
class RegionalCaps:
    """College ``c`` belongs to region ``regions[c]``; region ``r`` holds at most ``caps[r]``."""

    regions: tuple[int, ...]
    caps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "regions", tuple(int(x) for x in self.regions))
        object.__setattr__(self, "caps", tuple(int(x) for x in self.caps))
        for r in self.regions:
            if not 0 <= r < len(self.caps):
                raise ParseError(f"region index {r} has no cap")

    @property
    def dim(self) -> int:
        return len(self.regions)

    def is_feasible(self, load: Sequence[int]) -> bool:
        used = [0] * len(self.caps)
        for v, r in zip(load, self.regions):
            used[r] += v
        for u, cap in zip(used, self.caps):
            if u > cap:
                return False
        return True

    def box(self) -> tuple[int | None, ...]:
        return tuple(self.caps[r] for r in self.regions)

    def to_dict(self) -> dict:
        return {"type": "regional", "regions": list(self.regions), "caps": list(self.caps)}


@dataclass(frozen=True)
class Multidimensional:
    """Placing one student at ``c`` consumes ``demand[c][d]`` of resource ``d``.

    Feasible iff the total use of every resource stays within ``limits[d]``.
    Demands must be non-negative, which is what makes the family hereditary.
    """

    demand: tuple[tuple[int, ...], ...]
    limits: tuple[int, ...]

    def __post_init__(self):
        demand = tuple(tuple(int(x) for x in row) for row in self.demand)
        limits = tuple(int(x) for x in self.limits)
        for row in demand:
            if len(row) != len(limits):
                raise DimensionMismatch("each demand row needs one entry per resource")
            if any(x < 0 for x in row):
                raise ParseError("resource demands must be non-negative")
        object.__setattr__(self, "demand", demand)
        object.__setattr__(self, "limits", limits)

    @property
    def dim(self) -> int:
        return len(self.demand)

    def is_feasible(self, load: Sequence[int]) -> bool:
        for d, limit in enumerate(self.limits):
            if sum(v * row[d] for v, row in zip(load, self.demand)) > limit:
                return False
        return True

    def box(self) -> tuple[int | None, ...]:
        out = []
        for row in self.demand:
            bounds = [lim // x for x, lim in zip(row, self.limits) if x > 0]
            out.append(min(bounds) if bounds else None)
        return tuple(out)

    def to_dict(self) -> dict:
        return {"type": "multidim", "demand": [list(r) for r in self.demand], "limits": list(self.limits)}


@dataclass(frozen=True)
class Explicit:
    """The downward closure of a finite set of maximal vectors.

    Dominated or repeated points passed in are dropped, so ``maximal`` is
    always an antichain.
    """

    dim: int
    maximal: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        pts = {tuple(int(x) for x in p) for p in self.maximal}
        for p in pts:
            if len(p) != self.dim:
                raise DimensionMismatch(f"point {p} is not {self.dim}-dimensional")
        keep = [p for p in pts if not any(q != p and _leq(p, q) for q in pts)]
        object.__setattr__(self, "maximal", tuple(sorted(keep)))

    def is_feasible(self, load: Sequence[int]) -> bool:
        return any(_leq(load, p) for p in self.maximal)

    def box(self) -> tuple[int | None, ...]:
        return tuple(max((p[i] for p in self.maximal), default=0) for i in range(self.dim))

    def to_dict(self) -> dict:
        return {"type": "explicit", "maximal": [list(p) for p in self.maximal]}


@dataclass(frozen=True)
class Conjunction:
    """Feasible iff every part is; an empty conjunction accepts everything."""

    dim: int
    parts: tuple[Any, ...]

    def is_feasible(self, load: Sequence[int]) -> bool:
        for part in self.parts:
            if not part.is_feasible(load):
                return False
        return True

    def box(self) -> tuple[int | None, ...]:
        out: list[int | None] = [None] * self.dim
        for part in self.parts:
            for i, b in enumerate(part.box()):
                if b is not None and (out[i] is None or b < out[i]):
                    out[i] = b
        return tuple(out)

    def to_dict(self) -> dict:
        return {"type": "conjunction", "parts": [p.to_dict() for p in self.parts]}


ConstraintSpec = Capacities | RegionalCaps | Multidimensional | Explicit | Conjunction


def _leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def conjunction(*specs: Any, dim: int | None = None) -> Conjunction:
    if dim is None:
        if not specs:
            raise DimensionMismatch("an empty conjunction needs an explicit dim")
        dim = specs[0].dim
    for spec in specs:
        if spec.dim != dim:
            raise DimensionMismatch(f"conjunct has dimension {spec.dim}, expected {dim}")
    return Conjunction(dim, tuple(specs))


def is_feasible(oracle: Any, load: Sequence[int]) -> bool:
    dim = getattr(oracle, "dim", None)
    if dim is not None and len(load) != dim:
        raise DimensionMismatch(f"load vector has {len(load)} entries, oracle expects {dim}")
    return bool(_query(oracle)(tuple(load)))


def matching_feasible(instance, matching) -> bool:
    from .core import load_vector

    return instance.feasibility.is_feasible(load_vector(instance, matching))


def spec_from_dict(data: dict, dim: int) -> ConstraintSpec:
    """Rebuild a spec from its JSON form (see ``to_dict`` on each family)."""
    try:
        kind = data["type"]
        if kind == "capacities":
            spec = Capacities(tuple(data["q"]))
        elif kind == "regional":
            spec = RegionalCaps(tuple(data["regions"]), tuple(data["caps"]))
        elif kind == "multidim":
            spec = Multidimensional(tuple(map(tuple, data["demand"])), tuple(data["limits"]))
        elif kind == "explicit":
            spec = Explicit(dim, tuple(map(tuple, data["maximal"])))
        elif kind == "conjunction":
            spec = conjunction(*(spec_from_dict(p, dim) for p in data["parts"]), dim=dim)
        else:
            raise ParseError(f"unknown feasibility type {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError | DimensionMismatch):
            raise
        raise ParseError(f"malformed feasibility spec: {exc}") from exc
    if spec.dim != dim:
        raise DimensionMismatch(f"{data['type']} spec has dimension {spec.dim}, expected {dim}")
    return spec


def _query(oracle: Any) -> Callable[[tuple[int, ...]], bool]:
    return oracle.is_feasible if hasattr(oracle, "is_feasible") else oracle


@dataclass(frozen=True)
class HeredityCheck:
    """Outcome of :func:`verify_hereditary`; truthy iff the family is hereditary.

    ``counterexample`` is ``(feasible, infeasible)`` with the second vector
    strictly below the first. When the zero vector is rejected the first
    entry is any feasible vector in the box, or ``None`` if there is none.
    """

    ok: bool
    counterexample: tuple[tuple[int, ...] | None, tuple[int, ...]] | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_hereditary(oracle: Any, box: Sequence[int] | int, dim: int | None = None) -> HeredityCheck:
    """Exhaustively test downward closure of ``oracle`` on ``[0, box]``.

    Only cover pairs (v, v - e_i) are compared; on a box that suffices.
    ``oracle`` may be a spec or a plain callable on tuples.
    """
    if isinstance(box, int):
        dim = dim if dim is not None else getattr(oracle, "dim", None)
        if dim is None:
            raise DimensionMismatch("scalar box needs a dimension")
        box = (box,) * dim
    box = tuple(int(b) for b in box)
    odim = getattr(oracle, "dim", None)
    if odim is not None and odim != len(box):
        raise DimensionMismatch(f"box has {len(box)} entries, oracle expects {odim}")
    shape = tuple(b + 1 for b in box)
    if math.prod(shape) > MAX_BOX_POINTS:
        raise BoxTooLarge(f"{math.prod(shape)} points exceeds {MAX_BOX_POINTS}")

    query = _query(oracle)
    feasible = np.zeros(shape, dtype=bool)
    for point in itertools.product(*(range(n) for n in shape)):
        feasible[point] = bool(query(point))

    zero = (0,) * len(box)
    if not feasible[zero]:
        hits = np.argwhere(feasible)
        witness = tuple(int(x) for x in hits[0]) if len(hits) else None
        return HeredityCheck(False, (witness, zero))
    for axis in range(len(box)):
        upper = [slice(None)] * len(box)
        lower = [slice(None)] * len(box)
        upper[axis] = slice(1, None)
        lower[axis] = slice(None, -1)
        bad = feasible[tuple(upper)] & ~feasible[tuple(lower)]
        if bad.any():
            hi = [int(x) for x in np.argwhere(bad)[0]]
            hi[axis] += 1
            lo = list(hi)
            lo[axis] -= 1
            return HeredityCheck(False, (tuple(hi), tuple(lo)))
    return HeredityCheck(True)


def random_hereditary_oracle(rng: np.random.Generator, m: int, box: Sequence[int] | int, max_points: int = 3) -> Explicit:
    """Downward closure of 1..max_points random vectors drawn uniformly from the box."""
    if m < 1:
        raise DimensionMismatch("m must be at least 1")
    bounds = (box,) * m if isinstance(box, int) else tuple(box)
    if len(bounds) != m:
        raise DimensionMismatch(f"box has {len(bounds)} entries, expected {m}")
    n_points = int(rng.integers(1, max_points + 1))
    points = [tuple(int(rng.integers(0, b + 1)) for b in bounds) for _ in range(n_points)]
    return Explicit(m, tuple(points))
