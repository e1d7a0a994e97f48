"""Synthetic college-choice markets with regional caps.

Preferences and priorities are complete rankings drawn from Mallows models
around the identity order. Capacities come from one of three methods, and
colleges are dealt round-robin into regions whose caps are a fixed fraction
of their member colleges' total capacity.

Randomness uses numpy's counter-based Philox generator. ``make_rng(seed, t)``
derives independent stream ``t`` from a master seed, so trials can run in
any order or in parallel and still reproduce.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .core import Instance, validate_instance
from .errors import InvalidConfig, InvalidRange
from .feasibility import Capacities, RegionalCaps, conjunction

CAPACITY_METHODS = ("fixed", "uniform", "normal")
DEFAULT_STD_RATIO = 0.1


def make_rng(seed: int, stream: int | None = None) -> np.random.Generator:
    """Philox generator for ``(seed,)`` or ``(seed, stream)``."""
    entropy = [seed] if stream is None else [seed, stream]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


@dataclass(frozen=True)
class GenConfig:
    n_students: int
    n_colleges: int
    phi_s: float
    phi_c: float
    rho_c: float = 1.0
    capacity_method: str = "normal"
    std_ratio: float | None = None
    capacity_range: tuple[int, int] | None = None
    region_ratio: float = 0.02
    region_capacity_ratio: float = 0.6
    seed: int = 0

    def __post_init__(self):
        if self.n_students < 1 or self.n_colleges < 1:
            raise InvalidConfig("need at least one student and one college")
        for name in ("phi_s", "phi_c", "rho_c"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise InvalidConfig(f"{name} must lie in (0, 1], got {v}")
        if self.capacity_method not in CAPACITY_METHODS:
            raise InvalidConfig(f"capacity_method must be one of {CAPACITY_METHODS}")
        if self.capacity_method == "uniform" and self.capacity_range is None:
            raise InvalidConfig("uniform capacities need capacity_range=(lo, hi)")
        if self.std_ratio is not None and self.std_ratio < 0:
            raise InvalidConfig("std_ratio must be non-negative")
        if self.region_ratio < 0:
            raise InvalidConfig("region_ratio must be non-negative")
        if not 0 <= self.region_capacity_ratio <= 1:
            raise InvalidConfig("region_capacity_ratio must lie in [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> GenConfig:
        data = dict(data)
        if data.get("capacity_range") is not None:
            data["capacity_range"] = tuple(data["capacity_range"])
        try:
            return cls(**data)
        except TypeError as exc:
            raise InvalidConfig(str(exc)) from exc


def mallows_sample(reference: Sequence, phi: float, rng: np.random.Generator) -> list:
    """Repeated insertion: the i-th reference item lands at position j <= i with weight phi**(i - j)."""
    if not 0 < phi <= 1:
        raise InvalidConfig(f"phi must lie in (0, 1], got {phi}")
    ranking: list = []
    for i, item in enumerate(reference, start=1):
        weights = phi ** np.arange(i - 1, -1, -1, dtype=float)
        cdf = np.cumsum(weights)
        j = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
        ranking.insert(min(j, i - 1), item)
    return ranking


def gen_preferences(config: GenConfig, rng: np.random.Generator) -> tuple[list[list[int]], list[list[int]]]:
    colleges = list(range(config.n_colleges))
    students = list(range(config.n_students))
    prefs = [mallows_sample(colleges, config.phi_s, rng) for _ in students]
    priorities = [mallows_sample(students, config.phi_c, rng) for _ in colleges]
    return prefs, priorities


def total_capacity(config: GenConfig) -> int:
    return max(config.n_colleges, math.floor(config.rho_c * config.n_students))


def gen_capacities(config: GenConfig, rng: np.random.Generator) -> list[int]:
    m = config.n_colleges
    if config.capacity_method == "fixed":
        return [max(1, math.floor(config.rho_c * config.n_students / m))] * m
    if config.capacity_method == "uniform":
        lo, hi = config.capacity_range
        if lo > hi or lo < 0:
            raise InvalidRange(f"bad capacity range [{lo}, {hi}]")
        return [int(x) for x in rng.integers(lo, hi + 1, size=m)]

    target = total_capacity(config)
    mu = target / m
    ratio = DEFAULT_STD_RATIO if config.std_ratio is None else config.std_ratio
    draws = rng.normal(mu, mu * ratio, size=m)
    q = [int(round(max(1.0, x))) for x in draws]
    total = sum(q)
    # Random single-seat repairs; never take a college below one seat.
    while total != target:
        c = int(rng.integers(m))
        if total < target:
            q[c] += 1
            total += 1
        elif q[c] >= 2:
            q[c] -= 1
            total -= 1
    return q


def n_regions(config: GenConfig) -> int:
    return max(1, math.floor(config.region_ratio * config.n_students))


def assign_regions(config: GenConfig, capacities: Sequence[int]) -> tuple[list[int], list[int]]:
    """Round-robin region per college and the resulting regional caps."""
    r = n_regions(config)
    regions = [c % r for c in range(config.n_colleges)]
    sums = [0] * r
    for c, q in enumerate(capacities):
        sums[regions[c]] += q
    caps = [math.floor(config.region_capacity_ratio * s + 1e-9) for s in sums]
    return regions, caps


def generate_instance(config: GenConfig, rng: np.random.Generator | None = None) -> Instance:
    """Draw a market; deterministic given the config seed (or the supplied stream)."""
    if rng is None:
        rng = make_rng(config.seed)
    prefs, priorities = gen_preferences(config, rng)
    q = gen_capacities(config, rng)
    regions, caps = assign_regions(config, q)
    oracle = conjunction(Capacities(tuple(q)), RegionalCaps(tuple(regions), tuple(caps)))
    return validate_instance(config.n_students, config.n_colleges, prefs, priorities, oracle)
