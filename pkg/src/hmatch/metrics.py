"""Outcome measures reported for each matching in the experiments."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, Matching
from .properties import envy_received_counts, objection_counts

FIELDS = ("avg_envy_received", "max_envy_received", "maximum_objections", "total_envy", "total_claims")


@dataclass(frozen=True)
class MetricsRecord:
    """Five outcome measures for one matching.

    avg_envy_received
        Mean number of enviers over the students who are envied at all
        (0 when nobody is). Exact rational.
    max_envy_received
        Largest number of enviers of a single student, i.e. the smallest k
        for which the matching is ER-k.
    maximum_objections
        Most objectors faced by any empty-seat claim; |S| when there is no
        claim at all.
    total_envy
        Number of (envier, envied) justified-envy relations.
    total_claims
        Number of (student, college) empty-seat claims, whatever their
        objector counts.
    """

    avg_envy_received: Fraction
    max_envy_received: int
    maximum_objections: int
    total_envy: int
    total_claims: int

    def as_row(self) -> dict[str, float | int]:
        return {
            "avg_envy_received": float(self.avg_envy_received),
            "max_envy_received": self.max_envy_received,
            "maximum_objections": self.maximum_objections,
            "total_envy": self.total_envy,
            "total_claims": self.total_claims,
        }


def compute_metrics(instance: Instance, matching: Matching) -> MetricsRecord:
    received = envy_received_counts(instance, matching)
    envied = [n for n in received if n > 0]
    objections = objection_counts(instance, matching)
    total_envy = sum(received)
    return MetricsRecord(
        avg_envy_received=Fraction(total_envy, len(envied)) if envied else Fraction(0),
        max_envy_received=max(received, default=0),
        maximum_objections=max(objections) if objections else instance.n_students,
        total_envy=total_envy,
        total_claims=len(objections),
    )
