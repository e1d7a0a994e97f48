"""JSON forms of instances and matchings.

Instance files use 1-based student and college ids::

    {"students": 3, "colleges": 2,
     "prefs": [[2, 1], [1, 2], [2, 1]],
     "priorities": [[1, 2, 3], [3, 2, 1]],
     "feasibility": {"type": "conjunction", "parts": [
         {"type": "capacities", "q": [1, 1]},
         {"type": "regional", "regions": [0, 0], "caps": [2]}]}}

``regions`` holds 0-based indices into ``caps``. Matching files map student
labels to college labels; unmatched students are omitted::

    {"assignment": {"s1": "c2", "s2": "c1"}}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .core import Instance, Matching, check_matching, validate_instance
from .errors import IdOutOfRange, Inconsistent, ParseError
from .feasibility import spec_from_dict


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=False) + "\n"


def instance_to_dict(instance: Instance, meta: dict | None = None) -> dict:
    out = {
        "students": instance.n_students,
        "colleges": instance.n_colleges,
        "prefs": [[c + 1 for c in p] for p in instance.student_prefs],
        "priorities": [[s + 1 for s in p] for p in instance.college_priorities],
        "feasibility": instance.feasibility.to_dict(),
    }
    if meta:
        out["meta"] = meta
    return out


def instance_from_dict(data: Any) -> Instance:
    if not isinstance(data, dict):
        raise ParseError("instance JSON must be an object")
    try:
        n, m = int(data["students"]), int(data["colleges"])
        prefs = [[int(c) - 1 for c in p] for p in data["prefs"]]
        prios = [[int(s) - 1 for s in p] for p in data["priorities"]]
        fdata = data["feasibility"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed instance: {exc!r}") from exc
    oracle = spec_from_dict(fdata, m)
    return validate_instance(n, m, prefs, prios, oracle)


def matching_to_dict(matching: Matching) -> dict:
    return {"assignment": matching.to_labels()}


def matching_from_dict(data: Any, instance: Instance) -> Matching:
    if not isinstance(data, dict) or not isinstance(data.get("assignment"), dict):
        raise ParseError('matching JSON must look like {"assignment": {"s1": "c1", ...}}')
    try:
        matching = Matching.from_labels(instance.n_students, instance.n_colleges, data["assignment"])
    except IdOutOfRange as exc:
        raise Inconsistent(str(exc)) from exc
    check_matching(instance, matching)
    return matching


def _load_json(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def read_instance(path: str | Path) -> Instance:
    return instance_from_dict(_load_json(path))


def read_matching(path: str | Path, instance: Instance) -> Matching:
    return matching_from_dict(_load_json(path), instance)


def write_text(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
