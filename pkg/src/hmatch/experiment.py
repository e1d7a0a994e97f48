"""Parameter sweeps over synthetic markets with CSV output.

Each (phi_s, phi_c, trial) triple draws one market from RNG stream
``(seed, trial)`` and runs every k on it. Trials are spread over a process
pool capped by ``HMATCH_THREADS``. Rows are always assembled in grid order,
so the CSV depends only on the config.
"""

from __future__ import annotations

import csv
import io
import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

from . import __version__
from .algorithms import run_algorithm
from .errors import InvalidConfig, SelfCheckFailed
from .generator import GenConfig, generate_instance, make_rng
from .metrics import MetricsRecord, compute_metrics
from .properties import is_er_k, is_nw_k

DEFAULT_PHI_S = (0.7, 0.9)
DEFAULT_PHI_C = (0.5, 0.7, 0.9)
DEFAULT_KS = (0, 1, 2, 5, 10, 20, 50, 199)

CSV_COLUMNS = (
    "phi_s",
    "phi_c",
    "k",
    "avg_envy_received",
    "max_envy_received",
    "maximum_objections",
    "total_envy",
    "total_claims",
)


@dataclass(frozen=True)
class ExperimentConfig:
    phi_s: tuple[float, ...] = DEFAULT_PHI_S
    phi_c: tuple[float, ...] = DEFAULT_PHI_C
    ks: tuple[int, ...] = DEFAULT_KS
    trials: int = 50
    seed: int = 0
    n_students: int = 200
    n_colleges: int = 10
    rho_c: float = 1.0
    capacity_method: str = "normal"
    std_ratio: float | None = None
    capacity_range: tuple[int, int] | None = None
    region_ratio: float = 0.02
    region_capacity_ratio: float = 0.6
    algorithm: str = "cutoff"

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidConfig("trials must be at least 1")
        for k in self.ks:
            if not 0 <= k <= self.n_students:
                raise InvalidConfig(f"k={k} outside 0..{self.n_students}")
        if self.algorithm not in ("alg1", "cutoff", "spda"):
            raise InvalidConfig(f"unknown algorithm {self.algorithm!r}")
        for ps, pc in self.cells():
            self.gen_config(ps, pc)  # validates ranges

    def cells(self) -> list[tuple[float, float]]:
        return list(itertools.product(self.phi_s, self.phi_c))

    def gen_config(self, phi_s: float, phi_c: float) -> GenConfig:
        return GenConfig(
            n_students=self.n_students,
            n_colleges=self.n_colleges,
            phi_s=phi_s,
            phi_c=phi_c,
            rho_c=self.rho_c,
            capacity_method=self.capacity_method,
            std_ratio=self.std_ratio,
            capacity_range=self.capacity_range,
            region_ratio=self.region_ratio,
            region_capacity_ratio=self.region_capacity_ratio,
            seed=self.seed,
        )

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        for key in ("phi_s", "phi_c", "ks", "capacity_range"):
            if data.get(key) is not None:
                data[key] = tuple(data[key])
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ResultRow:
    """Trial aggregate for one grid cell.

    ``max_envy_received`` is the maximum over trials; every other measure
    is the trial mean. ``wall_time`` is mean seconds per algorithm run.
    """

    phi_s: float
    phi_c: float
    k: int
    avg_envy_received: float
    max_envy_received: int
    maximum_objections: float
    total_envy: float
    total_claims: float
    trials: int
    wall_time: float = field(compare=False)


def run_trial(config: ExperimentConfig, phi_s: float, phi_c: float, trial: int) -> list[tuple[MetricsRecord, float]]:
    """Draw one market and run every k on it; each output is self-checked."""
    instance = generate_instance(config.gen_config(phi_s, phi_c), make_rng(config.seed, trial))
    out = []
    for k in config.ks:
        start = time.perf_counter()
        matching = run_algorithm(instance, k, config.algorithm)
        elapsed = time.perf_counter() - start
        if not (is_er_k(instance, matching, k) and is_nw_k(instance, matching, k)):
            raise SelfCheckFailed(f"phi_s={phi_s} phi_c={phi_c} trial={trial} k={k}: output is not ER-k and NW-k")
        out.append((compute_metrics(instance, matching), elapsed))
    return out


def _run_packed(args):
    return run_trial(*args)


def worker_count() -> int:
    env = os.environ.get("HMATCH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise InvalidConfig(f"HMATCH_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def run_sweep(config: ExperimentConfig, workers: int | None = None) -> list[ResultRow]:
    jobs = [(config, ps, pc, t) for ps, pc in config.cells() for t in range(config.trials)]
    workers = worker_count() if workers is None else workers
    if workers <= 1:
        results = [_run_packed(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_packed, jobs, chunksize=max(1, len(jobs) // (4 * workers))))

    rows = []
    for cell_idx, (ps, pc) in enumerate(config.cells()):
        cell = results[cell_idx * config.trials:(cell_idx + 1) * config.trials]
        for k_idx, k in enumerate(config.ks):
            recs = [trial[k_idx][0] for trial in cell]
            secs = [trial[k_idx][1] for trial in cell]
            n = len(recs)
            rows.append(
                ResultRow(
                    phi_s=ps,
                    phi_c=pc,
                    k=k,
                    avg_envy_received=sum(float(r.avg_envy_received) for r in recs) / n,
                    max_envy_received=max(r.max_envy_received for r in recs),
                    maximum_objections=sum(r.maximum_objections for r in recs) / n,
                    total_envy=sum(r.total_envy for r in recs) / n,
                    total_claims=sum(r.total_claims for r in recs) / n,
                    trials=n,
                    wall_time=sum(secs) / n,
                )
            )
    return rows


def rows_to_csv(rows: list[ResultRow]) -> str:
    """Two decimals for trial means, integers for k and the max-envy column."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(
            [
                f"{r.phi_s:g}",
                f"{r.phi_c:g}",
                r.k,
                f"{r.avg_envy_received:.2f}",
                r.max_envy_received,
                f"{r.maximum_objections:.2f}",
                f"{r.total_envy:.2f}",
                f"{r.total_claims:.2f}",
            ]
        )
    return buf.getvalue()


def sweep_metadata(config: ExperimentConfig, rows: list[ResultRow]) -> dict:
    return {
        "hmatch_version": __version__,
        "config": config.to_dict(),
        "assumptions": {
            "rho_c": config.rho_c,
            "reference_rankings": "identity",
            "rng": "numpy Philox, stream (seed, trial)",
            "max_envy_received": "maximum over trials",
        },
        "wall_time_seconds": [
            {"phi_s": r.phi_s, "phi_c": r.phi_c, "k": r.k, "mean_per_run": round(r.wall_time, 6)} for r in rows
        ],
    }
