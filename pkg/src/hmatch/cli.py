"""Command-line entry point: ``hmatch {gen,run,check,sweep}``.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 self-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algorithms import construct_er_nw, k_cutoff, k_spda
from .errors import SelfCheckFailed, ValidationError
from .experiment import ExperimentConfig, rows_to_csv, run_sweep, sweep_metadata
from .feasibility import matching_feasible
from .generator import CAPACITY_METHODS, GenConfig, generate_instance
from .metrics import compute_metrics
from .properties import is_cnw, is_ef_k, is_er_k, is_nonwasteful, is_nw_k, is_stable, min_er_index
from .serialize import dumps, instance_to_dict, matching_to_dict, read_instance, read_matching, write_text

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_SELF_CHECK = 0, 1, 2, 3


def _read_json_config(path: str | None) -> dict:
    if path is None:
        return {}
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: config must be a JSON object")
    return data


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        write_text(out, text)


def _gen_overrides(args) -> dict:
    mapping = {
        "students": "n_students",
        "colleges": "n_colleges",
        "phi_s": "phi_s",
        "phi_c": "phi_c",
        "rho": "rho_c",
        "capacity_method": "capacity_method",
        "std_ratio": "std_ratio",
        "capacity_range": "capacity_range",
        "region_ratio": "region_ratio",
        "region_capacity_ratio": "region_capacity_ratio",
        "seed": "seed",
    }
    return {key: getattr(args, flag) for flag, key in mapping.items() if getattr(args, flag, None) is not None}


def cmd_gen(args) -> int:
    data = _read_json_config(args.config)
    data.update(_gen_overrides(args))
    for required in ("n_students", "n_colleges", "phi_s", "phi_c"):
        if required not in data:
            raise ValidationError(f"gen needs {required} (flag or config file)")
    config = GenConfig.from_dict(data)
    instance = generate_instance(config)
    _emit(dumps(instance_to_dict(instance, meta={"generator": config.to_dict()})), args.out)
    return EXIT_OK


def cmd_run(args) -> int:
    instance = read_instance(args.instance)
    k = args.k
    if not 0 <= k <= instance.n_students:
        raise ValidationError(f"k must lie in 0..{instance.n_students}")
    cutoffs = trace = None
    if args.algorithm == "alg1":
        matching = construct_er_nw(instance, k)
    else:
        result = (k_cutoff if args.algorithm == "cutoff" else k_spda)(instance, k)
        matching, cutoffs, trace = result
    if not (matching_feasible(instance, matching) and is_er_k(instance, matching, k) and is_nw_k(instance, matching, k)):
        raise SelfCheckFailed(f"{args.algorithm} output failed the ER-{k} / NW-{k} self-check")
    report = matching_to_dict(matching)
    if cutoffs is not None:
        report["cutoffs"] = {f"c{c + 1}": v for c, v in enumerate(cutoffs)}
    report["metrics"] = compute_metrics(instance, matching).as_row()
    _emit(dumps(report), args.out)
    if args.trace and trace is not None:
        write_text(args.trace, trace.to_jsonl())
    return EXIT_OK


def cmd_check(args) -> int:
    instance = read_instance(args.instance)
    matching = read_matching(args.matching, instance)
    k = args.k
    report = {
        "feasible": matching_feasible(instance, matching),
        "er_k": is_er_k(instance, matching, k),
        "ef_k": is_ef_k(instance, matching, k),
        "nw_k": is_nw_k(instance, matching, k),
        "cnw": is_cnw(instance, matching),
        "nonwasteful": is_nonwasteful(instance, matching),
        "stable": is_stable(instance, matching),
        "min_er_index": min_er_index(instance, matching),
        "metrics": compute_metrics(instance, matching).as_row(),
    }
    _emit(dumps(report), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    data = _read_json_config(args.config)
    data.update(_gen_overrides(args))
    for flag, key in (("k", "ks"), ("trials", "trials"), ("algorithm", "algorithm")):
        if getattr(args, flag) is not None:
            data[key] = getattr(args, flag)
    config = ExperimentConfig.from_dict(data)
    rows = run_sweep(config, workers=args.workers)
    _emit(rows_to_csv(rows), args.out)
    if args.out and args.out != "-":
        write_text(args.out + ".meta.json", dumps(sweep_metadata(config, rows)))
    return EXIT_OK


def _add_gen_flags(p: argparse.ArgumentParser, multi: bool) -> None:
    nargs = "+" if multi else None
    p.add_argument("--config", help="JSON file with parameters; flags override it")
    p.add_argument("--students", type=int)
    p.add_argument("--colleges", type=int)
    p.add_argument("--phi-s", type=float, nargs=nargs)
    p.add_argument("--phi-c", type=float, nargs=nargs)
    p.add_argument("--rho", type=float, help="target supply/demand ratio")
    p.add_argument("--capacity-method", choices=CAPACITY_METHODS)
    p.add_argument("--std-ratio", type=float)
    p.add_argument("--capacity-range", type=int, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--region-ratio", type=float)
    p.add_argument("--region-capacity-ratio", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hmatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic instance")
    _add_gen_flags(p, multi=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="compute an ER-k and NW-k matching")
    p.add_argument("instance")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--algorithm", choices=("alg1", "cutoff", "spda"), default="cutoff")
    p.add_argument("--trace", metavar="PATH", help="write the algorithm trace as JSON lines")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="evaluate every property of a matching")
    p.add_argument("instance")
    p.add_argument("matching")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="run a parameter grid and write a CSV")
    _add_gen_flags(p, multi=True)
    p.add_argument("--k", type=int, nargs="+")
    p.add_argument("--trials", type=int)
    p.add_argument("--algorithm", choices=("alg1", "cutoff", "spda"))
    p.add_argument("--workers", type=int, help="override HMATCH_THREADS")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SelfCheckFailed as exc:
        print(f"error: self-check failed: {exc}", file=sys.stderr)
        return EXIT_SELF_CHECK
    except (ValidationError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
