# main.py - command-line front-end for the plus-edge toolkit
"""
Usage:
    python main.py gen --kind random_balanced --n 12 --seed 3 --out inst.json
    python main.py embed --in inst.json --kind clique_factor --delta 3
    python main.py paths --in inst.json
    python main.py bounds --n 100 --d 0.5 --delta 2 --m 100
    python main.py sweep --kind paths --n 12:40:4 --seeds 20 --out sweep.csv

JSON results go to standard output, logs to standard error.
Exit codes: 0 success, 1 certificate failure, 2 input error.
"""
import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from simple_logging import log_error, log_message
from src import bounds
from src.config import Config
from src.core import InputError
from src.generators import GeneratorSpec, pattern_factory
from src.models import InstanceFile, PatternFile, save_instance, save_pattern
from src.records import append_record, RunRecord, write_summary_csv
from src.workflow import PIPELINE_COMMANDS, get_system, run_sweep

EXIT_OK, EXIT_CERTIFICATE, EXIT_INPUT = 0, 1, 2

INSTANCE_KINDS = ("bipartite_minus_matching", "minus_clique", "random_density", "random_balanced", "planted")
PATTERN_KINDS = ("clique_factor", "matching", "hamiltonian", "path", "triangle_factor", "random")


def parse_n_range(text: str, flag: str = "--n") -> List[int]:
    """'12' -> [12]; '12:40:4' -> [12, 16, ..., 40] (inclusive); '1,2,3' -> [1, 2, 3]."""
    if "," in text:
        return [value for part in text.split(",") for value in parse_n_range(part.strip(), flag)]
    parts = text.split(":")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise InputError(f"{flag} expects an integer, a list or start:stop[:step], got {text!r}")
    if len(values) == 1:
        return values
    start, stop = values[0], values[1]
    step = values[2] if len(values) > 2 else 1
    if step < 1 or stop < start:
        raise InputError(f"{flag} range {text!r} is empty")
    return list(range(start, stop + 1, step))


def parse_d_list(text: Optional[str]) -> List[Optional[float]]:
    """'0.3,0.5,0.7' -> [0.3, 0.5, 0.7]; no flag keeps each kind's default density."""
    if text is None:
        return [None]
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise InputError(f"--d expects a density or a comma-separated list, got {text!r}")
    outside = [d for d in values if not 0 <= d <= 1]
    if outside:
        raise InputError(f"--d values outside [0, 1]: {outside}")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pluskit", description="Plus-edge embeddings in signed complete graphs")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="generate an instance or a pattern file")
    gen.add_argument("--kind", required=True, choices=INSTANCE_KINDS + PATTERN_KINDS)
    gen.add_argument("--n", required=True, type=int)
    gen.add_argument("--d", type=float)
    gen.add_argument("--delta", type=int)
    gen.add_argument("--r", type=int, default=3)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")

    for name in PIPELINE_COMMANDS:
        sub = commands.add_parser(name, help=f"run the {name} pipeline on an instance file")
        sub.add_argument("--in", dest="instance", required=True)
        sub.add_argument("--seed", type=int)
        sub.add_argument("--results", help="JSONL results file (default PLUSKIT_RESULTS)")
        if name in ("embed", "spectrum"):
            sub.add_argument("--pattern")
            sub.add_argument("--kind", choices=PATTERN_KINDS)
            sub.add_argument("--delta", type=int)
        if name in ("spectrum", "exact"):
            sub.add_argument("--cap", type=int)
        if name == "paths":
            sub.add_argument("--start", choices=("greedy", "empty"))

    bound = commands.add_parser("bounds", help="evaluate closed-form bounds")
    bound.add_argument("--n", type=int)
    bound.add_argument("--d", type=float)
    bound.add_argument("--delta", type=int, default=1)
    bound.add_argument("--m", type=int)
    bound.add_argument("--program", action="store_true", help="solve the triangle-factor program")

    sweep = commands.add_parser("sweep", help="grid over n, d, delta and seeds; JSONL records and a CSV summary")
    sweep.add_argument("--kind", required=True, choices=PIPELINE_COMMANDS)
    sweep.add_argument("--n", required=True)
    sweep.add_argument("--seeds", type=int, default=1)
    sweep.add_argument("--d", help="density or list, e.g. 0.3,0.5,0.7")
    sweep.add_argument("--delta", default="1", help="degree bound, list or range, e.g. 1:3")
    sweep.add_argument("--out", default=str(Config.LOG_DIR / "sweep.csv"))
    sweep.add_argument("--results")
    return parser


def emit(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, default=str))


def run_gen(args) -> int:
    if args.kind in PATTERN_KINDS:
        pattern = pattern_factory(args.kind, args.n, args.delta, args.seed)
        if args.out:
            save_pattern(pattern, args.out)
        emit({"kind": args.kind, "out": args.out, **PatternFile.from_pattern(pattern).model_dump()})
        return EXIT_OK
    host = GeneratorSpec(kind=args.kind, n=args.n, d=args.d, seed=args.seed, r=args.r).build()
    if args.out:
        save_instance(host, args.out)
        emit({"kind": args.kind, "out": args.out, "n": host.n, "plus_count": host.plus_count,
              "balanced": host.balanced()})
    else:
        emit(InstanceFile.from_graph(host).model_dump())
    return EXIT_OK


def run_pipeline(args) -> int:
    params = {"in": args.instance, "seed": args.seed, "results": args.results}
    for flag in ("pattern", "kind", "delta", "cap", "start"):
        if getattr(args, flag, None) is not None:
            params[flag] = getattr(args, flag)
    state = get_system().run(args.command, params)
    if state.get("error_count"):
        log_error(state.get("error", "input rejected"))
        emit({"command": args.command, "error": state.get("error")})
        return EXIT_INPUT
    emit(state["record"])
    return EXIT_OK if state["certificate"].get("certificate_pass") else EXIT_CERTIFICATE


def run_bounds(args) -> int:
    payload: Dict[str, Any] = {}
    if args.n is not None and args.d is not None and args.m is not None:
        payload.update(bounds.theorem0_bound(args.n, args.d, args.delta, args.m).model_dump())
        payload["d_star"] = float(bounds.d_star(args.n))
        payload["matched_fraction_floor"] = bounds.matched_fraction_floor(args.n, args.d)
    if args.n is not None:
        payload["path_target"] = bounds.path_target(args.n)
    payload["constants"] = bounds.constants(args.delta)
    if args.program:
        payload["triangle_program"] = bounds.solve_triangle_program().as_dict()
    emit(payload)
    return EXIT_OK


def run_sweep_command(args) -> int:
    ns = parse_n_range(args.n)
    ds = parse_d_list(args.d)
    deltas = parse_n_range(args.delta, "--delta")
    cells = run_sweep(args.kind, ns, args.seeds, ds=ds, deltas=deltas)
    rows = []
    failed = 0
    for cell in cells:
        rows.append(cell["row"])
        if cell["record"] is not None:
            append_record(RunRecord.model_validate(cell["record"]), args.results)
        if not cell["row"]["pass"]:
            failed += 1
            row = cell["row"]
            log_error(f"cell n={row['n']} d={row['d']} delta={row['delta']} seed={row['seed']} "
                      f"failed {cell.get('error') or ''}")
    path = write_summary_csv(rows, args.out)
    emit({"kind": args.kind, "cells": len(rows), "failed": failed, "csv": str(path)})
    return EXIT_CERTIFICATE if failed else EXIT_OK


HANDLERS = {"gen": run_gen, "bounds": run_bounds, "sweep": run_sweep_command}


def main(argv: Optional[List[str]] = None) -> int:
    invalid = Config.get_invalid_settings()
    if invalid:
        log_error(f"Invalid settings: {invalid}")
        return EXIT_INPUT
    args = build_parser().parse_args(argv)
    log_message(f"pluskit {args.command}", "DEBUG")
    try:
        return HANDLERS.get(args.command, run_pipeline)(args)
    except ValidationError as e:
        fields = ", ".join(".".join(str(p) for p in err["loc"]) or "<root>" for err in e.errors())
        log_error(f"invalid input ({fields}): {e}")
        return EXIT_INPUT
    except (InputError, OSError) as e:
        log_error(str(e))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
