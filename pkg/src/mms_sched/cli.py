"""Command-line front end.

Subcommands: mms (per-machine MMS values), solve (exact / mult / add /
welfare), check (re-verify a schedule file), gen (known-answer and random
instance generators). Reports go to stdout as JSON, diagnostics to
stderr. Exit codes: 0 ok, 1 input error, 2 infeasible, 3 resource cap.
Caps may be overridden via the MMS_SCHED_CAPS environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import drivers, io, reductions
from .caps import caps_from_env
from .core import CapExceeded, InputError, NEG_INF, POS_INF, machine_values, schedule_feasible

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_CAP = 3


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, default=_jsonable)
    sys.stdout.write("\n")


def _jsonable(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if value == POS_INF:
        return "inf"
    if value == NEG_INF:
        return "-inf"
    raise TypeError(f"cannot serialize {value!r}")


def _value_json(value):
    if isinstance(value, (Fraction, float)):
        return _jsonable(value)
    return value


def _parse_targets(text: str, m: int) -> list[int]:
    try:
        targets = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad --targets {text!r}") from exc
    if len(targets) != m:
        raise InputError(f"--targets needs {m} comma-separated integers")
    return targets


def cmd_mms(args, caps) -> int:
    inst = io.load_instance(args.instance)
    values, feasible = drivers.compute_mms(
        inst, args.engine, caps, threads=args.threads
    )
    if not feasible:
        _emit({"infeasible": True})
        print("no feasible full schedule exists", file=sys.stderr)
        return EXIT_INFEASIBLE
    if args.machine is not None:
        if not 0 <= args.machine < inst.m:
            raise InputError(f"--machine {args.machine} out of range")
        _emit({"mms": int(values[args.machine])})
    else:
        _emit({"mms": [int(v) for v in values]})
    return EXIT_OK


def cmd_solve(args, caps) -> int:
    inst = io.load_instance(args.instance)
    if args.objective == "exact":
        if args.targets is None:
            raise InputError("--objective exact requires --targets")
        report = drivers.solve_exact(
            inst, _parse_targets(args.targets, inst.m), args.engine, caps
        )
    elif args.objective == "mult":
        report = drivers.solve_mult(inst, args.engine, caps, threads=args.threads)
    elif args.objective == "add":
        report = drivers.solve_add(inst, args.engine, caps, threads=args.threads)
    else:
        report = drivers.solve_welfare(inst, args.engine, caps, threads=args.threads)
    payload = {
        "objective": report.kind,
        "status": report.status,
        "value": _value_json(report.value),
        "mms": None
        if report.mms is None
        else [_value_json(v) for v in report.mms],
        "machine_values": report.machine_values,
        "schedule": None
        if report.schedule is None
        else io.schedule_to_dict(report.schedule, inst, report.machine_values)[
            "assignment"
        ],
        "engine": report.engine,
        "seconds": round(report.seconds, 6),
    }
    _emit(payload)
    if report.status == "infeasible":
        return EXIT_INFEASIBLE
    if args.schedule_out and report.schedule is not None:
        with open(args.schedule_out, "w", encoding="utf-8") as fh:
            json.dump(
                io.schedule_to_dict(report.schedule, inst, report.machine_values),
                fh,
                indent=2,
            )
            fh.write("\n")
    return EXIT_OK


def cmd_check(args, caps) -> int:
    inst = io.load_instance(args.instance)
    schedule = io.load_schedule(args.schedule, inst)
    feasible = schedule_feasible(schedule, inst)
    _emit(
        {
            "feasible": feasible,
            "machine_values": machine_values(schedule, inst),
            "late": [inst.jobs[t].id for t in schedule.late_jobs()],
        }
    )
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def _numbers(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad --numbers {text!r}") from exc


def cmd_gen(args, caps) -> int:
    kind = args.kind
    expected = None
    targets = None
    if kind in ("partition", "partition-deadlines", "eqcard", "batches"):
        if args.numbers is None:
            raise InputError(f"gen {kind} requires --numbers")
        gen = {
            "partition": reductions.gen_partition_values,
            "partition-deadlines": reductions.gen_partition_deadlines,
            "eqcard": reductions.gen_eqcard_partition,
            "batches": reductions.gen_partition_batches,
        }[kind]
        case = gen(_numbers(args.numbers))
        inst, expected, targets = case.instance, case.expected, case.targets
    elif kind == "sat3":
        if args.cnf is None:
            raise InputError("gen sat3 requires --cnf")
        clauses, num_vars, names = reductions.parse_cnf(args.cnf)
        case = reductions.gen_sat3prime(clauses, num_vars, names)
        inst, expected, targets = case.instance, case.expected, case.targets
    elif kind == "ef":
        if args.n is None:
            raise InputError("gen ef requires --n")
        inst = reductions.gen_ef_counterexample(args.n)
    elif kind == "random":
        import random

        if args.n is None:
            raise InputError("gen random requires --n")
        rng = random.Random(args.seed)
        inst = reductions.random_instance(
            rng,
            n=args.n,
            m=args.machines,
            groups=args.groups,
            with_penalties=args.penalties,
        )
    else:  # unreachable: argparse restricts choices
        raise InputError(f"unknown generator {kind!r}")

    io.save_instance(inst, args.out)
    written = [args.out]
    if expected is not None:
        sidecar = os.path.splitext(args.out)[0] + ".expected.json"
        with open(sidecar, "w", encoding="utf-8") as fh:
            json.dump(
                {"expected": "yes" if expected else "no", "targets": list(targets)},
                fh,
                indent=2,
            )
            fh.write("\n")
        written.append(sidecar)
    _emit({"written": written})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mms-sched",
        description="Exact solvers for maximin-share fair job scheduling with deadlines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mms = sub.add_parser("mms", help="per-machine MMS values")
    p_mms.add_argument("instance")
    p_mms.add_argument("--engine", default="auto", choices=drivers.ENGINES)
    p_mms.add_argument("--machine", type=int, default=None)
    p_mms.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p_mms.set_defaults(func=cmd_mms)

    p_solve = sub.add_parser("solve", help="optimize an objective")
    p_solve.add_argument("instance")
    p_solve.add_argument(
        "--objective", required=True, choices=("exact", "mult", "add", "welfare")
    )
    p_solve.add_argument("--engine", default="auto", choices=drivers.ENGINES)
    p_solve.add_argument("--targets", default=None, help="comma-separated integers")
    p_solve.add_argument("--schedule-out", default=None)
    p_solve.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p_solve.set_defaults(func=cmd_solve)

    p_check = sub.add_parser("check", help="verify a schedule file")
    p_check.add_argument("instance")
    p_check.add_argument("schedule")
    p_check.set_defaults(func=cmd_check)

    p_gen = sub.add_parser("gen", help="write generator instances")
    p_gen.add_argument(
        "kind",
        choices=(
            "partition",
            "partition-deadlines",
            "eqcard",
            "batches",
            "sat3",
            "ef",
            "random",
        ),
    )
    p_gen.add_argument("--numbers", default=None)
    p_gen.add_argument("--cnf", default=None)
    p_gen.add_argument("--n", type=int, default=None)
    p_gen.add_argument("--machines", type=int, default=2)
    p_gen.add_argument("--groups", type=int, default=1)
    p_gen.add_argument("--penalties", action="store_true")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        caps = caps_from_env()
        return args.func(args, caps)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
