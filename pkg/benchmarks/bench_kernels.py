#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the subset-DP recurrences (the 3^n submask loops behind dp_mms and
dp_feasible) and the block-state DP step driving the n-fold engines, on
both backends. The pure path skips the largest sizes; expect roughly two
orders of magnitude between the two.

Usage: python benchmarks/bench_kernels.py [--mms-sizes 10,12,14,16]
"""

from __future__ import annotations

import argparse
import random
import time

from mms_sched import _kernels_py, kernels
from mms_sched.core import Instance
from mms_sched.formulations import build_deadline_nfold
from mms_sched.nfold import nfold_solve
from mms_sched.reductions import random_instance
from mms_sched.subset_dp import dp_feasible, dp_mms

try:
    from mms_sched import _kernels
except ImportError:
    _kernels = None

PURE_LIMIT_N = 14  # 3^n python-level iterations beyond this take minutes


def _with_backend(impl):
    kernels.mms_rows = impl.mms_rows
    kernels.feasible_rows = impl.feasible_rows
    kernels.nfold_step = impl.nfold_step


def _time(fn, repeat: int = 1) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_subset(inst: Instance, repeat: int) -> tuple[float, float]:
    t_mms = _time(lambda: dp_mms(inst, 0), repeat)
    floor = [-inst.n * inst.v_max] * inst.m
    t_feas = _time(lambda: dp_feasible(inst, floor), repeat)
    return t_mms, t_feas


def smoke_instance(rng: random.Random) -> Instance:
    from mms_sched.core import Job

    deadlines = (10, 20, 40)
    jobs = []
    for t in range(60):
        heavy = t % 3 == 0
        jobs.append(
            Job(
                f"j{t}",
                rng.randint(1, 4) if heavy else 0,
                rng.choice(deadlines),
                (rng.randint(0, 3), rng.randint(0, 3)),
            )
        )
    return Instance(2, tuple(jobs))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mms-sizes", default="10,12,14,16")
    parser.add_argument("--machines", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=2)
    args = parser.parse_args()
    sizes = [int(x) for x in args.mms_sizes.split(",")]

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.insert(0, ("compiled", _kernels))
    else:
        print("compiled extension unavailable; timing the fallback only")

    rng = random.Random(1)
    instances = {n: random_instance(rng, n=n, m=args.machines) for n in sizes}
    smoke = smoke_instance(random.Random(2))

    rows = []
    for name, impl in backends:
        _with_backend(impl)
        for n in sizes:
            if name == "python" and n > PURE_LIMIT_N:
                rows.append((name, f"dp n={n}", None, None))
                continue
            t_mms, t_feas = bench_subset(instances[n], args.repeat)
            rows.append((name, f"dp n={n}", t_mms, t_feas))
        t_nfold = _time(
            lambda: nfold_solve(build_deadline_nfold(smoke, (40, 40))), args.repeat
        )
        rows.append((name, "nfold n=60", t_nfold, None))
    _with_backend(kernels._impl)

    print(f"{'backend':<10} {'case':<12} {'mms/solve (s)':>14} {'feasible (s)':>14}")
    for name, case, a, b in rows:
        fa = "skipped" if a is None else f"{a:.3f}"
        fb = "" if b is None else f"{b:.3f}"
        print(f"{name:<10} {case:<12} {fa:>14} {fb:>14}")


if __name__ == "__main__":
    main()
