"""Objective-level orchestration over the engines.

Computes per-machine MMS values, then optimizes the multiplicative,
additive, and welfare objectives (plus the rejection-budget question) by
feasibility probes: the subset DP, either block-structured formulation,
the partition matcher, or the oracle serve as interchangeable probe
backends. Every binary search logs its probes so monotonicity can be
audited after the fact.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .caps import DEFAULT_CAPS, Caps
from .core import (
    NEG_INF,
    POS_INF,
    InputError,
    Instance,
    Schedule,
    machine_values,
    schedule_feasible,
)
from .formulations import (
    build_deadline_nfold,
    build_layer_nfold,
    build_rejection_variant,
    decode_schedule,
    with_budget,
    with_targets,
)
from .matching import matching_wf
from .nfold import nfold_solve
from .oracle import (
    oracle_exact,
    oracle_min_rejection_budget,
    oracle_mms_vector,
    oracle_report,
)
from .subset_dp import dp_feasible, dp_mms

ENGINES = ("auto", "dp", "nfold-layers", "nfold-deadlines", "matching", "oracle")


@dataclass
class ProbeRecord:
    """One binary search: the probed keys with their feasibility verdicts.

    `direction` is "up" when feasibility may only switch on as the key
    grows (shortfall searches) and "down" when it may only switch off
    (target and factor searches).
    """

    label: str
    direction: str
    points: list[tuple[object, bool]] = field(default_factory=list)

    def violations(self) -> int:
        pts = sorted(self.points, key=lambda kv: kv[0])
        bad = 0
        for (k1, f1), (k2, f2) in zip(pts, pts[1:]):
            if k1 == k2 and f1 != f2:
                bad += 1
            elif self.direction == "up" and f1 and not f2:
                bad += 1
            elif self.direction == "down" and not f1 and f2:
                bad += 1
        return bad


PROBE_LOG: list[ProbeRecord] = []


def clear_probe_log() -> None:
    PROBE_LOG.clear()


def probe_violations() -> int:
    return sum(rec.violations() for rec in PROBE_LOG)


@dataclass
class SolveReport:
    """Outcome of one objective solve: value, witness, provenance."""

    kind: str
    status: str                     # "optimal" | "feasible" | "infeasible"
    value: Fraction | float | int | None
    schedule: Schedule | None
    machine_values: list[int] | None
    mms: list[int | float] | None
    engine: str
    seconds: float


def resolve_engine(
    inst: Instance, engine: str, caps: Caps, objective: str = "exact"
) -> str:
    """Auto-selection: subset DP for small job counts, else the layer
    formulation when the group structure keeps catalogs small, else the
    deadline formulation. Welfare prefers the matcher at tiny sizes."""
    if engine not in ENGINES:
        raise InputError(f"unknown engine {engine!r}; choose from {ENGINES}")
    if engine != "auto":
        return engine
    if objective == "welfare" and inst.n <= caps.matching_jobs:
        return "matching"
    if inst.n <= min(18, caps.dp_jobs) and objective != "welfare":
        return "dp"
    if inst.num_groups >= 2 and inst.m**inst.g_max <= caps.catalog_entries:
        return "nfold-layers"
    return "nfold-deadlines"


ProbeFn = Callable[[Sequence[int]], Schedule | None]


def feasibility_prober(inst: Instance, engine: str, caps: Caps) -> ProbeFn:
    """Target-vector feasibility probe for one engine; builders and
    catalogs are prepared once and reused across probes."""
    if engine == "dp":
        return lambda phi: dp_feasible(inst, phi, caps)
    if engine == "oracle":
        return lambda phi: oracle_exact(inst, phi, caps)
    if engine in ("nfold-layers", "nfold-deadlines"):
        build = build_layer_nfold if engine == "nfold-layers" else build_deadline_nfold
        base = build(inst, [0] * inst.m, caps)

        def probe(phi: Sequence[int]) -> Schedule | None:
            program = with_targets(base, phi)
            solution = nfold_solve(program, caps)
            return None if solution is None else decode_schedule(program, solution.y)

        return probe
    raise InputError(f"engine {engine!r} cannot probe target feasibility")


def _search_min_feasible(
    lo: int,
    hi: int,
    probe: Callable[[int], Schedule | None],
    label: str,
) -> tuple[int, Schedule] | None:
    """Smallest k in [lo, hi] with probe(k) feasible; feasibility must be
    monotone nondecreasing in k."""
    record = ProbeRecord(label, direction="up")
    PROBE_LOG.append(record)

    def check(k: int) -> Schedule | None:
        s = probe(k)
        record.points.append((k, s is not None))
        return s

    best = check(hi)
    if best is None:
        return None
    best_k = hi
    while lo < hi:
        mid = (lo + hi) // 2
        s = check(mid)
        if s is not None:
            best, best_k = s, mid
            hi = mid
        else:
            lo = mid + 1
    return best_k, best


def _search_max_feasible_int(
    lo: int,
    hi: int,
    probe: Callable[[int], Schedule | None],
    label: str,
) -> tuple[int, Schedule] | None:
    """Largest k in [lo, hi] with probe(k) feasible; feasibility must be
    monotone nonincreasing in k."""
    record = ProbeRecord(label, direction="down")
    PROBE_LOG.append(record)

    def check(k: int) -> Schedule | None:
        s = probe(k)
        record.points.append((k, s is not None))
        return s

    best = check(lo)
    if best is None:
        return None
    best_k = lo
    while lo < hi:
        mid = (lo + hi + 1) // 2
        s = check(mid)
        if s is not None:
            best, best_k = s, mid
            lo = mid
        else:
            hi = mid - 1
    return best_k, best


def compute_mms(
    inst: Instance,
    engine: str = "auto",
    caps: Caps = DEFAULT_CAPS,
    threads: int = 1,
) -> tuple[list[int | float], bool]:
    """Per-machine MMS values; the flag is False (and every entry NEG_INF)
    when the instance admits no feasible full schedule."""
    engine = resolve_engine(inst, engine, caps, objective="exact")
    if engine == "matching":
        raise InputError("the matching engine does not compute MMS values")
    if engine == "oracle":
        vec, count = oracle_mms_vector(inst, caps)
        return vec, count > 0
    if engine == "dp":
        def one(i: int) -> int | float:
            return dp_mms(inst, i, caps)
    else:
        def one(i: int) -> int | float:
            uniform = inst.with_uniform_values(i)
            probe_targets = feasibility_prober(uniform, engine, caps)
            bound = inst.n * inst.v_max

            def probe(phi: int) -> Schedule | None:
                return probe_targets([phi] * inst.m)

            found = _search_max_feasible_int(
                -bound, bound, probe, f"mms[{i}] {engine}"
            )
            return NEG_INF if found is None else found[0]

    if threads > 1 and inst.m > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(one, range(inst.m)))
    else:
        values = [one(i) for i in range(inst.m)]
    feasible = all(v != NEG_INF for v in values)
    if not feasible:
        values = [NEG_INF] * inst.m
    return values, feasible


def alpha_candidates(inst: Instance, mms: Sequence[int]) -> list[Fraction]:
    """Sorted candidate factors: achievable-integer-value ratios of every
    machine with nonzero reference (zero-reference machines contribute
    hard v_i >= 0 constraints instead of candidates)."""
    bound = inst.n * inst.v_max
    cands: set[Fraction] = set()
    for t in mms:
        if t > 0:
            cands.update(Fraction(w, int(t)) for w in range(-bound, bound + 1))
        elif t < 0:
            cands.update(Fraction(int(t), w) for w in range(-bound, 0))
    return sorted(cands)


def targets_for_alpha(
    inst: Instance, mms: Sequence[int], alpha: Fraction
) -> list[int]:
    """Per-machine integer targets encoding "every factor is >= alpha"."""
    vacuous = -(inst.n * inst.v_max)
    phi = []
    for t in mms:
        if t > 0:
            phi.append(math.ceil(alpha * t))
        elif t < 0:
            # Negative references bind only for positive alpha; any
            # nonpositive alpha is implied by them automatically.
            phi.append(math.ceil(Fraction(int(t)) / alpha) if alpha > 0 else vacuous)
        else:
            phi.append(0)
    return phi


def _mms_or_report(
    inst: Instance, kind: str, engine: str, caps: Caps, t0: float, threads: int = 1
) -> tuple[list[int | float], SolveReport | None]:
    mms_engine = "dp" if engine == "matching" else engine
    mms, feasible = compute_mms(inst, mms_engine, caps, threads=threads)
    if not feasible:
        return mms, SolveReport(
            kind=kind,
            status="infeasible",
            value=None,
            schedule=None,
            machine_values=None,
            mms=mms,
            engine=engine,
            seconds=time.perf_counter() - t0,
        )
    return mms, None


def _finish(
    inst: Instance,
    kind: str,
    value,
    schedule: Schedule | None,
    mms,
    engine: str,
    t0: float,
    status: str = "optimal",
) -> SolveReport:
    vals = None
    if schedule is not None:
        if not schedule_feasible(schedule, inst):
            raise AssertionError("engine returned an infeasible witness")
        vals = machine_values(schedule, inst)
    return SolveReport(
        kind=kind,
        status=status,
        value=value,
        schedule=schedule,
        machine_values=vals,
        mms=list(mms) if mms is not None else None,
        engine=engine,
        seconds=time.perf_counter() - t0,
    )


def solve_exact(
    inst: Instance,
    targets: Sequence[int],
    engine: str = "auto",
    caps: Caps = DEFAULT_CAPS,
) -> SolveReport:
    """Any feasible schedule meeting the given targets."""
    t0 = time.perf_counter()
    engine = resolve_engine(inst, engine, caps, objective="exact")
    if engine == "matching":
        raise InputError("the matching engine does not answer target queries")
    schedule = feasibility_prober(inst, engine, caps)(list(targets))
    if schedule is None:
        return _finish(inst, "exact", None, None, None, engine, t0, "infeasible")
    return _finish(inst, "exact", None, schedule, None, engine, t0, "feasible")


def solve_mult(
    inst: Instance, engine: str = "auto", caps: Caps = DEFAULT_CAPS, threads: int = 1
) -> SolveReport:
    """Maximize the minimum per-machine multiplicative factor.

    Exact rational search over the discrete candidate set; +inf when every
    reference is nonpositive and all machines can be kept nonnegative,
    -inf when some zero-reference machine is forced negative.
    """
    t0 = time.perf_counter()
    engine = resolve_engine(inst, engine, caps, objective="mult")
    if engine == "matching":
        raise InputError("the matching engine does not optimize the factor objective")
    if engine == "oracle":
        rep = oracle_report(inst, caps)
        if not rep.feasible:
            return _finish(inst, "mult", None, None, rep.mms, engine, t0, "infeasible")
        return _finish(inst, "mult", rep.best_mult, rep.witness_mult, rep.mms, engine, t0)

    mms, fail = _mms_or_report(inst, "mult", engine, caps, t0, threads)
    if fail is not None:
        return fail
    probe_targets = feasibility_prober(inst, engine, caps)
    mms_int = [int(t) for t in mms]

    if not any(t > 0 for t in mms_int):
        s = probe_targets([0] * inst.m)
        if s is not None:
            return _finish(inst, "mult", POS_INF, s, mms, engine, t0)

    cands = alpha_candidates(inst, mms_int)
    record = ProbeRecord("mult candidates", direction="down")
    PROBE_LOG.append(record)

    def probe_alpha(alpha: Fraction) -> Schedule | None:
        s = probe_targets(targets_for_alpha(inst, mms_int, alpha))
        record.points.append((alpha, s is not None))
        return s

    best: tuple[Fraction, Schedule] | None = None
    lo, hi = 0, len(cands) - 1
    if cands:
        s = probe_alpha(cands[0])
        if s is not None:
            best = (cands[0], s)
            while lo < hi:
                mid = (lo + hi + 1) // 2
                s = probe_alpha(cands[mid])
                if s is not None:
                    best = (cands[mid], s)
                    lo = mid
                else:
                    hi = mid - 1
    if best is None:
        # Unreachable multiplicatively (a zero-reference machine is forced
        # negative, or no candidates exist): report the sentinel with any
        # feasible schedule as witness.
        vacuous = [-(inst.n * inst.v_max)] * inst.m
        s = probe_targets(vacuous)
        if s is None:
            return _finish(inst, "mult", None, None, mms, engine, t0, "infeasible")
        return _finish(inst, "mult", NEG_INF, s, mms, engine, t0)
    return _finish(inst, "mult", best[0], best[1], mms, engine, t0)


def solve_add(
    inst: Instance,
    engine: str = "auto",
    caps: Caps = DEFAULT_CAPS,
    method: str = "auto",
    threads: int = 1,
) -> SolveReport:
    """Minimize the largest per-machine shortfall from its MMS value.

    method "search" probes targets mms_i - delta with a binary search;
    "objective" solves the single-slack linear program (block engines
    only); "auto" picks "objective" for those and "search" otherwise.
    """
    t0 = time.perf_counter()
    engine = resolve_engine(inst, engine, caps, objective="add")
    if engine == "matching":
        raise InputError("the matching engine does not optimize the shortfall objective")
    if engine == "oracle":
        rep = oracle_report(inst, caps)
        if not rep.feasible:
            return _finish(inst, "add", None, None, rep.mms, engine, t0, "infeasible")
        return _finish(inst, "add", rep.best_add, rep.witness_add, rep.mms, engine, t0)

    mms, fail = _mms_or_report(inst, "add", engine, caps, t0, threads)
    if fail is not None:
        return fail
    mms_int = [int(t) for t in mms]
    if method == "auto":
        method = "objective" if engine.startswith("nfold-") else "search"

    if method == "objective":
        if not engine.startswith("nfold-"):
            raise InputError("the linear-objective path needs a block engine")
        build = build_layer_nfold if engine == "nfold-layers" else build_deadline_nfold
        from .formulations import attach_add_objective

        program = attach_add_objective(build(inst, [0] * inst.m, caps), mms_int)
        solution = nfold_solve(program, caps)
        if solution is None:
            return _finish(inst, "add", None, None, mms, engine, t0, "infeasible")
        schedule = decode_schedule(program, solution.y)
        return _finish(inst, "add", solution.objective, schedule, mms, engine, t0)

    probe_targets = feasibility_prober(inst, engine, caps)

    def probe(delta: int) -> Schedule | None:
        return probe_targets([t - delta for t in mms_int])

    found = _search_min_feasible(
        0, inst.n * inst.v_max, probe, f"add {engine}"
    )
    if found is None:
        return _finish(inst, "add", None, None, mms, engine, t0, "infeasible")
    return _finish(inst, "add", found[0], found[1], mms, engine, t0)


def solve_welfare(
    inst: Instance, engine: str = "auto", caps: Caps = DEFAULT_CAPS, threads: int = 1
) -> SolveReport:
    """Minimize the summed per-machine shortfalls from the MMS values."""
    t0 = time.perf_counter()
    engine = resolve_engine(inst, engine, caps, objective="welfare")
    if engine == "dp":
        raise InputError(
            "the subset DP cannot optimize summed shortfalls; use matching or a block engine"
        )
    if engine == "oracle":
        rep = oracle_report(inst, caps)
        if not rep.feasible:
            return _finish(inst, "welfare", None, None, rep.mms, engine, t0, "infeasible")
        return _finish(
            inst, "welfare", rep.best_welfare, rep.witness_welfare, rep.mms, engine, t0
        )

    mms, fail = _mms_or_report(inst, "welfare", engine, caps, t0, threads)
    if fail is not None:
        return fail
    mms_int = [int(t) for t in mms]

    if engine == "matching":
        result = matching_wf(inst, mms_int, caps)
        if result is None:
            return _finish(inst, "welfare", None, None, mms, engine, t0, "infeasible")
        total, schedule = result
        return _finish(inst, "welfare", total, schedule, mms, engine, t0)

    build = build_layer_nfold if engine == "nfold-layers" else build_deadline_nfold
    from .formulations import attach_welfare_objective

    program = attach_welfare_objective(build(inst, [0] * inst.m, caps), mms_int)
    solution = nfold_solve(program, caps)
    if solution is None:
        return _finish(inst, "welfare", None, None, mms, engine, t0, "infeasible")
    schedule = decode_schedule(program, solution.y)
    return _finish(inst, "welfare", solution.objective, schedule, mms, engine, t0)


def solve_rejection_budget(
    inst: Instance,
    targets: Sequence[int],
    engine: str = "auto",
    caps: Caps = DEFAULT_CAPS,
) -> SolveReport:
    """Minimum total rejection penalty that makes the targets feasible."""
    t0 = time.perf_counter()
    if not inst.has_penalties:
        raise InputError("rejection questions require penalties on every job")
    if engine == "auto":
        engine = "nfold-deadlines"
    if engine == "oracle":
        found = oracle_min_rejection_budget(inst, targets, caps)
        if found is None:
            return _finish(inst, "budget", None, None, None, engine, t0, "infeasible")
        budget, schedule = found
        return _finish(inst, "budget", budget, schedule, None, engine, t0)
    if engine not in ("nfold-layers", "nfold-deadlines"):
        raise InputError("rejection questions need a block engine or the oracle")

    base = build_rejection_variant(
        inst,
        targets,
        budget=0,
        base="layers" if engine == "nfold-layers" else "deadlines",
        caps=caps,
    )

    def probe(budget: int) -> Schedule | None:
        program = with_budget(base, budget)
        solution = nfold_solve(program, caps)
        return None if solution is None else decode_schedule(program, solution.y)

    hi = inst.n * inst.w_max
    found = _search_min_feasible(0, hi, probe, f"budget {engine}")
    if found is None:
        return _finish(inst, "budget", None, None, None, engine, t0, "infeasible")
    budget, schedule = found
    return _finish(inst, "budget", budget, schedule, None, engine, t0)
