"""Exhaustive ground-truth solver for desk-scale instances.

Enumerates every assignment of jobs to machines (optionally plus a LATE
slot), pruning by incremental per-machine per-group EDF checks. Every
other engine is tested against this module, so it deliberately shares no
code with them beyond the core data model.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .caps import DEFAULT_CAPS, Caps
from .core import (
    LATE,
    NEG_INF,
    CapExceeded,
    Instance,
    Schedule,
    alpha_of,
)


def _check_cap(inst: Instance, caps: Caps, slots: int) -> None:
    total = slots**inst.n
    if total > caps.oracle_assignments:
        raise CapExceeded(
            f"instance too large for oracle: {slots}^{inst.n} = {total} "
            f"assignments exceeds cap {caps.oracle_assignments}"
        )


def _enumerate(
    inst: Instance,
    on_leaf: Callable[[list[int]], None],
    allow_late: bool = False,
    prune: Callable[[list[int], int], bool] | None = None,
) -> None:
    """Depth-first over all feasible assignments, jobs in EDF order.

    Jobs are placed group by group in deadline order, so one running load
    per (machine, group) realizes the EDF prefix check; an overloaded
    prefix prunes the whole subtree (feasibility is monotone under job
    removal). `on_leaf` receives the assignment indexed by job position.
    """
    order = [t for members in inst.group_members for t in members]
    loads = [[0] * max(inst.num_groups, 1) for _ in range(inst.m)]
    assignment = [0] * inst.n

    def rec(pos: int) -> None:
        if pos == len(order):
            on_leaf(assignment)
            return
        t = order[pos]
        job = inst.jobs[t]
        for i in range(inst.m):
            if loads[i][job.group] + job.p <= job.d:
                loads[i][job.group] += job.p
                assignment[t] = i
                if prune is None or not prune(assignment, pos):
                    rec(pos + 1)
                loads[i][job.group] -= job.p
        if allow_late:
            assignment[t] = LATE
            rec(pos + 1)
        assignment[t] = 0

    rec(0)


@dataclass
class OracleReport:
    """Ground truth for one instance: per-machine MMS values, the three
    objective optima, and witness schedules attaining them exactly."""

    mms: list[int | float]
    feasible_count: int
    best_mult: Fraction | float | None = None
    best_add: int | None = None
    best_welfare: int | None = None
    witness_mult: Schedule | None = None
    witness_add: Schedule | None = None
    witness_welfare: Schedule | None = None

    @property
    def feasible(self) -> bool:
        return self.feasible_count > 0


def oracle_mms_vector(inst: Instance, caps: Caps = DEFAULT_CAPS) -> tuple[list[int | float], int]:
    """MMS value of every machine plus the feasible-allocation count.

    For each feasible full allocation, machine i scores the minimum bundle
    value under its own valuation; MMS_i is the maximum such score. All
    machines get NEG_INF when no feasible full allocation exists.
    """
    _check_cap(inst, caps, inst.m)
    m = inst.m
    best: list[int | float] = [NEG_INF] * m
    count = 0
    # acc[i][k] = value machine i assigns to machine k's bundle.
    acc = [[0] * m for _ in range(m)]

    def on_leaf(assignment: list[int]) -> None:
        nonlocal count
        count += 1
        for i in range(m):
            row = acc[i]
            for t, k in enumerate(assignment):
                row[k] += inst.jobs[t].values[i]
            low = min(row)
            if low > best[i]:
                best[i] = low
            for k in range(m):
                row[k] = 0

    _enumerate(inst, on_leaf)
    return best, count


def oracle_mms(inst: Instance, i: int, caps: Caps = DEFAULT_CAPS) -> int | float:
    vec, _ = oracle_mms_vector(inst, caps)
    return vec[i]


def oracle_exact(
    inst: Instance, targets: Sequence[int], caps: Caps = DEFAULT_CAPS
) -> Schedule | None:
    """Any feasible schedule with v_i >= targets[i] for every machine."""
    _check_cap(inst, caps, inst.m)
    found: list[Schedule | None] = [None]

    def on_leaf(assignment: list[int]) -> None:
        if found[0] is not None:
            return
        vals = [0] * inst.m
        for t, k in enumerate(assignment):
            vals[k] += inst.jobs[t].values[k]
        if all(v >= phi for v, phi in zip(vals, targets)):
            found[0] = Schedule(tuple(assignment))

    _enumerate(inst, on_leaf)
    return found[0]


def oracle_report(inst: Instance, caps: Caps = DEFAULT_CAPS) -> OracleReport:
    """Full report: MMS vector and the exact mult/add/welfare optima."""
    mms, count = oracle_mms_vector(inst, caps)
    report = OracleReport(mms=mms, feasible_count=count)
    if count == 0:
        return report

    best_mult: Fraction | float | None = None
    best_add: int | None = None
    best_welfare: int | None = None
    wit: dict[str, Schedule | None] = {"mult": None, "add": None, "welfare": None}

    def on_leaf(assignment: list[int]) -> None:
        nonlocal best_mult, best_add, best_welfare
        vals = [0] * inst.m
        for t, k in enumerate(assignment):
            vals[k] += inst.jobs[t].values[k]
        alpha = min(alpha_of(v, t) for v, t in zip(vals, mms))
        deltas = [max(t - v, 0) for v, t in zip(vals, mms)]
        add, welfare = max(deltas), sum(deltas)
        if best_mult is None or alpha > best_mult:
            best_mult = alpha
            wit["mult"] = Schedule(tuple(assignment))
        if best_add is None or add < best_add:
            best_add = add
            wit["add"] = Schedule(tuple(assignment))
        if best_welfare is None or welfare < best_welfare:
            best_welfare = welfare
            wit["welfare"] = Schedule(tuple(assignment))

    _enumerate(inst, on_leaf)
    report.best_mult = best_mult
    report.best_add = best_add
    report.best_welfare = best_welfare
    report.witness_mult = wit["mult"]
    report.witness_add = wit["add"]
    report.witness_welfare = wit["welfare"]
    return report


def oracle_solve(
    inst: Instance,
    kind: str,
    targets: Sequence[int] | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> OracleReport | Schedule | None:
    """Dispatch: kind 'exact' needs targets and returns Schedule | None;
    kinds 'mult' / 'add' / 'welfare' return the full OracleReport."""
    if kind == "exact":
        if targets is None:
            raise ValueError("kind 'exact' requires targets")
        return oracle_exact(inst, targets, caps)
    if kind in ("mult", "add", "welfare"):
        return oracle_report(inst, caps)
    raise ValueError(f"unknown oracle kind {kind!r}")


def oracle_min_rejection_budget(
    inst: Instance, targets: Sequence[int], caps: Caps = DEFAULT_CAPS
) -> tuple[int, Schedule] | None:
    """Minimum total penalty of LATE jobs that makes the targets feasible.

    Enumerates all (m+1)^n assignments; None when the targets are out of
    reach even with every job rejected.
    """
    if not inst.has_penalties:
        raise ValueError("rejection oracle requires penalties on every job")
    _check_cap(inst, caps, inst.m + 1)
    best: list[tuple[int, Schedule] | None] = [None]

    def on_leaf(assignment: list[int]) -> None:
        vals = [0] * inst.m
        cost = 0
        for t, k in enumerate(assignment):
            if k == LATE:
                cost += inst.jobs[t].penalty or 0
            else:
                vals[k] += inst.jobs[t].values[k]
        if best[0] is not None and cost >= best[0][0]:
            return
        if all(v >= phi for v, phi in zip(vals, targets)):
            best[0] = (cost, Schedule(tuple(assignment)))

    _enumerate(inst, on_leaf, allow_late=True)
    return best[0]
