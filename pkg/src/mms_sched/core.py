"""Instance/schedule data model, EDF feasibility, and objective arithmetic.

Jobs carry a processing time, a deadline, a group (layer) id, and one
integer valuation per machine (mixed manna: values may be negative).
A bundle is feasible on one machine iff running its jobs in nondecreasing
deadline order meets every deadline; groups are scheduled independently,
each against its own time origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

#: Sentinel machine index for rejected (late) jobs.
LATE = -1

#: Infinity sentinels for multiplicative ratios. Used only for comparison
#: and reporting, never in arithmetic with finite values.
POS_INF = math.inf
NEG_INF = -math.inf


class InputError(ValueError):
    """Malformed instance, schedule, or operation argument."""


class CapExceeded(RuntimeError):
    """An engine refused an input larger than its configured cap."""


@dataclass(frozen=True)
class Job:
    """One job: processing time, deadline, group id, per-machine values."""

    id: str
    p: int
    d: int
    values: tuple[int, ...]
    group: int = 0
    penalty: int | None = None

    def __post_init__(self):
        if self.p < 0 or self.d < 0:
            raise InputError(f"job {self.id!r}: p and d must be >= 0")
        if self.group < 0:
            raise InputError(f"job {self.id!r}: group must be >= 0")
        if self.penalty is not None and self.penalty < 0:
            raise InputError(f"job {self.id!r}: penalty must be >= 0")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))


@dataclass(frozen=True)
class Instance:
    """m machines and an ordered list of jobs.

    Group ids are renumbered to 0..num_groups-1 (order of sorted original
    ids) on construction; all derived parameters are recomputed from the
    job list, never stored.
    """

    m: int
    jobs: tuple[Job, ...]

    def __post_init__(self):
        if self.m < 1:
            raise InputError("machine count must be >= 1")
        jobs = tuple(self.jobs)
        ids = [j.id for j in jobs]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate job ids")
        for j in jobs:
            if len(j.values) != self.m:
                raise InputError(
                    f"job {j.id!r}: expected {self.m} values, got {len(j.values)}"
                )
        with_penalty = [j for j in jobs if j.penalty is not None]
        if with_penalty and len(with_penalty) != len(jobs):
            raise InputError("penalty must be set on every job or on none")
        remap = {g: k for k, g in enumerate(sorted({j.group for j in jobs}))}
        if any(remap[j.group] != j.group for j in jobs):
            jobs = tuple(
                Job(j.id, j.p, j.d, j.values, remap[j.group], j.penalty) for j in jobs
            )
        object.__setattr__(self, "jobs", jobs)

    @property
    def n(self) -> int:
        return len(self.jobs)

    @cached_property
    def num_groups(self) -> int:
        return len({j.group for j in self.jobs}) if self.jobs else 0

    @cached_property
    def group_members(self) -> tuple[tuple[int, ...], ...]:
        """Job indices per group, each in EDF order (deadline, then index)."""
        buckets: list[list[int]] = [[] for _ in range(self.num_groups)]
        for t, j in enumerate(self.jobs):
            buckets[j.group].append(t)
        return tuple(
            tuple(sorted(b, key=lambda t: (self.jobs[t].d, t))) for b in buckets
        )

    @cached_property
    def g_max(self) -> int:
        return max((len(b) for b in self.group_members), default=0)

    @cached_property
    def v_max(self) -> int:
        return max((abs(v) for j in self.jobs for v in j.values), default=0)

    @cached_property
    def p_max(self) -> int:
        return max((j.p for j in self.jobs), default=0)

    @cached_property
    def d_max(self) -> int:
        return max((j.d for j in self.jobs), default=0)

    @cached_property
    def num_deadlines(self) -> int:
        return len({j.d for j in self.jobs})

    @cached_property
    def has_penalties(self) -> bool:
        return bool(self.jobs) and all(j.penalty is not None for j in self.jobs)

    @cached_property
    def w_max(self) -> int:
        return max((j.penalty or 0 for j in self.jobs), default=0)

    def values_of(self, i: int) -> tuple[int, ...]:
        return tuple(j.values[i] for j in self.jobs)

    def with_uniform_values(self, i: int) -> "Instance":
        """Copy where every machine uses machine i's valuation."""
        jobs = tuple(
            Job(j.id, j.p, j.d, (j.values[i],) * self.m, j.group, j.penalty)
            for j in self.jobs
        )
        return Instance(self.m, jobs)


@dataclass(frozen=True)
class DeadlineClasses:
    """Distinct deadlines D_0 < ... < D_{k-1} of one group, and each job's class."""

    values: tuple[int, ...]
    class_of: Mapping[int, int]


def deadline_classes(inst: Instance, group: int | None = None) -> DeadlineClasses:
    members = (
        range(inst.n)
        if group is None
        else inst.group_members[group]
        if group < inst.num_groups
        else ()
    )
    ds = sorted({inst.jobs[t].d for t in members})
    rank = {d: k for k, d in enumerate(ds)}
    return DeadlineClasses(tuple(ds), {t: rank[inst.jobs[t].d] for t in members})


def edf_feasible(bundle: Iterable[int], inst: Instance) -> bool:
    """Single-machine feasibility of a one-group bundle.

    Sorts by nondecreasing deadline (ties by index) and checks every prefix
    sum of processing times against the prefix's last deadline. The caller
    splits multi-group bundles first; mixing groups here is an error.
    """
    idx = sorted(set(bundle))
    if idx and (idx[0] < 0 or idx[-1] >= inst.n):
        raise InputError("bundle index out of range")
    if len({inst.jobs[t].group for t in idx}) > 1:
        raise InputError("edf_feasible expects a single-group bundle")
    idx.sort(key=lambda t: (inst.jobs[t].d, t))
    load = 0
    for t in idx:
        load += inst.jobs[t].p
        if load > inst.jobs[t].d:
            return False
    return True


def _edf_feasible_classwise(bundle: Iterable[int], inst: Instance) -> bool:
    # Equivalent characterization: per distinct deadline D, the total
    # processing time of bundle jobs with d <= D fits within D.
    idx = sorted(set(bundle))
    if len({inst.jobs[t].group for t in idx}) > 1:
        raise InputError("expects a single-group bundle")
    for dk in sorted({inst.jobs[t].d for t in idx}):
        if sum(inst.jobs[t].p for t in idx if inst.jobs[t].d <= dk) > dk:
            return False
    return True


@dataclass(frozen=True)
class Schedule:
    """Total assignment of jobs to machines (LATE marks rejected jobs)."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(x) for x in self.assignment))

    @classmethod
    def from_bundles(cls, bundles: Sequence[Iterable[int]], n: int) -> "Schedule":
        assignment = [LATE] * n
        for i, b in enumerate(bundles):
            for t in b:
                assignment[t] = i
        return cls(tuple(assignment))

    def bundles(self, m: int) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(m)]
        for t, i in enumerate(self.assignment):
            if i != LATE:
                out[i].append(t)
        return out

    def late_jobs(self) -> list[int]:
        return [t for t, i in enumerate(self.assignment) if i == LATE]


def validate_schedule(s: Schedule, inst: Instance, allow_late: bool = False) -> None:
    if len(s.assignment) != inst.n:
        raise InputError(
            f"schedule covers {len(s.assignment)} jobs, instance has {inst.n}"
        )
    for t, i in enumerate(s.assignment):
        if i == LATE:
            if not allow_late:
                raise InputError(f"job {inst.jobs[t].id!r} marked LATE")
        elif not 0 <= i < inst.m:
            raise InputError(f"job {inst.jobs[t].id!r}: machine index {i} out of range")


def schedule_feasible(s: Schedule, inst: Instance) -> bool:
    """True iff every machine's per-group sub-bundle passes EDF.

    LATE jobs are exempt from feasibility (they are rejected, not run).
    """
    validate_schedule(s, inst, allow_late=True)
    # Jobs per group are already deadline-sorted; one incremental load per
    # (machine, group) realizes the EDF prefix check.
    loads = [[0] * inst.num_groups for _ in range(inst.m)]
    for members in inst.group_members:
        for t in members:
            i = s.assignment[t]
            if i == LATE:
                continue
            j = inst.jobs[t]
            loads[i][j.group] += j.p
            if loads[i][j.group] > j.d:
                return False
    return True


def value_of(s: Schedule, i: int, inst: Instance) -> int:
    """Additive value machine i assigns to its own bundle (empty -> 0)."""
    return sum(
        inst.jobs[t].values[i] for t, k in enumerate(s.assignment) if k == i
    )


def machine_values(s: Schedule, inst: Instance) -> list[int]:
    vals = [0] * inst.m
    for t, k in enumerate(s.assignment):
        if k != LATE:
            vals[k] += inst.jobs[t].values[k]
    return vals


def total_penalty(s: Schedule, inst: Instance) -> int:
    return sum(inst.jobs[t].penalty or 0 for t in s.late_jobs())


def alpha_of(v: int, mms_i: int) -> Fraction | float:
    """Largest multiplicative factor machine i certifies with value v.

    mms_i > 0: v / mms_i.  mms_i < 0: mms_i / v for v < 0, else +inf.
    mms_i = 0: the constraint reads v >= 0 for every factor, so +inf when
    it holds and -inf (unreachable) when v < 0.
    """
    if mms_i > 0:
        return Fraction(v, mms_i)
    if mms_i < 0:
        return Fraction(mms_i, v) if v < 0 else POS_INF
    return POS_INF if v >= 0 else NEG_INF


def objective_of(
    inst: Instance, s: Schedule, mms: Sequence[int], kind: str
) -> Fraction | float | int:
    """Evaluate a schedule against per-machine reference values.

    kind "mult": min_i of the largest per-machine factor (exact rational,
    +-inf sentinels). kind "add": max_i of the shortfalls
    max(mms_i - v_i, 0). kind "welfare": their sum.
    """
    if len(mms) != inst.m:
        raise InputError("mms vector length must equal machine count")
    vals = machine_values(s, inst)
    if kind == "mult":
        return min(alpha_of(v, t) for v, t in zip(vals, mms))
    deltas = [max(t - v, 0) for v, t in zip(vals, mms)]
    if kind == "add":
        return max(deltas)
    if kind == "welfare":
        return sum(deltas)
    raise InputError(f"unknown objective kind {kind!r}")
