"""Builders that express scheduling questions as block-structured programs.

Two encodings: blocks-per-layer (one selection variable per feasible layer
schedule, good when layers are small) and blocks-per-job (one 0/1 variable
per machine, good when there are few distinct deadlines and small
processing times). Both carry decoding metadata on the program so
solutions round-trip to schedules. Objective attachments add slack
variables as extra one-variable blocks so the block structure is kept.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .caps import DEFAULT_CAPS, Caps
from .core import LATE, CapExceeded, InputError, Instance, Schedule, deadline_classes
from .nfold import NFoldProgram


@dataclass(frozen=True)
class LayerEntry:
    """One feasible assignment of a layer's jobs to machines.

    `assignment[j]` is the machine of the layer's j-th job (group-major
    EDF order); the LATE slot (index m) may appear only in rejection
    variants. `values[i]` is machine i's total for its share of the layer;
    `penalty` the summed weight of the layer's LATE jobs.
    """

    assignment: tuple[int, ...]
    values: tuple[int, ...]
    penalty: int


@dataclass(frozen=True)
class LayerCatalog:
    members: tuple[tuple[int, ...], ...]      # job indices per layer
    entries: tuple[tuple[LayerEntry, ...], ...]
    include_late: bool


def build_layer_catalog(
    inst: Instance, caps: Caps = DEFAULT_CAPS, include_late: bool = False
) -> LayerCatalog:
    """Enumerate every feasible layer schedule, layer by layer.

    Assignments are generated directly (machines^jobs with incremental EDF
    pruning); the LATE slot skips the feasibility check.
    """
    m = inst.m
    all_entries = []
    for g, members in enumerate(inst.group_members):
        jobs = [inst.jobs[t] for t in members]
        entries: list[LayerEntry] = []
        loads = [0] * m
        assign = [0] * len(jobs)

        def rec(pos: int) -> None:
            if pos == len(jobs):
                values = [0] * m
                penalty = 0
                for idx, job in enumerate(jobs):
                    k = assign[idx]
                    if k == m:
                        penalty += job.penalty or 0
                    else:
                        values[k] += job.values[k]
                entries.append(LayerEntry(tuple(assign), tuple(values), penalty))
                if len(entries) > caps.catalog_entries:
                    raise CapExceeded(
                        f"layer {g}: schedule catalog exceeds cap "
                        f"{caps.catalog_entries}"
                    )
                return
            job = jobs[pos]
            for k in range(m):
                if loads[k] + job.p <= job.d:
                    loads[k] += job.p
                    assign[pos] = k
                    rec(pos + 1)
                    loads[k] -= job.p
            if include_late:
                assign[pos] = m
                rec(pos + 1)
            assign[pos] = 0

        rec(0)
        all_entries.append(tuple(entries))
    return LayerCatalog(
        members=inst.group_members,
        entries=tuple(all_entries),
        include_late=include_late,
    )


@dataclass
class ProgramMeta:
    """Decoding context attached to built programs."""

    kind: str                       # "layers" | "deadlines"
    inst: Instance
    value_rows: tuple[int, ...]     # global row index per machine
    catalog: LayerCatalog | None = None
    job_order: tuple[int, ...] | None = None
    include_late: bool = False
    budget_row: int | None = None
    num_schedule_blocks: int = 0    # blocks that encode the schedule
    slack_blocks: tuple[int, ...] = ()


def build_layer_nfold(
    inst: Instance,
    targets: Sequence[int],
    caps: Caps = DEFAULT_CAPS,
    catalog: LayerCatalog | None = None,
    budget: int | None = None,
) -> NFoldProgram:
    """Blocks are layers; block k picks exactly one catalog schedule.

    Global rows demand each machine's summed value meet its target; with a
    budget, an extra row caps the total penalty of LATE jobs.
    """
    if len(targets) != inst.m:
        raise InputError("targets length must equal machine count")
    include_late = budget is not None
    if include_late and not inst.has_penalties:
        raise InputError("rejection variant requires penalties on every job")
    if catalog is None or catalog.include_late != include_late:
        catalog = build_layer_catalog(inst, caps, include_late)
    layers = max(len(catalog.entries), 1)
    width = max((len(es) for es in catalog.entries), default=0)
    t = max(width, 1)
    m = inst.m
    r = m + (1 if include_late else 0)

    C, D, b, lo, hi = [], [], [], [], []
    for k in range(layers):
        entries = catalog.entries[k] if k < len(catalog.entries) else ()
        Ck = np.zeros((r, t), dtype=np.int64)
        for j, e in enumerate(entries):
            for i in range(m):
                Ck[i, j] = e.values[i]
            if include_late:
                Ck[m, j] = e.penalty
        Dk = np.zeros((1, t), dtype=np.int64)
        Dk[0, : len(entries)] = 1
        C.append(Ck)
        D.append(Dk)
        # A layer with no feasible schedule keeps RHS 1 over an all-zero
        # row: no candidate satisfies it, making the program infeasible.
        b.append([1] if catalog.entries else [0])
        lo.append([0] * t)
        hi.append([1] * len(entries) + [0] * (t - len(entries)))
    a = [int(x) for x in targets]
    senses = [">="] * m
    if include_late:
        a.append(int(budget))
        senses.append("<=")
    program = NFoldProgram(
        C=C,
        D=D,
        a=a,
        global_senses=tuple(senses),
        b=b,
        local_senses=("=",),
        lo=lo,
        hi=hi,
    )
    program.meta = ProgramMeta(
        kind="layers",
        inst=inst,
        value_rows=tuple(range(m)),
        catalog=catalog,
        include_late=include_late,
        budget_row=m if include_late else None,
        num_schedule_blocks=layers if catalog.entries else 0,
    )
    return program


def build_deadline_nfold(
    inst: Instance,
    targets: Sequence[int],
    caps: Caps = DEFAULT_CAPS,
    budget: int | None = None,
) -> NFoldProgram:
    """Blocks are jobs; block variables pick the job's machine.

    Global rows: per machine and per deadline class (classes taken within
    each group, groups run against their own time origin), the assigned
    processing time with deadlines up to the class bound must fit it; per
    machine, assigned value must meet the target. Blocks are ordered by
    group and deadline so load rows freeze as their class completes.
    """
    if len(targets) != inst.m:
        raise InputError("targets length must equal machine count")
    include_late = budget is not None
    if include_late and not inst.has_penalties:
        raise InputError("rejection variant requires penalties on every job")
    m = inst.m
    order = [t for members in inst.group_members for t in members]
    t_width = m + (1 if include_late else 0)

    load_rows: list[tuple[int, int, int]] = []  # (machine, group, class bound)
    for g in range(inst.num_groups):
        classes = deadline_classes(inst, g)
        for dk in classes.values:
            for i in range(m):
                load_rows.append((i, g, dk))
    r = len(load_rows) + m + (1 if include_late else 0)
    value_row0 = len(load_rows)

    C, D, b, lo, hi = [], [], [], [], []
    for jt in order:
        job = inst.jobs[jt]
        Ck = np.zeros((r, t_width), dtype=np.int64)
        for row, (i, g, dk) in enumerate(load_rows):
            if job.group == g and job.d <= dk:
                Ck[row, i] = job.p
        for i in range(m):
            Ck[value_row0 + i, i] = job.values[i]
        if include_late:
            Ck[r - 1, m] = job.penalty or 0
        Dk = np.ones((1, t_width), dtype=np.int64)
        C.append(Ck)
        D.append(Dk)
        b.append([1])
        lo.append([0] * t_width)
        hi.append([1] * t_width)
    if not order:  # no jobs: a single all-fixed block keeps N >= 1
        C.append(np.zeros((r, t_width), dtype=np.int64))
        D.append(np.zeros((1, t_width), dtype=np.int64))
        b.append([0])
        lo.append([0] * t_width)
        hi.append([0] * t_width)

    a = [dk for (_, _, dk) in load_rows] + [int(x) for x in targets]
    senses = ["<="] * len(load_rows) + [">="] * m
    if include_late:
        a.append(int(budget))
        senses.append("<=")
    program = NFoldProgram(
        C=C,
        D=D,
        a=a,
        global_senses=tuple(senses),
        b=b,
        local_senses=("=",),
        lo=lo,
        hi=hi,
    )
    program.meta = ProgramMeta(
        kind="deadlines",
        inst=inst,
        value_rows=tuple(range(value_row0, value_row0 + m)),
        job_order=tuple(order),
        include_late=include_late,
        budget_row=r - 1 if include_late else None,
        num_schedule_blocks=len(order),
    )
    return program


def build_rejection_variant(
    inst: Instance,
    targets: Sequence[int],
    budget: int,
    base: str = "deadlines",
    caps: Caps = DEFAULT_CAPS,
) -> NFoldProgram:
    """Either builder extended with a LATE slot: rejected jobs skip the
    deadline rows and their penalties must total at most the budget."""
    if budget < 0:
        raise InputError("budget must be >= 0")
    if base == "deadlines":
        return build_deadline_nfold(inst, targets, caps, budget=budget)
    if base == "layers":
        return build_layer_nfold(inst, targets, caps, budget=budget)
    raise InputError(f"unknown base builder {base!r}")


def _require_meta(program: NFoldProgram) -> ProgramMeta:
    if not isinstance(program.meta, ProgramMeta):
        raise InputError("program was not produced by a formulation builder")
    return program.meta


def with_targets(program: NFoldProgram, targets: Sequence[int]) -> NFoldProgram:
    """Same program with the machine-value rows re-targeted (cheap: block
    matrices and enumerated candidates are shared)."""
    meta = _require_meta(program)
    a = list(program.a)
    for i, row in enumerate(meta.value_rows):
        a[row] = int(targets[i])
    clone = program.with_global_rhs(a)
    clone.meta = meta
    return clone


def with_budget(program: NFoldProgram, budget: int) -> NFoldProgram:
    meta = _require_meta(program)
    if meta.budget_row is None:
        raise InputError("program has no rejection budget row")
    a = list(program.a)
    a[meta.budget_row] = int(budget)
    clone = program.with_global_rhs(a)
    clone.meta = meta
    return clone


def decode_schedule(program: NFoldProgram, y: Sequence[int]) -> Schedule:
    """Schedule encoded by a solution vector of either builder."""
    meta = _require_meta(program)
    inst = meta.inst
    t = program.t
    assignment = [0] * inst.n
    if meta.kind == "layers":
        catalog = meta.catalog
        assert catalog is not None
        for k, members in enumerate(catalog.members):
            block = y[k * t : (k + 1) * t]
            chosen = [j for j, x in enumerate(block) if x]
            if len(chosen) != 1:
                raise InputError(f"layer {k}: solution selects {len(chosen)} schedules")
            entry = catalog.entries[k][chosen[0]]
            for pos, jt in enumerate(members):
                k_target = entry.assignment[pos]
                assignment[jt] = LATE if k_target == inst.m else k_target
    else:
        assert meta.job_order is not None
        for pos, jt in enumerate(meta.job_order):
            block = y[pos * t : (pos + 1) * t]
            chosen = [i for i, x in enumerate(block) if x]
            if len(chosen) != 1:
                raise InputError(
                    f"job {inst.jobs[jt].id!r}: solution selects {len(chosen)} machines"
                )
            assignment[jt] = LATE if chosen[0] == inst.m else chosen[0]
    return Schedule(tuple(assignment))


def encode_schedule(program: NFoldProgram, schedule: Schedule) -> list[int]:
    """Solution vector representing a schedule (slack blocks, if any, are
    set to their smallest row-satisfying values)."""
    meta = _require_meta(program)
    inst = meta.inst
    t = program.t
    y = [0] * (program.N * t)
    if meta.kind == "layers":
        catalog = meta.catalog
        assert catalog is not None
        for k, members in enumerate(catalog.members):
            part = tuple(
                inst.m if schedule.assignment[jt] == LATE else schedule.assignment[jt]
                for jt in members
            )
            for j, entry in enumerate(catalog.entries[k]):
                if entry.assignment == part:
                    y[k * t + j] = 1
                    break
            else:
                raise InputError(f"layer {k}: schedule not in catalog")
    else:
        assert meta.job_order is not None
        for pos, jt in enumerate(meta.job_order):
            k = schedule.assignment[jt]
            col = inst.m if k == LATE else k
            if col == inst.m and not meta.include_late:
                raise InputError("schedule uses LATE but program has no LATE slot")
            y[pos * t + col] = 1
    for bi in meta.slack_blocks:
        rows = [int(q) for q in np.nonzero(program.C[bi][:, 0])[0]]
        needed = max(
            int(program.a[row]) - _row_sum_without_slacks(program, row, y)
            for row in rows
        )
        lo_v, hi_v = program.lo[bi][0], program.hi[bi][0]
        y[bi * t] = min(max(needed, lo_v), hi_v)
    return y


def _row_sum_without_slacks(program: NFoldProgram, row: int, y: Sequence[int]) -> int:
    meta = _require_meta(program)
    t = program.t
    total = 0
    for i in range(meta.num_schedule_blocks):
        Ci = program.C[i]
        total += sum(int(Ci[row, j]) * int(y[i * t + j]) for j in range(t))
    return total


def _append_slack_block(
    program: NFoldProgram, rows: Sequence[int], upper: int
) -> int:
    """Append a one-variable block whose first column feeds +1 into each
    given global row; returns the new block index."""
    t = program.t
    r = program.r
    Cz = np.zeros((r, t), dtype=np.int64)
    for row in rows:
        Cz[row, 0] = 1
    Dz = np.zeros((program.s, t), dtype=np.int64)
    program.C.append(Cz)
    program.D.append(Dz)
    program.b.append([0] * program.s)
    program.lo.append([0] * t)
    program.hi.append([max(int(upper), 0)] + [0] * (t - 1))
    return program.N - 1


def _clone_for_attach(program: NFoldProgram) -> NFoldProgram:
    meta = _require_meta(program)
    clone = NFoldProgram(
        C=list(program.C),
        D=list(program.D),
        a=list(program.a),
        global_senses=program.global_senses,
        b=list(program.b),
        local_senses=program.local_senses,
        lo=list(program.lo),
        hi=list(program.hi),
        objective=None,
    )
    clone.meta = ProgramMeta(
        kind=meta.kind,
        inst=meta.inst,
        value_rows=meta.value_rows,
        catalog=meta.catalog,
        job_order=meta.job_order,
        include_late=meta.include_late,
        budget_row=meta.budget_row,
        num_schedule_blocks=meta.num_schedule_blocks,
        slack_blocks=meta.slack_blocks,
    )
    return clone


def attach_add_objective(
    program: NFoldProgram, mms: Sequence[int]
) -> NFoldProgram:
    """Minimize the single slack z with every machine-value row relaxed to
    v_i + z >= mms_i. The slack lives in an extra one-variable block, so
    the block structure is unchanged."""
    meta = _require_meta(program)
    inst = meta.inst
    p = _clone_for_attach(program)
    for i, row in enumerate(p.meta.value_rows):
        p.a[row] = int(mms[i])
    # n*v_max always suffices: any target is at most the positive part of
    # the valuation, any value at least minus the negative part.
    zb = _append_slack_block(p, list(p.meta.value_rows), inst.n * inst.v_max)
    p.meta.slack_blocks = p.meta.slack_blocks + (zb,)
    p.objective = [0] * (p.N * p.t)
    p.objective[zb * p.t] = 1
    return p


def attach_welfare_objective(
    program: NFoldProgram, mms: Sequence[int]
) -> NFoldProgram:
    """Minimize the sum of per-machine slacks z_i with v_i + z_i >= mms_i.

    z_i is capped by mms_i plus the machine's total negative value, the
    largest shortfall any schedule can produce; mixed-manna values make
    the cap exceed mms_i itself whenever chores are unavoidable.
    """
    meta = _require_meta(program)
    inst = meta.inst
    p = _clone_for_attach(program)
    slack_blocks = []
    for i, row in enumerate(p.meta.value_rows):
        p.a[row] = int(mms[i])
        neg = sum(max(-j.values[i], 0) for j in inst.jobs)
        slack_blocks.append(_append_slack_block(p, [row], int(mms[i]) + neg))
    p.meta.slack_blocks = p.meta.slack_blocks + tuple(slack_blocks)
    p.objective = [0] * (p.N * p.t)
    for zb in slack_blocks:
        p.objective[zb * p.t] = 1
    return p
