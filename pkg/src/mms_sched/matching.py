"""Welfare engine for small job counts: enumerate feasible partitions of
the jobs into bundles, then assign bundles to machines by a min-weight
perfect matching.

Edge weights are the per-machine shortfalls max(ref_i - v_i(bundle), 0);
machines matched to a dummy (padding) vertex receive the empty bundle and
therefore weigh max(ref_i, 0).
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .caps import DEFAULT_CAPS, Caps
from .core import CapExceeded, Instance, Schedule

_INF = 1 << 60


def hungarian(cost: Sequence[Sequence[int]]) -> tuple[int, list[int]]:
    """Min-cost perfect matching on a square integer matrix.

    Potentials-based successive shortest augmenting paths, O(n^3). Returns
    (total cost, column index matched to each row).
    """
    n = len(cost)
    if any(len(row) != n for row in cost):
        raise ValueError("cost matrix must be square")
    # 1-based internal arrays; p[j] = row matched to column j.
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [_INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = _INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    match = [0] * n
    for j in range(1, n + 1):
        match[p[j] - 1] = j - 1
    total = sum(cost[i][match[i]] for i in range(n))
    return total, match


def iter_feasible_partitions(
    inst: Instance, max_bundles: int
) -> Iterator[list[list[int]]]:
    """All partitions of the jobs into at most max_bundles nonempty bundles
    where every bundle is per-group EDF feasible.

    Canonical restricted-growth order (bundles appear in order of their
    first job, jobs taken group-major by deadline), so each set partition
    is produced exactly once; infeasible prefixes are pruned.
    """
    order = [t for members in inst.group_members for t in members]
    n = len(order)
    if n == 0:
        yield []
        return
    groups = max(inst.num_groups, 1)
    bundles: list[list[int]] = []
    loads: list[list[int]] = []

    def rec(pos: int) -> Iterator[list[list[int]]]:
        if pos == n:
            yield [list(b) for b in bundles]
            return
        t = order[pos]
        job = inst.jobs[t]
        for b in range(len(bundles)):
            if loads[b][job.group] + job.p <= job.d:
                bundles[b].append(t)
                loads[b][job.group] += job.p
                yield from rec(pos + 1)
                loads[b][job.group] -= job.p
                bundles[b].pop()
        if len(bundles) < max_bundles and job.p <= job.d:
            bundles.append([t])
            loads.append([0] * groups)
            loads[-1][job.group] = job.p
            yield from rec(pos + 1)
            bundles.pop()
            loads.pop()

    yield from rec(0)


def matching_wf(
    inst: Instance, ref: Sequence[int], caps: Caps = DEFAULT_CAPS
) -> tuple[int, Schedule] | None:
    """Minimum total shortfall sum over all feasible schedules, with a
    witness; None when no feasible partition exists.

    `ref` is the per-machine reference vector (normally the MMS values,
    from the subset DP or the oracle).
    """
    if inst.n > caps.matching_jobs:
        raise CapExceeded(
            f"partition enumeration handles up to {caps.matching_jobs} jobs, "
            f"instance has {inst.n}"
        )
    if len(ref) != inst.m:
        raise ValueError("reference vector length must equal machine count")
    m = inst.m
    dummy_cost = [max(int(r), 0) for r in ref]
    best: tuple[int, Schedule] | None = None
    for bundles in iter_feasible_partitions(inst, min(inst.n, m) or 0):
        k = len(bundles)
        cost = []
        for i in range(m):
            vals = [sum(inst.jobs[t].values[i] for t in b) for b in bundles]
            cost.append(
                [max(int(ref[i]) - v, 0) for v in vals] + [dummy_cost[i]] * (m - k)
            )
        total, match = hungarian(cost)
        if best is None or total < best[0]:
            chosen = [bundles[c] if c < k else [] for c in match]
            best = (total, Schedule.from_bundles(chosen, inst.n))
    return best
