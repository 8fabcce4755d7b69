"""Engines parameterized by the job count: feasibility DP over
(machine-prefix x job-subset) and the direct MMS-value DP.

Both run over bitmask tables indexed by subsets of the jobs in group-major
deadline order, which makes per-mask feasibility an O(1) extension of the
mask without its top bit. Row recurrences use submask enumeration (3^n
total work) through the compiled kernels.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import kernels
from .caps import DEFAULT_CAPS, Caps
from .core import NEG_INF, CapExceeded, Instance, Schedule


def _check_cap(inst: Instance, caps: Caps) -> None:
    if inst.n > caps.dp_jobs:
        raise CapExceeded(
            f"subset DP handles up to {caps.dp_jobs} jobs, instance has {inst.n}; "
            "use the block-structured engines instead"
        )


def _job_order(inst: Instance) -> list[int]:
    return [t for members in inst.group_members for t in members]


def _feasible_masks(inst: Instance, order: Sequence[int]) -> np.ndarray:
    """Boolean table over all 2^n masks: mask schedulable on one machine.

    Bit i of a mask refers to order[i]. Because the order is group-major
    with deadlines ascending inside each group, the top bit of a mask is
    the last job (EDF-wise) of its group within the mask, so feasibility
    extends the bit-stripped mask by a single prefix-load check.
    """
    n = len(order)
    size = 1 << n
    feas = np.ones(size, dtype=bool)
    gpsum = np.zeros(size, dtype=np.int64)
    group_bits = [0] * max(inst.num_groups, 1)
    prior = np.arange(max(size >> 1, 1), dtype=np.int64)
    for i in range(n):
        job = inst.jobs[order[i]]
        lo = 1 << i
        earlier = group_bits[job.group]
        if earlier:
            same = (prior[:lo] & earlier) != 0
            gp = np.where(same, gpsum[:lo], 0) + job.p
        else:
            gp = np.full(lo, job.p, dtype=np.int64)
        feas[lo : 2 * lo] = feas[:lo] & (gp <= job.d)
        gpsum[lo : 2 * lo] = gp
        group_bits[job.group] |= lo
    return feas


def _mask_values(values: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Subset sums of one machine's valuation over all masks."""
    n = len(order)
    out = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        lo = 1 << i
        out[lo : 2 * lo] = out[:lo] + int(values[order[i]])
    return out


def dp_mms(inst: Instance, i: int, caps: Caps = DEFAULT_CAPS) -> int | float:
    """MMS value of machine i, or core.NEG_INF when no feasible full
    schedule exists."""
    _check_cap(inst, caps)
    if not 0 <= i < inst.m:
        raise IndexError(f"machine index {i} out of range")
    order = _job_order(inst)
    feas = _feasible_masks(inst, order)
    sums = _mask_values(inst.values_of(i), order)
    f = np.where(feas, sums, kernels.NEG_INF).astype(np.int64)
    result = kernels.mms_rows(f, inst.m)
    return NEG_INF if result <= kernels.NEG_INF else int(result)


def dp_feasible(
    inst: Instance, targets: Sequence[int], caps: Caps = DEFAULT_CAPS
) -> Schedule | None:
    """A feasible schedule giving every machine at least its target value,
    reconstructed by back-tracing the DP; None when no such schedule exists."""
    _check_cap(inst, caps)
    if len(targets) != inst.m:
        raise ValueError("targets length must equal machine count")
    order = _job_order(inst)
    n = len(order)
    size = 1 << n
    feas = _feasible_masks(inst, order)
    dmaps = np.empty((inst.m, size), dtype=np.uint8)
    for k in range(inst.m):
        sums = _mask_values(inst.values_of(k), order)
        dmaps[k] = feas & (sums >= int(targets[k]))
    ok, choices, final_sub = kernels.feasible_rows(dmaps)
    if not ok:
        return None
    full = size - 1
    bundles_by_mask = [0] * inst.m
    if inst.m == 1:
        bundles_by_mask[0] = full
    else:
        bundles_by_mask[inst.m - 1] = final_sub
        rest = full ^ final_sub
        for k in range(inst.m - 2, 0, -1):
            sub = int(choices[k - 1][rest])
            bundles_by_mask[k] = sub
            rest ^= sub
        bundles_by_mask[0] = rest
    assignment = [0] * inst.n
    for k, mask in enumerate(bundles_by_mask):
        for i in range(n):
            if mask >> i & 1:
                assignment[order[i]] = k
    return Schedule(tuple(assignment))
