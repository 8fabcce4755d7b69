"""Pure-Python fallback for the compiled inner loops.

Mirrors mms_sched._kernels exactly; selected by mms_sched.kernels when the
compiled extension is unavailable (or MMS_SCHED_PURE_PY is set). Semantics
are identical; only speed differs.
"""

from __future__ import annotations

import numpy as np

#: Distinguished "no feasible schedule" value for the subset DP. Chosen so
#: that min/max comparisons never overflow int64.
NEG_INF = -(2**62)


def mms_rows(f, m: int) -> int:
    """Final cell of the machine-by-machine (max, min) subset recurrence.

    `f[S]` is the value of subset S on one machine, NEG_INF when S is not
    feasibly schedulable. Row k keeps, per subset, the best achievable
    minimum bundle value over k machines; only the full-set cell of the
    last row is needed, so the final row is evaluated at that single cell.
    """
    f = list(f)
    size = len(f)
    full = size - 1
    if m == 1:
        return f[full]
    prev = f
    for _ in range(2, m):
        row = [NEG_INF] * size
        for mask in range(size):
            best = NEG_INF
            sub = mask
            while True:
                fs = f[sub]
                if fs > best:
                    other = prev[mask ^ sub]
                    cand = other if other < fs else fs
                    if cand > best:
                        best = cand
                if sub == 0:
                    break
                sub = (sub - 1) & mask
            row[mask] = best
        prev = row
    best = NEG_INF
    sub = full
    while True:
        fs = f[sub]
        if fs > best:
            other = prev[full ^ sub]
            cand = other if other < fs else fs
            if cand > best:
                best = cand
        if sub == 0:
            break
        sub = (sub - 1) & full
    return best


def feasible_rows(dmaps) -> tuple[bool, np.ndarray, int]:
    """Feasibility recurrence with witness choices.

    `dmaps[k][S]` says machine k accepts bundle S (feasible and on target).
    Returns (reachable, choices, final_sub): choices[k-1][S] is the bundle
    machine k takes in a split of S over machines 0..k (or -1), recorded
    for machines 1..m-2; final_sub is machine m-1's bundle in the full-set
    split. Machine 0 always takes the remainder.
    """
    dmaps = np.asarray(dmaps, dtype=np.uint8)
    m, size = dmaps.shape
    full = size - 1
    choices = np.full((max(m - 2, 0), size), -1, dtype=np.int64)
    if m == 1:
        ok = bool(dmaps[0][full])
        return ok, choices, (full if ok else -1)
    prev = dmaps[0].astype(bool)
    for k in range(1, m - 1):
        dk = dmaps[k]
        row = np.zeros(size, dtype=bool)
        ch = choices[k - 1]
        for mask in range(size):
            sub = mask
            while True:
                if dk[sub] and prev[mask ^ sub]:
                    row[mask] = True
                    ch[mask] = sub
                    break
                if sub == 0:
                    break
                sub = (sub - 1) & mask
        prev = row
    dk = dmaps[m - 1]
    sub = full
    while True:
        if dk[sub] and prev[full ^ sub]:
            return True, choices, sub
        if sub == 0:
            break
        sub = (sub - 1) & full
    return False, choices, -1


def nfold_step(
    keys,
    objs,
    prev_base,
    prev_stride,
    prev_width,
    cand_g,
    cand_obj,
    senses,
    band_lo,
    band_hi,
    new_base,
    new_stride,
):
    """One block transition of the clipped global-state DP.

    States are per-global-row accumulated sums, canonicalized against the
    layer's viability band [band_lo, band_hi] (sense 0 '<=': values below
    the band merge up; sense 2 '>=': values above merge down; sense 1 '=':
    values outside are pruned) and packed into a single integer key.
    Returns the surviving states with, per state, the best objective and
    its (predecessor slot, candidate index) for reconstruction.
    """
    keys = [int(x) for x in keys]
    objs = [int(x) for x in objs]
    prev_base = [int(x) for x in prev_base]
    prev_stride = [int(x) for x in prev_stride]
    prev_width = [int(x) for x in prev_width]
    g_rows = [[int(x) for x in row] for row in np.asarray(cand_g)]
    cand_obj = [int(x) for x in cand_obj]
    senses = [int(x) for x in senses]
    band_lo = [int(x) for x in band_lo]
    band_hi = [int(x) for x in band_hi]
    new_base = [int(x) for x in new_base]
    new_stride = [int(x) for x in new_stride]
    r = len(prev_base)

    slot_of: dict[int, int] = {}
    out_keys: list[int] = []
    out_objs: list[int] = []
    parents: list[int] = []
    cand_ids: list[int] = []

    for si, key in enumerate(keys):
        c = [prev_base[q] + (key // prev_stride[q]) % prev_width[q] for q in range(r)]
        obj = objs[si]
        for ci, grow in enumerate(g_rows):
            nkey = 0
            ok = True
            for q in range(r):
                v = c[q] + grow[q]
                s = senses[q]
                if s == 0:
                    if v > band_hi[q]:
                        ok = False
                        break
                    if v < band_lo[q]:
                        v = band_lo[q]
                elif s == 2:
                    if v < band_lo[q]:
                        ok = False
                        break
                    if v > band_hi[q]:
                        v = band_hi[q]
                else:
                    if v < band_lo[q] or v > band_hi[q]:
                        ok = False
                        break
                nkey += (v - new_base[q]) * new_stride[q]
            if not ok:
                continue
            nobj = obj + cand_obj[ci]
            slot = slot_of.get(nkey)
            if slot is None:
                slot_of[nkey] = len(out_keys)
                out_keys.append(nkey)
                out_objs.append(nobj)
                parents.append(si)
                cand_ids.append(ci)
            elif nobj < out_objs[slot]:
                out_objs[slot] = nobj
                parents[slot] = si
                cand_ids[slot] = ci

    return (
        np.array(out_keys, dtype=np.int64),
        np.array(out_objs, dtype=np.int64),
        np.array(parents, dtype=np.int64),
        np.array(cand_ids, dtype=np.int64),
    )
