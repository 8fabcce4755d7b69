# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: subset-DP recurrences and the block-state DP step.

mms_sched._kernels_py is the reference fallback; both must stay in exact
behavioral agreement (tests compare them cell by cell).
"""

import numpy as np

NEG_INF = -(2**62)

cdef long long C_NEG = -(2**62)


def mms_rows(long long[::1] f, int m):
    """Final cell of the machine-by-machine (max, min) subset recurrence."""
    cdef Py_ssize_t size = f.shape[0]
    cdef Py_ssize_t full = size - 1
    cdef Py_ssize_t mask, sub
    cdef long long best, fs, other, cand
    if m == 1:
        return int(f[full])
    prev_arr = np.asarray(f).copy()
    cdef long long[::1] prev = prev_arr
    cdef long long[::1] row
    cdef int k
    for k in range(2, m):
        row_arr = np.empty(size, dtype=np.int64)
        row = row_arr
        with nogil:
            for mask in range(size):
                best = C_NEG
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
        prev_arr = row_arr
        prev = row
    best = C_NEG
    sub = full
    with nogil:
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
    return int(best)


def feasible_rows(unsigned char[:, ::1] dmaps):
    """Feasibility recurrence with witness choices (see fallback docstring)."""
    cdef Py_ssize_t m = dmaps.shape[0]
    cdef Py_ssize_t size = dmaps.shape[1]
    cdef Py_ssize_t full = size - 1
    cdef Py_ssize_t mask, sub
    cdef int k
    choices_arr = np.full((max(m - 2, 0), size), -1, dtype=np.int64)
    cdef long long[:, ::1] choices = choices_arr
    if m == 1:
        ok = bool(dmaps[0, full])
        return ok, choices_arr, (full if ok else -1)
    prev_arr = np.asarray(dmaps[0]).copy()
    cdef unsigned char[::1] prev = prev_arr
    cdef unsigned char[::1] row
    cdef unsigned char[::1] dk
    for k in range(1, m - 1):
        dk = dmaps[k]
        row_arr = np.zeros(size, dtype=np.uint8)
        row = row_arr
        with nogil:
            for mask in range(size):
                sub = mask
                while True:
                    if dk[sub] and prev[mask ^ sub]:
                        row[mask] = 1
                        choices[k - 1, mask] = sub
                        break
                    if sub == 0:
                        break
                    sub = (sub - 1) & mask
        prev_arr = row_arr
        prev = row
    dk = dmaps[m - 1]
    cdef long long found = -1
    with nogil:
        sub = full
        while True:
            if dk[sub] and prev[full ^ sub]:
                found = sub
                break
            if sub == 0:
                break
            sub = (sub - 1) & full
    if found >= 0:
        return True, choices_arr, int(found)
    return False, choices_arr, -1


def nfold_step(
    long long[::1] keys,
    long long[::1] objs,
    long long[::1] prev_base,
    long long[::1] prev_stride,
    long long[::1] prev_width,
    long long[:, ::1] cand_g,
    long long[::1] cand_obj,
    signed char[::1] senses,
    long long[::1] band_lo,
    long long[::1] band_hi,
    long long[::1] new_base,
    long long[::1] new_stride,
):
    """One block transition of the clipped global-state DP (see fallback)."""
    cdef Py_ssize_t nk = keys.shape[0]
    cdef Py_ssize_t nc = cand_g.shape[0]
    cdef Py_ssize_t r = prev_base.shape[0]
    cdef Py_ssize_t si, ci, q
    cdef long long key, obj, v, nkey, nobj
    cdef signed char s
    cdef bint ok

    c_arr = np.empty(r, dtype=np.int64)
    cdef long long[::1] c = c_arr

    cdef dict slot_of = {}
    cdef list out_keys = []
    cdef list out_objs = []
    cdef list parents = []
    cdef list cand_ids = []
    cdef Py_ssize_t slot

    for si in range(nk):
        key = keys[si]
        obj = objs[si]
        for q in range(r):
            c[q] = prev_base[q] + (key // prev_stride[q]) % prev_width[q]
        for ci in range(nc):
            nkey = 0
            ok = True
            for q in range(r):
                v = c[q] + cand_g[ci, q]
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
            cached = slot_of.get(nkey)
            if cached is None:
                slot_of[nkey] = len(out_keys)
                out_keys.append(nkey)
                out_objs.append(nobj)
                parents.append(si)
                cand_ids.append(ci)
            else:
                slot = <Py_ssize_t> cached
                if nobj < <long long> out_objs[slot]:
                    out_objs[slot] = nobj
                    parents[slot] = si
                    cand_ids[slot] = ci

    return (
        np.array(out_keys, dtype=np.int64),
        np.array(out_objs, dtype=np.int64),
        np.array(parents, dtype=np.int64),
        np.array(cand_ids, dtype=np.int64),
    )
