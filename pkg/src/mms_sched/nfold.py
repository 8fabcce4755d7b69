"""Block-structured integer programs and an exact solver for desk scale.

A program has N blocks of t integer variables each. Deleting the r global
rows decomposes it into N independent blocks of s local rows. The solver
sweeps blocks left to right keeping, per reachable vector of global-row
sums, the best objective; sums are canonicalized against per-layer
viability bands so equivalent states merge and hopeless states prune. All
arithmetic is integer-exact and every returned solution is re-verified by
the independent checker.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Sequence

import numpy as np

from . import kernels
from .caps import DEFAULT_CAPS, Caps
from .core import CapExceeded

SENSES = ("<=", "=", ">=")
_SENSE_CODE = {"<=": 0, "=": 1, ">=": 2}


@dataclass
class NFoldProgram:
    """N blocks; global rows couple the blocks, local rows do not.

    C[i] (r x t) are the global coefficients of block i, D[i] (s x t) the
    local ones; a / b[i] are the right-hand sides with per-row senses;
    lo[i] / hi[i] box-bound the block's variables. `objective`, when set,
    is minimized; otherwise any feasible point is acceptable. `meta` is
    builder-provided decoding context, ignored by solver and checker.
    """

    C: list[np.ndarray]
    D: list[np.ndarray]
    a: list[int]
    global_senses: tuple[str, ...]
    b: list[list[int]]
    local_senses: tuple[str, ...]
    lo: list[list[int]]
    hi: list[list[int]]
    objective: list[int] | None = None
    meta: Any = field(default=None, compare=False, repr=False)

    @property
    def N(self) -> int:
        return len(self.C)

    @property
    def r(self) -> int:
        return len(self.a)

    @property
    def s(self) -> int:
        return len(self.local_senses)

    @property
    def t(self) -> int:
        return self.C[0].shape[1] if self.C else 0

    @property
    def delta(self) -> int:
        entries = [int(np.abs(M).max()) for M in self.C + self.D if M.size]
        return max(entries, default=0)

    def validate(self) -> None:
        if self.N == 0:
            raise ValueError("program needs at least one block")
        r, s, t = self.r, self.s, self.t
        if len(self.D) != self.N or len(self.b) != self.N:
            raise ValueError("C, D, b must have one entry per block")
        if len(self.lo) != self.N or len(self.hi) != self.N:
            raise ValueError("bounds must have one entry per block")
        for sense in self.global_senses + self.local_senses:
            if sense not in SENSES:
                raise ValueError(f"unknown sense {sense!r}")
        if len(self.global_senses) != r:
            raise ValueError("one sense per global row required")
        for i in range(self.N):
            if self.C[i].shape != (r, t) or self.D[i].shape != (s, t):
                raise ValueError(f"block {i}: inconsistent matrix shape")
            if len(self.b[i]) != s:
                raise ValueError(f"block {i}: local RHS length != s")
            if len(self.lo[i]) != t or len(self.hi[i]) != t:
                raise ValueError(f"block {i}: bounds length != t")
            if any(l > h for l, h in zip(self.lo[i], self.hi[i])):
                raise ValueError(f"block {i}: empty box bound")
        if self.objective is not None and len(self.objective) != self.N * t:
            raise ValueError("objective length must be N*t")

    def with_global_rhs(self, a: Sequence[int]) -> "NFoldProgram":
        """Copy with new global right-hand sides; matrices (and therefore
        the enumerated block candidates) are shared."""
        if len(a) != self.r:
            raise ValueError("RHS length must equal global row count")
        clone = replace(self, a=[int(x) for x in a])
        clone.__dict__["_candidates"] = self.__dict__.get("_candidates")
        return clone

    # -- candidate enumeration -------------------------------------------

    def block_candidates(self, caps: Caps = DEFAULT_CAPS) -> list[tuple]:
        """Per block: (Y, G, w) with Y the local-feasible points within the
        box, G = C Y^T their global-row contributions, w their objective
        terms. Cached; shared across with_global_rhs copies."""
        cached = self.__dict__.get("_candidates")
        if cached is not None:
            return cached
        out = []
        t = self.t
        for i in range(self.N):
            ys = _local_points(
                self.D[i], self.b[i], self.local_senses, self.lo[i], self.hi[i], caps
            )
            Y = np.array(ys, dtype=np.int64).reshape(len(ys), t)
            G = Y @ self.C[i].T if len(ys) else np.zeros((0, self.r), np.int64)
            if self.objective is not None and len(ys):
                w = Y @ np.asarray(self.objective[i * t : (i + 1) * t], np.int64)
            else:
                w = np.zeros(len(ys), dtype=np.int64)
            out.append((Y, np.ascontiguousarray(G), w))
        self.__dict__["_candidates"] = out
        return out

    # -- debug dump -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "blocks": self.N,
            "global_rows": self.r,
            "local_rows": self.s,
            "vars_per_block": self.t,
            "C": [M.reshape(-1).tolist() for M in self.C],
            "D": [M.reshape(-1).tolist() for M in self.D],
            "a": list(self.a),
            "global_senses": list(self.global_senses),
            "b": [list(row) for row in self.b],
            "local_senses": list(self.local_senses),
            "lo": [list(row) for row in self.lo],
            "hi": [list(row) for row in self.hi],
            "objective": None if self.objective is None else list(self.objective),
        }

    def dump(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "NFoldProgram":
        r = data["global_rows"]
        s = data["local_rows"]
        t = data["vars_per_block"]
        p = cls(
            C=[np.array(flat, np.int64).reshape(r, t) for flat in data["C"]],
            D=[np.array(flat, np.int64).reshape(s, t) for flat in data["D"]],
            a=[int(x) for x in data["a"]],
            global_senses=tuple(data["global_senses"]),
            b=[[int(x) for x in row] for row in data["b"]],
            local_senses=tuple(data["local_senses"]),
            lo=[[int(x) for x in row] for row in data["lo"]],
            hi=[[int(x) for x in row] for row in data["hi"]],
            objective=None if data["objective"] is None else list(data["objective"]),
        )
        p.validate()
        return p


@dataclass(frozen=True)
class NFoldSolution:
    y: tuple[int, ...]
    objective: int | None


def _sense_ok(lhs: int, sense: str, rhs: int) -> bool:
    if sense == "<=":
        return lhs <= rhs
    if sense == ">=":
        return lhs >= rhs
    return lhs == rhs


def nfold_check(p: NFoldProgram, y: Sequence[int]) -> bool:
    """Independent exact verification of every row and box bound."""
    t = p.t
    y = [int(x) for x in y]
    if len(y) != p.N * t:
        return False
    for i in range(p.N):
        yi = y[i * t : (i + 1) * t]
        if any(v < l or v > h for v, l, h in zip(yi, p.lo[i], p.hi[i])):
            return False
        for row in range(p.s):
            lhs = sum(int(p.D[i][row, j]) * yi[j] for j in range(t))
            if not _sense_ok(lhs, p.local_senses[row], int(p.b[i][row])):
                return False
    for row in range(p.r):
        lhs = 0
        for i in range(p.N):
            yi = y[i * t : (i + 1) * t]
            lhs += sum(int(p.C[i][row, j]) * yi[j] for j in range(t))
        if not _sense_ok(lhs, p.global_senses[row], int(p.a[row])):
            return False
    return True


def _local_points(
    D: np.ndarray,
    b: Sequence[int],
    senses: tuple[str, ...],
    lo: Sequence[int],
    hi: Sequence[int],
    caps: Caps,
) -> list[tuple[int, ...]]:
    """Integer points of the box satisfying the local rows.

    Free coordinates are searched depth-first with per-row reachability
    pruning; the one-hot pattern every assignment block uses (single
    equality row, 0/1 coefficients and bounds, RHS 1) is recognized and
    enumerated directly so wide blocks stay cheap.
    """
    t = len(lo)
    s = D.shape[0]
    lo = [int(x) for x in lo]
    hi = [int(x) for x in hi]
    base = [sum(int(D[row, j]) * lo[j] for j in range(t)) for row in range(s)]
    free = [j for j in range(t) if lo[j] < hi[j]]

    if not free:
        point = tuple(lo)
        ok = all(
            _sense_ok(base[row], senses[row], int(b[row])) for row in range(s)
        )
        return [point] if ok else []

    one_hot = (
        s == 1
        and senses[0] == "="
        and all(lo[j] == 0 and hi[j] == 1 for j in free)
        and all(int(D[0, j]) in (0, 1) for j in free)
        and int(b[0]) - base[0] == 1
    )
    if one_hot and len(free) > 16:
        pts = []
        for j in free:
            if int(D[0, j]) == 1:
                y = list(lo)
                y[j] = 1
                pts.append(tuple(y))
        if len(pts) > caps.nfold_block_candidates:
            raise CapExceeded(
                f"block candidate count {len(pts)} exceeds cap "
                f"{caps.nfold_block_candidates}"
            )
        return pts

    if len(free) > 24:
        raise CapExceeded(
            f"block with {len(free)} free variables is too wide to enumerate"
        )

    # Remaining-contribution envelopes over free coords from position k on.
    nfree = len(free)
    smin = [[0] * s for _ in range(nfree + 1)]
    smax = [[0] * s for _ in range(nfree + 1)]
    for k in range(nfree - 1, -1, -1):
        j = free[k]
        for row in range(s):
            c = int(D[row, j])
            span = c * (hi[j] - lo[j])
            smin[k][row] = smin[k + 1][row] + min(span, 0)
            smax[k][row] = smax[k + 1][row] + max(span, 0)

    pts: list[tuple[int, ...]] = []
    y = list(lo)
    partial = list(base)

    def rec(k: int) -> None:
        for row in range(s):
            sense = senses[row]
            rhs = int(b[row])
            if sense in ("<=", "=") and partial[row] + smin[k][row] > rhs:
                return
            if sense in (">=", "=") and partial[row] + smax[k][row] < rhs:
                return
        if k == nfree:
            pts.append(tuple(y))
            if len(pts) > caps.nfold_block_candidates:
                raise CapExceeded(
                    f"block candidate count exceeds cap {caps.nfold_block_candidates}"
                )
            return
        j = free[k]
        col = [int(D[row, j]) for row in range(s)]
        for val in range(lo[j], hi[j] + 1):
            y[j] = val
            for row in range(s):
                partial[row] += col[row] * (val - lo[j])
            rec(k + 1)
            for row in range(s):
                partial[row] -= col[row] * (val - lo[j])
        y[j] = lo[j]

    rec(0)
    return pts


def _row_ranges(width: Sequence[int], limit: int = 5) -> str:
    offenders = sorted(range(len(width)), key=lambda q: -width[q])[:limit]
    return ", ".join(f"row {q}: width {width[q]}" for q in offenders)


def _layer_geometry(p: NFoldProgram, cands: list[tuple], caps: Caps):
    """Per-layer canonical bases, widths, strides, and viability bands.

    Layer i holds states after the first i blocks. Band_i = [a - Rmax_i,
    a - Rmin_i] with Rmin/Rmax the extreme remaining contributions; the
    canonical range intersects it with the prefix-reachable range per the
    merge rule of each sense. Returns None if some layer admits no state.
    """
    r = p.r
    N = p.N
    gmin = np.zeros((N, r), dtype=object)
    gmax = np.zeros((N, r), dtype=object)
    for i, (_, G, _) in enumerate(cands):
        if G.shape[0] == 0:
            return None
        gmin[i] = [int(x) for x in G.min(axis=0)]
        gmax[i] = [int(x) for x in G.max(axis=0)]
    pmin = [[0] * r]
    pmax = [[0] * r]
    for i in range(N):
        pmin.append([pmin[-1][q] + gmin[i][q] for q in range(r)])
        pmax.append([pmax[-1][q] + gmax[i][q] for q in range(r)])
    rmin = [[0] * r for _ in range(N + 1)]
    rmax = [[0] * r for _ in range(N + 1)]
    for i in range(N - 1, -1, -1):
        rmin[i] = [rmin[i + 1][q] + gmin[i][q] for q in range(r)]
        rmax[i] = [rmax[i + 1][q] + gmax[i][q] for q in range(r)]

    bases, widths, strides, blos, bhis = [], [], [], [], []
    peak = 0
    for i in range(N + 1):
        blo = [p.a[q] - rmax[i][q] for q in range(r)]
        bhi = [p.a[q] - rmin[i][q] for q in range(r)]
        base = [0] * r
        top = [0] * r
        for q in range(r):
            sense = p.global_senses[q]
            if sense == "<=":
                base[q] = max(pmin[i][q], blo[q])
                top[q] = max(blo[q], min(pmax[i][q], bhi[q]))
            elif sense == ">=":
                base[q] = min(bhi[q], max(pmin[i][q], blo[q]))
                top[q] = min(pmax[i][q], bhi[q])
            else:
                base[q] = max(pmin[i][q], blo[q])
                top[q] = min(pmax[i][q], bhi[q])
        width = [top[q] - base[q] + 1 for q in range(r)]
        if any(w <= 0 for w in width):
            return None
        count = 1
        for w in width:
            count *= w
        peak = max(peak, count)
        # The width product only bounds the packed keys; the live-state cap
        # is enforced per layer during the sweep (ranges correlate heavily,
        # so actual state counts sit far below this product).
        if count > 2**62:
            raise CapExceeded(
                f"global-state key space {count} at layer {i} cannot be "
                f"packed ({_row_ranges(width)})"
            )
        stride = [1] * r
        for q in range(1, r):
            stride[q] = stride[q - 1] * width[q - 1]
        bases.append(base)
        widths.append(width)
        strides.append(stride)
        blos.append(blo)
        bhis.append(bhi)
    return bases, widths, strides, blos, bhis


def nfold_solve(
    p: NFoldProgram, caps: Caps = DEFAULT_CAPS
) -> NFoldSolution | None:
    """Exact optimum (or any feasible point when no objective is set);
    None when the program is infeasible."""
    p.validate()
    cands = p.block_candidates(caps)
    r = p.r
    geometry = _layer_geometry(p, cands, caps)
    if geometry is None:
        return None
    bases, widths, strides, blos, bhis = geometry
    sense_codes = np.array(
        [_SENSE_CODE[sn] for sn in p.global_senses], dtype=np.int8
    )

    # Initial state: all-zero sums canonicalized against layer 0's band.
    key0 = 0
    for q in range(r):
        v = 0
        code = sense_codes[q]
        if code == 0:
            if v > bhis[0][q]:
                return None
            v = max(v, blos[0][q])
        elif code == 2:
            if v < blos[0][q]:
                return None
            v = min(v, bhis[0][q])
        else:
            if v < blos[0][q] or v > bhis[0][q]:
                return None
        key0 += (v - bases[0][q]) * strides[0][q]

    keys = np.array([key0], dtype=np.int64)
    objs = np.array([0], dtype=np.int64)
    trail: list[tuple[np.ndarray, np.ndarray]] = []

    as_i64 = lambda xs: np.array(xs, dtype=np.int64)
    for i in range(p.N):
        _, G, w = cands[i]
        if len(keys) * G.shape[0] > caps.nfold_states:
            raise CapExceeded(
                f"clipped global-state space needs {len(keys)} states x "
                f"{G.shape[0]} transitions at layer {i}, beyond cap "
                f"{caps.nfold_states} ({_row_ranges(widths[i])})"
            )
        keys, objs, parents, cand_ids = kernels.nfold_step(
            keys,
            objs,
            as_i64(bases[i]),
            as_i64(strides[i]),
            as_i64(widths[i]),
            G,
            np.ascontiguousarray(w, dtype=np.int64),
            sense_codes,
            as_i64(blos[i + 1]),
            as_i64(bhis[i + 1]),
            as_i64(bases[i + 1]),
            as_i64(strides[i + 1]),
        )
        if len(keys) == 0:
            return None
        trail.append((parents, cand_ids))

    slot = int(np.argmin(objs)) if p.objective is not None else 0
    value = int(objs[slot]) if p.objective is not None else None
    blocks: list[tuple[int, ...]] = []
    for i in range(p.N - 1, -1, -1):
        parents, cand_ids = trail[i]
        Y = cands[i][0]
        blocks.append(tuple(int(x) for x in Y[int(cand_ids[slot])]))
        slot = int(parents[slot])
    blocks.reverse()
    y = tuple(v for block in blocks for v in block)
    solution = NFoldSolution(y=y, objective=value)
    if not nfold_check(p, y):
        raise AssertionError("solver produced a solution that fails nfold_check")
    return solution
