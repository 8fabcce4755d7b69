"""Backend selection for the hot inner loops.

Prefers the compiled extension (mms_sched._kernels, Cython) and falls back
to the pure-Python twin. Set MMS_SCHED_PURE_PY=1 to force the fallback;
benchmarks/bench_kernels.py compares the two.
"""

from __future__ import annotations

import os

if os.environ.get("MMS_SCHED_PURE_PY"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

NEG_INF = _impl.NEG_INF
mms_rows = _impl.mms_rows
feasible_rows = _impl.feasible_rows
nfold_step = _impl.nfold_step


def backend_name() -> str:
    return BACKEND
