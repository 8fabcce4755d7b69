"""Exact solvers for maximin-share fair job scheduling with deadlines.

Data model and feasibility in `core`; ground truth in `oracle`; engines in
`subset_dp`, `matching`, and `nfold` + `formulations`; objective drivers
in `drivers`; known-answer generators in `reductions`; CLI in `cli`.
"""

from .caps import Caps, DEFAULT_CAPS, caps_from_env
from .core import (
    LATE,
    NEG_INF,
    POS_INF,
    CapExceeded,
    InputError,
    Instance,
    Job,
    Schedule,
    deadline_classes,
    edf_feasible,
    machine_values,
    objective_of,
    schedule_feasible,
    value_of,
)
from .drivers import (
    compute_mms,
    solve_add,
    solve_exact,
    solve_mult,
    solve_rejection_budget,
    solve_welfare,
)
from .nfold import NFoldProgram, NFoldSolution, nfold_check, nfold_solve
from .oracle import OracleReport, oracle_mms, oracle_report, oracle_solve
from .subset_dp import dp_feasible, dp_mms

__version__ = "0.1.0"

__all__ = [
    "Caps",
    "DEFAULT_CAPS",
    "caps_from_env",
    "LATE",
    "NEG_INF",
    "POS_INF",
    "CapExceeded",
    "InputError",
    "Instance",
    "Job",
    "Schedule",
    "deadline_classes",
    "edf_feasible",
    "machine_values",
    "objective_of",
    "schedule_feasible",
    "value_of",
    "compute_mms",
    "solve_add",
    "solve_exact",
    "solve_mult",
    "solve_rejection_budget",
    "solve_welfare",
    "NFoldProgram",
    "NFoldSolution",
    "nfold_check",
    "nfold_solve",
    "OracleReport",
    "oracle_mms",
    "oracle_report",
    "oracle_solve",
    "dp_feasible",
    "dp_mms",
    "__version__",
]
