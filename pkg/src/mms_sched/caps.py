"""Resource caps shared by all engines.

Every engine refuses inputs beyond its cap instead of running unbounded;
the caps are configurable per call and via the MMS_SCHED_CAPS environment
variable (a JSON object with any subset of the field names below).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Caps:
    oracle_assignments: int = 20_000_000   # max m**n (or (m+1)**n with rejection)
    dp_jobs: int = 22                      # max n for the subset DP engines
    matching_jobs: int = 9                 # max n for partition enumeration
    nfold_states: int = 100_000_000        # peak live DP states per layer
    nfold_block_candidates: int = 2_000_000
    catalog_entries: int = 200_000         # per-layer schedule catalog size

    def override(self, **kwargs) -> "Caps":
        return replace(self, **kwargs)


DEFAULT_CAPS = Caps()

ENV_VAR = "MMS_SCHED_CAPS"


def caps_from_env(base: Caps = DEFAULT_CAPS) -> Caps:
    """Apply overrides from the MMS_SCHED_CAPS environment variable."""
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return base
    data = json.loads(raw)
    if not isinstance(data, dict):
        raise ValueError(f"{ENV_VAR} must be a JSON object")
    known = {f.name for f in fields(Caps)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"{ENV_VAR}: unknown cap names {sorted(unknown)}")
    return base.override(**{k: int(v) for k, v in data.items()})
