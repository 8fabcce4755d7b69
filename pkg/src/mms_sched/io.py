"""Canonical instance and schedule file formats (strict JSON).

Instance: {"machines": int, "jobs": [{"id", "p", "d", "group"?, "values",
"penalty"?}]}. Schedule: {"assignment": {jobId: machineIndex | "LATE"},
"values"?: [int]}. Unknown keys are rejected; "group" defaults to 0;
"penalty" must appear on every job or on none.
"""

from __future__ import annotations

import json
from typing import Any

from .core import LATE, InputError, Instance, Job, Schedule

_JOB_KEYS = {"id", "p", "d", "group", "values", "penalty"}
_INSTANCE_KEYS = {"machines", "jobs"}
_SCHEDULE_KEYS = {"assignment", "values"}


def _require_int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{what} must be an integer, got {value!r}")
    return value


def instance_from_dict(data: Any) -> Instance:
    if not isinstance(data, dict):
        raise InputError("instance file must contain a JSON object")
    unknown = set(data) - _INSTANCE_KEYS
    if unknown:
        raise InputError(f"instance: unknown keys {sorted(unknown)}")
    if "machines" not in data or "jobs" not in data:
        raise InputError("instance requires 'machines' and 'jobs'")
    m = _require_int(data["machines"], "machines")
    raw_jobs = data["jobs"]
    if not isinstance(raw_jobs, list):
        raise InputError("'jobs' must be a list")
    jobs = []
    for pos, rj in enumerate(raw_jobs):
        if not isinstance(rj, dict):
            raise InputError(f"job #{pos} must be an object")
        unknown = set(rj) - _JOB_KEYS
        if unknown:
            raise InputError(f"job #{pos}: unknown keys {sorted(unknown)}")
        missing = {"id", "p", "d", "values"} - set(rj)
        if missing:
            raise InputError(f"job #{pos}: missing keys {sorted(missing)}")
        if not isinstance(rj["id"], str):
            raise InputError(f"job #{pos}: id must be a string")
        values = rj["values"]
        if not isinstance(values, list):
            raise InputError(f"job {rj['id']!r}: values must be a list")
        jobs.append(
            Job(
                id=rj["id"],
                p=_require_int(rj["p"], f"job {rj['id']!r} p"),
                d=_require_int(rj["d"], f"job {rj['id']!r} d"),
                values=tuple(
                    _require_int(v, f"job {rj['id']!r} value") for v in values
                ),
                group=_require_int(rj.get("group", 0), f"job {rj['id']!r} group"),
                penalty=(
                    None
                    if rj.get("penalty") is None
                    else _require_int(rj["penalty"], f"job {rj['id']!r} penalty")
                ),
            )
        )
    try:
        return Instance(m, tuple(jobs))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def instance_to_dict(inst: Instance) -> dict:
    jobs = []
    for j in inst.jobs:
        rj: dict[str, Any] = {"id": j.id, "p": j.p, "d": j.d, "values": list(j.values)}
        if j.group:
            rj["group"] = j.group
        if j.penalty is not None:
            rj["penalty"] = j.penalty
        jobs.append(rj)
    return {"machines": inst.m, "jobs": jobs}


def load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return instance_from_dict(data)


def save_instance(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(inst), fh, indent=2)
        fh.write("\n")


def schedule_from_dict(data: Any, inst: Instance) -> Schedule:
    if not isinstance(data, dict):
        raise InputError("schedule file must contain a JSON object")
    unknown = set(data) - _SCHEDULE_KEYS
    if unknown:
        raise InputError(f"schedule: unknown keys {sorted(unknown)}")
    raw = data.get("assignment")
    if not isinstance(raw, dict):
        raise InputError("schedule requires an 'assignment' object")
    by_id = {j.id: t for t, j in enumerate(inst.jobs)}
    extra = set(raw) - set(by_id)
    if extra:
        raise InputError(f"schedule assigns unknown job ids {sorted(extra)}")
    missing = set(by_id) - set(raw)
    if missing:
        raise InputError(f"schedule misses jobs {sorted(missing)}")
    assignment = [0] * inst.n
    for job_id, target in raw.items():
        t = by_id[job_id]
        if target == "LATE":
            if not inst.has_penalties:
                raise InputError(
                    f"job {job_id!r} marked LATE but the instance has no penalties"
                )
            assignment[t] = LATE
        else:
            k = _require_int(target, f"assignment of job {job_id!r}")
            if not 0 <= k < inst.m:
                raise InputError(f"job {job_id!r}: machine index {k} out of range")
            assignment[t] = k
    if "values" in data:
        vals = data["values"]
        if not isinstance(vals, list) or len(vals) != inst.m:
            raise InputError("schedule 'values' must list one integer per machine")
        for v in vals:
            _require_int(v, "schedule value")
    return Schedule(tuple(assignment))


def schedule_to_dict(s: Schedule, inst: Instance, values: list[int] | None = None) -> dict:
    assignment = {
        inst.jobs[t].id: ("LATE" if k == LATE else k)
        for t, k in enumerate(s.assignment)
    }
    out: dict[str, Any] = {"assignment": assignment}
    if values is not None:
        out["values"] = list(values)
    return out


def load_schedule(path: str, inst: Instance) -> Schedule:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return schedule_from_dict(data, inst)
