import json

import pytest

from mms_sched.core import LATE, InputError, Schedule
from mms_sched.io import (
    instance_from_dict,
    instance_to_dict,
    load_instance,
    load_schedule,
    save_instance,
    schedule_from_dict,
    schedule_to_dict,
)

GOOD = {
    "machines": 2,
    "jobs": [
        {"id": "a", "p": 1, "d": 2, "values": [3, 1]},
        {"id": "b", "p": 0, "d": 0, "group": 1, "values": [-1, 4]},
    ],
}


def test_instance_round_trip(tmp_path):
    inst = instance_from_dict(GOOD)
    path = tmp_path / "inst.json"
    save_instance(inst, str(path))
    again = load_instance(str(path))
    assert again == inst
    assert instance_to_dict(again)["machines"] == 2


def test_group_defaults_to_zero():
    inst = instance_from_dict(GOOD)
    assert inst.jobs[0].group == 0
    assert inst.jobs[1].group == 1


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(extra=1),
        lambda d: d["jobs"][0].update(color="red"),
        lambda d: d["jobs"][0].pop("values"),
        lambda d: d["jobs"][0].update(p="2"),
        lambda d: d.pop("machines"),
    ],
)
def test_instance_rejects_bad_shapes(mutate):
    data = json.loads(json.dumps(GOOD))
    mutate(data)
    with pytest.raises(InputError):
        instance_from_dict(data)


def test_partial_penalties_rejected():
    data = json.loads(json.dumps(GOOD))
    data["jobs"][0]["penalty"] = 3
    with pytest.raises(InputError):
        instance_from_dict(data)


def test_schedule_round_trip(tmp_path):
    inst = instance_from_dict(GOOD)
    s = Schedule((0, 1))
    data = schedule_to_dict(s, inst, values=[3, 4])
    path = tmp_path / "sched.json"
    path.write_text(json.dumps(data))
    again = load_schedule(str(path), inst)
    assert again == s


def test_schedule_unknown_keys_rejected():
    inst = instance_from_dict(GOOD)
    with pytest.raises(InputError):
        schedule_from_dict({"assignment": {"a": 0, "b": 1}, "note": "hi"}, inst)


def test_schedule_missing_job_rejected():
    inst = instance_from_dict(GOOD)
    with pytest.raises(InputError):
        schedule_from_dict({"assignment": {"a": 0}}, inst)


def test_late_requires_penalties():
    inst = instance_from_dict(GOOD)
    with pytest.raises(InputError):
        schedule_from_dict({"assignment": {"a": "LATE", "b": 1}}, inst)
    jobs = [dict(j, penalty=1) for j in GOOD["jobs"]]
    inst2 = instance_from_dict({"machines": 2, "jobs": jobs})
    s = schedule_from_dict({"assignment": {"a": "LATE", "b": 1}}, inst2)
    assert s.assignment[0] == LATE


def test_machine_index_range_checked():
    inst = instance_from_dict(GOOD)
    with pytest.raises(InputError):
        schedule_from_dict({"assignment": {"a": 2, "b": 0}}, inst)
