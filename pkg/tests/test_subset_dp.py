import random

import pytest

from mms_sched.caps import Caps
from mms_sched.core import (
    NEG_INF,
    CapExceeded,
    Instance,
    Job,
    machine_values,
    schedule_feasible,
)
from mms_sched.oracle import oracle_exact, oracle_mms_vector
from mms_sched.reductions import random_instance
from mms_sched.subset_dp import dp_feasible, dp_mms


def test_e1_targets(e1):
    s = dp_feasible(e1, (1, 1))
    assert s is not None and schedule_feasible(s, e1)
    assert all(v >= 1 for v in machine_values(s, e1))
    assert dp_feasible(e1, (4, 4)) is None


def test_vacuous_targets_feasible_whenever_anything_is():
    rng = random.Random(17)
    for _ in range(60):
        inst = random_instance(rng, n=rng.randint(1, 6), m=rng.randint(1, 3))
        floor = [-inst.n * inst.v_max] * inst.m
        _, count = oracle_mms_vector(inst)
        assert (dp_feasible(inst, floor) is not None) == (count > 0)


def test_e1_mms(e1):
    assert dp_mms(e1, 0) == 1 and dp_mms(e1, 1) == 1


def test_single_machine_rows():
    ok = Instance(1, (Job("a", 1, 2, (4,)), Job("b", 1, 2, (-1,))))
    assert dp_mms(ok, 0) == 3
    bad = Instance(1, (Job("a", 3, 1, (4,)),))
    assert dp_mms(bad, 0) == NEG_INF


def test_zero_length_partition_instance():
    inst = Instance(2, tuple(Job(f"s{v}", 0, 0, (v, v)) for v in (1, 2, 3)))
    assert dp_mms(inst, 0) == 3


def test_mms_matches_oracle_on_random_instances():
    rng = random.Random(100)
    for _ in range(200):
        inst = random_instance(
            rng, n=rng.randint(1, 8), m=rng.randint(1, 3), groups=rng.choice((1, 2))
        )
        want, _ = oracle_mms_vector(inst)
        got = [dp_mms(inst, i) for i in range(inst.m)]
        assert got == want


def test_feasibility_matches_oracle_on_random_targets():
    rng = random.Random(101)
    for _ in range(200):
        inst = random_instance(
            rng, n=rng.randint(1, 8), m=rng.randint(1, 3), groups=rng.choice((1, 2))
        )
        phi = [rng.randint(-6, 8) for _ in range(inst.m)]
        want = oracle_exact(inst, phi)
        got = dp_feasible(inst, phi)
        assert (got is None) == (want is None)
        if got is not None:
            assert schedule_feasible(got, inst)
            assert all(v >= t for v, t in zip(machine_values(got, inst), phi))


def test_targets_antitone():
    rng = random.Random(102)
    for _ in range(100):
        inst = random_instance(rng, n=rng.randint(1, 6), m=2)
        phi = [rng.randint(-4, 4), rng.randint(-4, 4)]
        if dp_feasible(inst, phi) is None:
            bumped = list(phi)
            bumped[rng.randrange(2)] += rng.randint(1, 3)
            assert dp_feasible(inst, bumped) is None


def test_witness_respects_groups():
    inst = Instance(
        2,
        (
            Job("a", 2, 2, (1, 1), group=0),
            Job("b", 2, 2, (1, 1), group=1),
            Job("c", 1, 1, (1, 1), group=0),
        ),
    )
    s = dp_feasible(inst, (1, 1))
    assert s is not None and schedule_feasible(s, inst)


def test_cap_refusal():
    inst = Instance(1, tuple(Job(f"j{t}", 0, 0, (0,)) for t in range(5)))
    with pytest.raises(CapExceeded):
        dp_mms(inst, 0, Caps(dp_jobs=4))
    with pytest.raises(CapExceeded):
        dp_feasible(inst, (0,), Caps(dp_jobs=4))
