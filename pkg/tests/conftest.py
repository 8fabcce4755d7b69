import random

import pytest

from mms_sched.core import Instance, Job


@pytest.fixture
def e1() -> Instance:
    """Two unit jobs with deadline 1 and crossing valuations: only the two
    split schedules are feasible, values (3,3) or (1,1)."""
    return Instance(2, (Job("j1", 1, 1, (3, 1)), Job("j2", 1, 1, (1, 3))))


@pytest.fixture
def minus_one_job() -> Instance:
    """Someone must take the -1 job; the other job is worthless."""
    return Instance(2, (Job("a", 0, 0, (-1, -1)), Job("b", 0, 0, (0, 0))))


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)
