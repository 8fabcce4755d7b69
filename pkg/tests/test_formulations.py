import itertools
import random

import pytest

from mms_sched.caps import Caps
from mms_sched.core import (
    LATE,
    CapExceeded,
    InputError,
    Instance,
    Job,
    Schedule,
    machine_values,
    schedule_feasible,
    total_penalty,
)
from mms_sched.formulations import (
    attach_add_objective,
    attach_welfare_objective,
    build_deadline_nfold,
    build_layer_catalog,
    build_layer_nfold,
    build_rejection_variant,
    decode_schedule,
    encode_schedule,
    with_targets,
)
from mms_sched.nfold import nfold_check, nfold_solve
from mms_sched.oracle import oracle_exact, oracle_report
from mms_sched.reductions import gen_partition_deadlines, random_instance
from mms_sched.subset_dp import dp_feasible


def solve_decoded(program):
    sol = nfold_solve(program)
    return None if sol is None else (sol, decode_schedule(program, sol.y))


class TestLayerCatalog:
    def test_counts_match_assignment_brute_force(self):
        rng = random.Random(12)
        for _ in range(40):
            inst = random_instance(rng, n=rng.randint(1, 5), m=rng.randint(1, 3))
            catalog = build_layer_catalog(inst)
            members = inst.group_members[0]
            want = 0
            for assign in itertools.product(range(inst.m), repeat=len(members)):
                s = Schedule.from_bundles(
                    [[members[j] for j in range(len(members)) if assign[j] == i]
                     for i in range(inst.m)],
                    inst.n,
                )
                if schedule_feasible(s, inst):
                    want += 1
            assert len(catalog.entries[0]) == want

    def test_cap_names_the_layer(self):
        inst = Instance(3, tuple(Job(f"j{t}", 0, 0, (0, 0, 0)) for t in range(6)))
        with pytest.raises(CapExceeded, match="layer 0"):
            build_layer_catalog(inst, Caps(catalog_entries=10))


class TestBuilders:
    def test_e1_layer_feasible_splits(self, e1):
        program = build_layer_nfold(e1, (1, 1))
        sol, schedule = solve_decoded(program)
        assert schedule.assignment in ((0, 1), (1, 0))
        assert nfold_check(program, sol.y)

    def test_single_job_single_machine(self):
        good = Instance(1, (Job("a", 1, 2, (4,)),))
        assert solve_decoded(build_layer_nfold(good, (4,))) is not None
        bad = Instance(1, (Job("a", 3, 2, (4,)),))
        assert solve_decoded(build_layer_nfold(bad, (4,))) is None

    def test_singleton_layers_match_oracle_exact(self):
        inst = Instance(
            2,
            (
                Job("a", 1, 1, (2, 1), group=0),
                Job("b", 1, 1, (1, 2), group=1),
            ),
        )
        rep = oracle_report(inst)
        mms = [int(v) for v in rep.mms]
        got = solve_decoded(build_layer_nfold(inst, mms))
        assert (got is not None) == (oracle_exact(inst, mms) is not None)

    def test_e1_deadline_formulation(self, e1):
        assert solve_decoded(build_deadline_nfold(e1, (1, 1))) is not None
        assert solve_decoded(build_deadline_nfold(e1, (4, 4))) is None

    def test_partition_reduction_instance(self):
        case = gen_partition_deadlines([1, 1, 2])
        program = build_deadline_nfold(case.instance, case.targets)
        assert (solve_decoded(program) is not None) == case.expected is True

    def test_matches_dp_on_random_instances(self):
        rng = random.Random(13)
        for _ in range(120):
            inst = random_instance(
                rng, n=rng.randint(1, 8), m=rng.randint(1, 3), groups=rng.choice((1, 2))
            )
            phi = [rng.randint(-5, 7) for _ in range(inst.m)]
            want = dp_feasible(inst, phi) is not None
            for build in (build_layer_nfold, build_deadline_nfold):
                got = solve_decoded(build(inst, phi))
                assert (got is not None) == want
                if got is not None:
                    sol, schedule = got
                    assert schedule_feasible(schedule, inst)
                    vals = machine_values(schedule, inst)
                    assert all(v >= t for v, t in zip(vals, phi))

    def test_retargeting_shares_candidates(self, e1):
        base = build_deadline_nfold(e1, (0, 0))
        base.block_candidates()
        hard = with_targets(base, (4, 4))
        assert hard.__dict__["_candidates"] is base.__dict__["_candidates"]
        assert nfold_solve(hard) is None
        assert nfold_solve(with_targets(base, (1, 1))) is not None


class TestObjectiveAttachments:
    def test_add_zero_at_true_mms(self, e1):
        program = attach_add_objective(build_deadline_nfold(e1, (0, 0)), (1, 1))
        sol = nfold_solve(program)
        assert sol.objective == 0

    def test_add_one_when_reference_overshoots(self, minus_one_job):
        # reference (0, 0) handed in although someone must absorb the -1 job
        for build in (build_deadline_nfold, build_layer_nfold):
            program = attach_add_objective(build(minus_one_job, (0, 0)), (0, 0))
            sol = nfold_solve(program)
            assert sol.objective == 1
            assert schedule_feasible(decode_schedule(program, sol.y), minus_one_job)

    def test_add_infeasible_deadlines_stay_infeasible(self):
        inst = Instance(2, (Job("a", 9, 1, (1, 1)),))
        program = attach_add_objective(build_deadline_nfold(inst, (0, 0)), (0, 0))
        assert nfold_solve(program) is None

    def test_welfare_zero_at_true_mms(self, e1):
        program = attach_welfare_objective(build_layer_nfold(e1, (0, 0)), (1, 1))
        assert nfold_solve(program).objective == 0

    def test_welfare_counts_each_machine(self, minus_one_job):
        program = attach_welfare_objective(
            build_deadline_nfold(minus_one_job, (0, 0)), (0, 0)
        )
        assert nfold_solve(program).objective == 1

    def test_welfare_nonpositive_references_force_zero(self):
        inst = Instance(2, (Job("a", 0, 0, (0, 0)), Job("b", 0, 0, (0, 0))))
        program = attach_welfare_objective(build_layer_nfold(inst, (0, 0)), (-2, 0))
        assert nfold_solve(program).objective == 0


class TestRejection:
    def make(self):
        return Instance(
            2,
            (
                Job("j1", 1, 1, (3, 1), penalty=0),
                Job("j2", 1, 1, (1, 3), penalty=0),
                Job("j3", 2, 1, (2, 2), penalty=3),
            ),
        )

    @pytest.mark.parametrize("base", ["deadlines", "layers"])
    def test_full_budget_always_deadline_feasible(self, base):
        inst = self.make()
        total = sum(j.penalty for j in inst.jobs)
        program = build_rejection_variant(inst, (-9, -9), total, base=base)
        sol, schedule = solve_decoded(program)
        assert schedule_feasible(schedule, inst)

    @pytest.mark.parametrize("base", ["deadlines", "layers"])
    def test_zero_budget_equals_plain_program(self, base):
        inst = self.make()
        program = build_rejection_variant(inst, (1, 1), 0, base=base)
        assert solve_decoded(program) is None  # j3 cannot run anywhere

    @pytest.mark.parametrize("base", ["deadlines", "layers"])
    def test_budget_three_lets_j3_go_late(self, base):
        inst = self.make()
        program = build_rejection_variant(inst, (1, 1), 3, base=base)
        sol, schedule = solve_decoded(program)
        assert schedule.assignment[2] == LATE
        assert total_penalty(schedule, inst) == 3
        assert schedule_feasible(schedule, inst)

    def test_missing_penalties_rejected(self, e1):
        with pytest.raises(InputError):
            build_rejection_variant(e1, (0, 0), 1)


class TestRoundTrip:
    def test_oracle_witnesses_encode_into_both_programs(self):
        rng = random.Random(14)
        for _ in range(60):
            inst = random_instance(
                rng, n=rng.randint(1, 6), m=rng.randint(1, 3), groups=rng.choice((1, 2))
            )
            rep = oracle_report(inst)
            if not rep.feasible:
                continue
            mms = [int(v) for v in rep.mms]
            witness = rep.witness_add
            vals = machine_values(witness, inst)
            for build in (build_layer_nfold, build_deadline_nfold):
                program = build(inst, vals)
                y = encode_schedule(program, witness)
                assert nfold_check(program, y)
                assert decode_schedule(program, y) == witness

    def test_decoded_solutions_reverify(self):
        rng = random.Random(15)
        for _ in range(60):
            inst = random_instance(rng, n=rng.randint(1, 6), m=2)
            phi = [rng.randint(-4, 4), rng.randint(-4, 4)]
            for build in (build_layer_nfold, build_deadline_nfold):
                got = solve_decoded(build(inst, phi))
                if got is None:
                    continue
                sol, schedule = got
                assert schedule_feasible(schedule, inst)
                y = encode_schedule(build(inst, phi), schedule)
                assert nfold_check(build(inst, phi), y)
