import random
from fractions import Fraction

import pytest

from mms_sched.core import (
    NEG_INF,
    POS_INF,
    InputError,
    Instance,
    Job,
    machine_values,
    objective_of,
    schedule_feasible,
)
from mms_sched.drivers import (
    alpha_candidates,
    clear_probe_log,
    compute_mms,
    probe_violations,
    PROBE_LOG,
    resolve_engine,
    solve_add,
    solve_exact,
    solve_mult,
    solve_rejection_budget,
    solve_welfare,
    targets_for_alpha,
)
from mms_sched.caps import DEFAULT_CAPS
from mms_sched.oracle import oracle_min_rejection_budget, oracle_report
from mms_sched.reductions import random_instance

TARGET_ENGINES = ("dp", "nfold-layers", "nfold-deadlines")


class TestComputeMms:
    @pytest.mark.parametrize("engine", TARGET_ENGINES + ("oracle",))
    def test_e1_all_engines(self, e1, engine):
        assert compute_mms(e1, engine) == ([1, 1], True)

    def test_infeasible_instance_flags_globally(self):
        inst = Instance(2, (Job("a", 7, 2, (1, 1)),))
        for engine in TARGET_ENGINES:
            values, feasible = compute_mms(inst, engine)
            assert not feasible and values == [NEG_INF, NEG_INF]

    def test_threads_match_sequential(self, e1):
        assert compute_mms(e1, "dp", threads=2) == compute_mms(e1, "dp")

    def test_matching_engine_rejected(self, e1):
        with pytest.raises(InputError):
            compute_mms(e1, "matching")


class TestAlphaCandidates:
    def test_sorted_deduplicated(self):
        inst = Instance(2, (Job("a", 0, 0, (2, -1)), Job("b", 0, 0, (1, 1)),))
        cands = alpha_candidates(inst, [2, -1])
        assert cands == sorted(set(cands))
        assert all(isinstance(c, Fraction) for c in cands)

    def test_zero_reference_machines_excluded(self):
        inst = Instance(1, (Job("a", 0, 0, (3,)),))
        assert alpha_candidates(inst, [0]) == []

    def test_targets_round_toward_feasibility(self):
        inst = Instance(2, (Job("a", 0, 0, (3, -2)), Job("b", 0, 0, (3, -2)),))
        phi = targets_for_alpha(inst, [3, -2], Fraction(1, 2))
        assert phi[0] == 2  # ceil(3/2)
        assert phi[1] == -4  # ceil(-2 / (1/2))
        phi_neg = targets_for_alpha(inst, [3, -2], Fraction(-1))
        assert phi_neg[0] == -3
        assert phi_neg[1] == -(inst.n * inst.v_max)


class TestSolveMult:
    @pytest.mark.parametrize("engine", TARGET_ENGINES)
    def test_e1(self, e1, engine):
        report = solve_mult(e1, engine)
        assert report.value == 3
        assert machine_values(report.schedule, e1) == [3, 3]

    def test_forced_sharing_alpha_one(self):
        inst = Instance(
            2, (Job("a", 0, 0, (1, 1)), Job("b", 0, 0, (1, 1)))
        )
        report = solve_mult(inst, "dp")
        assert report.value == 1

    @pytest.mark.parametrize("span", [(0, 5), (-5, 0), (-5, 5)])
    def test_value_regimes_match_oracle(self, span):
        # goods-only, chores-only, and mixed corpora
        rng = random.Random(sum(span) + 77)
        lo, hi = span
        checked = 0
        for _ in range(90):
            n, m = rng.randint(1, 6), rng.randint(1, 3)
            jobs = tuple(
                Job(
                    f"j{t}",
                    rng.randint(0, 4),
                    rng.randint(0, 5),
                    tuple(rng.randint(lo, hi) for _ in range(m)),
                )
                for t in range(n)
            )
            inst = Instance(m, jobs)
            rep = oracle_report(inst)
            if not rep.feasible:
                continue
            checked += 1
            for engine in TARGET_ENGINES:
                assert solve_mult(inst, engine).value == rep.best_mult
        assert checked > 15

    def test_no_schedule_beats_reported_optimum(self):
        # every feasible schedule's achieved factor is at most the optimum
        rng = random.Random(79)
        for _ in range(25):
            inst = random_instance(rng, n=rng.randint(1, 5), m=2)
            rep = oracle_report(inst)
            if not rep.feasible:
                continue
            report = solve_mult(inst, "dp")
            mms = [int(v) for v in rep.mms]
            import itertools

            for assign in itertools.product(range(2), repeat=inst.n):
                from mms_sched.core import Schedule, schedule_feasible as feas

                s = Schedule(assign)
                if feas(s, inst):
                    assert objective_of(inst, s, mms, "mult") <= report.value

    def test_all_zero_references_positive_coverable(self):
        inst = Instance(2, (Job("a", 0, 0, (1, 1)),))
        rep = oracle_report(inst)
        assert rep.mms == [0, 0]
        report = solve_mult(inst, "dp")
        assert report.value == rep.best_mult == POS_INF

    def test_zero_reference_machines_match_oracle_sentinels(self):
        rng = random.Random(78)
        seen = 0
        for _ in range(150):
            inst = random_instance(rng, n=rng.randint(1, 5), m=rng.randint(1, 3))
            rep = oracle_report(inst)
            if not rep.feasible or not any(v == 0 for v in rep.mms):
                continue
            seen += 1
            assert solve_mult(inst, "dp").value == rep.best_mult
        assert seen > 10

    def test_scaling_one_machine_rescales_alpha(self):
        jobs = (Job("a", 0, 0, (2, 1)), Job("b", 0, 0, (1, 2)))
        inst = Instance(2, jobs)
        scaled = Instance(
            2, tuple(Job(j.id, j.p, j.d, (3 * j.values[0], j.values[1])) for j in jobs)
        )
        assert solve_mult(inst, "dp").value == solve_mult(scaled, "dp").value


class TestSolveAddWelfare:
    @pytest.mark.parametrize("engine", TARGET_ENGINES)
    def test_e1_add_zero(self, e1, engine):
        assert solve_add(e1, engine).value == 0

    def test_minus_one_instance(self, minus_one_job):
        rep = oracle_report(minus_one_job)
        for engine in TARGET_ENGINES:
            assert solve_add(minus_one_job, engine).value == rep.best_add
        for engine in ("matching", "nfold-layers", "nfold-deadlines"):
            assert solve_welfare(minus_one_job, engine).value == rep.best_welfare

    def test_add_paths_agree(self):
        rng = random.Random(31)
        for _ in range(40):
            inst = random_instance(rng, n=rng.randint(1, 6), m=rng.randint(1, 3))
            if not compute_mms(inst, "dp")[1]:
                continue
            search = solve_add(inst, "nfold-deadlines", method="search")
            objective = solve_add(inst, "nfold-deadlines", method="objective")
            assert search.value == objective.value

    def test_dp_cannot_do_welfare(self, e1):
        with pytest.raises(InputError):
            solve_welfare(e1, "dp")

    def test_delta_upper_bound_always_feasible(self):
        rng = random.Random(32)
        for _ in range(40):
            inst = random_instance(rng, n=rng.randint(1, 6), m=2)
            mms, feasible = compute_mms(inst, "dp")
            if not feasible:
                continue
            bound = inst.n * inst.v_max
            report = solve_exact(
                inst, [int(t) - bound for t in mms], "dp"
            )
            assert report.status == "feasible"


class TestRejectionBudget:
    def test_vacuous_targets_need_nothing(self):
        inst = Instance(
            2,
            (
                Job("a", 1, 1, (1, 1), penalty=4),
                Job("b", 1, 1, (1, 1), penalty=4),
            ),
        )
        report = solve_rejection_budget(inst, (-8, -8), "nfold-deadlines")
        assert report.value == 0

    def test_infeasible_job_costs_its_penalty(self):
        inst = Instance(
            2,
            (
                Job("j1", 1, 1, (3, 1), penalty=0),
                Job("j2", 1, 1, (1, 3), penalty=0),
                Job("j3", 2, 1, (2, 2), penalty=3),
            ),
        )
        for engine in ("nfold-deadlines", "nfold-layers", "oracle"):
            report = solve_rejection_budget(inst, (1, 1), engine)
            assert report.value == 3

    def test_unreachable_targets_infeasible(self):
        inst = Instance(1, (Job("a", 0, 0, (2,), penalty=1),))
        report = solve_rejection_budget(inst, (5,), "nfold-deadlines")
        assert report.status == "infeasible"

    def test_matches_oracle_on_random_instances(self):
        rng = random.Random(48)
        for _ in range(60):
            inst = random_instance(
                rng, n=rng.randint(1, 6), m=rng.randint(1, 2), with_penalties=True
            )
            phi = [rng.randint(-3, 6) for _ in range(inst.m)]
            want = oracle_min_rejection_budget(inst, phi)
            got = solve_rejection_budget(inst, phi, "nfold-deadlines")
            if want is None:
                assert got.status == "infeasible"
            else:
                assert got.value == want[0]


class TestEngineSelection:
    def test_small_instances_use_dp(self, e1):
        assert resolve_engine(e1, "auto", DEFAULT_CAPS) == "dp"

    def test_welfare_prefers_matching(self, e1):
        assert resolve_engine(e1, "auto", DEFAULT_CAPS, "welfare") == "matching"

    def test_large_grouped_instances_use_layers(self):
        jobs = tuple(
            Job(f"j{t}", 0, 1, (0, 0), group=t % 10) for t in range(30)
        )
        inst = Instance(2, jobs)
        assert resolve_engine(inst, "auto", DEFAULT_CAPS) == "nfold-layers"

    def test_unknown_engine_rejected(self, e1):
        with pytest.raises(InputError):
            resolve_engine(e1, "simplex", DEFAULT_CAPS)


class TestProbeAudit:
    def test_probes_recorded_and_monotone(self, e1):
        clear_probe_log()
        solve_mult(e1, "dp")
        solve_add(e1, "nfold-deadlines", method="search")
        assert PROBE_LOG
        assert probe_violations() == 0

    def test_witnesses_reverify(self):
        rng = random.Random(90)
        for _ in range(30):
            inst = random_instance(rng, n=rng.randint(1, 6), m=rng.randint(1, 3))
            mms, feasible = compute_mms(inst, "dp")
            if not feasible:
                continue
            mms = [int(v) for v in mms]
            for kind, report in (
                ("mult", solve_mult(inst, "dp")),
                ("add", solve_add(inst, "dp")),
                ("welfare", solve_welfare(inst, "matching")),
            ):
                assert schedule_feasible(report.schedule, inst)
                assert objective_of(inst, report.schedule, mms, kind) == report.value
