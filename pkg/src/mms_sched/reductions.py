"""Known-answer instance generators.

Each generator transcribes a hardness construction into a scheduling
instance together with the target vector encoding its yes/no question.
Expected answers come from independent pseudo-polynomial or exhaustive
checkers here, never from the solver engines, so the generated corpus can
arbitrate between them.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Sequence

from .core import InputError, Instance, Job


# -- independent expected-answer checkers ---------------------------------

def subset_sum_reachable(numbers: Sequence[int], target: int) -> bool:
    """Pseudo-polynomial DP: does some sub-multiset sum to target?"""
    if target < 0:
        return False
    reach = 1  # bitset: bit s set iff sum s reachable
    for x in numbers:
        reach |= reach << x
    return bool(reach >> target & 1)


def partition_in_halves(numbers: Sequence[int]) -> bool:
    total = sum(numbers)
    return total % 2 == 0 and subset_sum_reachable(numbers, total // 2)


def eqcard_partition_exists(numbers: Sequence[int]) -> bool:
    """Split into two halves of equal cardinality and equal sum?"""
    n = len(numbers)
    total = sum(numbers)
    if n % 2 or total % 2:
        return False
    # reach[c] = bitset of sums attainable with exactly c elements
    reach = [0] * (n + 1)
    reach[0] = 1
    for x in numbers:
        for c in range(min(n, len(numbers)) - 1, -1, -1):
            reach[c + 1] |= reach[c] << x
    return bool(reach[n // 2] >> (total // 2) & 1)


def cnf_satisfiable(clauses: Sequence[Sequence[int]], num_vars: int) -> bool:
    """Exhaustive satisfiability check (literals are +-(var+1))."""
    if num_vars > 20:
        raise InputError("exhaustive SAT check supports at most 20 variables")
    for bits in range(1 << num_vars):
        ok = True
        for clause in clauses:
            if not any(
                (bits >> (abs(lit) - 1)) & 1 == (1 if lit > 0 else 0)
                for lit in clause
            ):
                ok = False
                break
        if ok:
            return True
    return False


# -- generated cases -------------------------------------------------------

@dataclass(frozen=True)
class GeneratedCase:
    """Instance plus the target vector posing its question and the
    independently computed expected verdict."""

    kind: str
    instance: Instance
    targets: tuple[int, ...]
    expected: bool


def _positive_numbers(numbers: Sequence[int]) -> list[int]:
    S = [int(x) for x in numbers]
    if not S or any(x < 1 for x in S):
        raise InputError("numbers must be positive integers")
    return S


def gen_partition_values(numbers: Sequence[int]) -> GeneratedCase:
    """Zero-length jobs valued s_i by both machines; can both machines
    collect half the total?"""
    S = _positive_numbers(numbers)
    jobs = tuple(Job(f"s{k}", 0, 0, (s, s)) for k, s in enumerate(S))
    half_up = (sum(S) + 1) // 2
    return GeneratedCase(
        kind="partition",
        instance=Instance(2, jobs),
        targets=(half_up, half_up),
        expected=partition_in_halves(S),
    )


def gen_partition_deadlines(numbers: Sequence[int]) -> GeneratedCase:
    """Jobs with p_i = s_i, all deadlines at half the total, no values;
    the question is bare schedule feasibility."""
    S = _positive_numbers(numbers)
    half = sum(S) // 2
    jobs = tuple(Job(f"s{k}", s, half, (0, 0)) for k, s in enumerate(S))
    return GeneratedCase(
        kind="partition-deadlines",
        instance=Instance(2, jobs),
        targets=(0, 0),
        expected=partition_in_halves(S),
    )


def gen_eqcard_partition(numbers: Sequence[int]) -> GeneratedCase:
    """Jobs p_i = s_i, unit values, one shared deadline at half the total;
    both machines reach count n/2 iff an equal-cardinality split exists."""
    S = _positive_numbers(numbers)
    half = sum(S) // 2
    jobs = tuple(Job(f"s{k}", s, half, (1, 1)) for k, s in enumerate(S))
    count_up = (len(S) + 1) // 2
    return GeneratedCase(
        kind="eqcard",
        instance=Instance(2, jobs),
        targets=(count_up, count_up),
        expected=eqcard_partition_exists(S),
    )


def gen_partition_batches(numbers: Sequence[int]) -> GeneratedCase:
    """Per number s_i, a batch of s_i unit-valued jobs and a mirror batch
    of zero-valued ones whose staggered deadlines force each batch onto
    one machine; both machines reach half the total iff S partitions.

    Each batch occupies exactly 10*s_i time, so batches stack block by
    block; the zero-valued batch runs 8,10,...,10,12 against deadlines
    8,18,...,10*s_i within its block (a single 10 when s_i = 1).
    """
    S = _positive_numbers(numbers)
    jobs: list[Job] = []
    base = 0
    for i, s in enumerate(S):
        if s == 1:
            jobs.append(Job(f"b{i}.a1", 10, base + 10, (1, 1)))
            jobs.append(Job(f"b{i}.z1", 10, base + 10, (0, 0)))
        else:
            for t in range(1, s + 1):
                jobs.append(Job(f"b{i}.a{t}", 10, base + 10 * t, (1, 1)))
            jobs.append(Job(f"b{i}.z1", 8, base + 8, (0, 0)))
            for t in range(2, s):
                jobs.append(Job(f"b{i}.z{t}", 10, base + 8 + 10 * (t - 1), (0, 0)))
            jobs.append(Job(f"b{i}.z{s}", 12, base + 10 * s, (0, 0)))
        base += 10 * s
    half_up = (sum(S) + 1) // 2
    return GeneratedCase(
        kind="batches",
        instance=Instance(2, tuple(jobs)),
        targets=(half_up, half_up),
        expected=partition_in_halves(S),
    )


def check_sat3prime(clauses: Sequence[Sequence[int]], num_vars: int) -> None:
    """Syntactic restriction: clauses of at most 3 literals, each variable
    at most 3 occurrences, each literal at most 2."""
    var_count: dict[int, int] = {}
    lit_count: dict[int, int] = {}
    for clause in clauses:
        if not 1 <= len(clause) <= 3:
            raise InputError("clauses must have 1 to 3 literals")
        for lit in clause:
            var = abs(lit)
            if not 1 <= var <= num_vars:
                raise InputError(f"literal {lit} out of range")
            var_count[var] = var_count.get(var, 0) + 1
            lit_count[lit] = lit_count.get(lit, 0) + 1
    for var, c in var_count.items():
        if c > 3:
            raise InputError(f"variable {var} occurs {c} times (max 3)")
    for lit, c in lit_count.items():
        if c > 2:
            raise InputError(f"literal {lit} occurs {c} times (max 2)")


def gen_sat3prime(
    clauses: Sequence[Sequence[int]], num_vars: int, names: Sequence[str] | None = None
) -> GeneratedCase:
    """Machines per literal and per clause; assignment jobs block one
    literal machine, literal jobs fit their own or their clause machine,
    short clauses get a deadline-filling dummy. Every machine reaches
    value 0 iff the formula is satisfiable."""
    check_sat3prime(clauses, num_vars)
    if names is None:
        names = [f"x{v}" for v in range(1, num_vars + 1)]
    # machines: pos/neg per variable, then one per clause
    machine_ids: dict[object, int] = {}
    for v in range(1, num_vars + 1):
        machine_ids[v] = len(machine_ids)
        machine_ids[-v] = len(machine_ids)
    for ci in range(len(clauses)):
        machine_ids[("c", ci)] = len(machine_ids)
    m = len(machine_ids)

    def job_values(zero_on: Sequence[int]) -> tuple[int, ...]:
        vals = [-1] * m
        for k in zero_on:
            vals[k] = 0
        return tuple(vals)

    jobs: list[Job] = []
    for v in range(1, num_vars + 1):
        jobs.append(
            Job(
                f"assign.{names[v - 1]}",
                2,
                2,
                job_values([machine_ids[v], machine_ids[-v]]),
            )
        )
    for ci, clause in enumerate(clauses):
        for lit in clause:
            label = names[abs(lit) - 1] if lit > 0 else f"not.{names[abs(lit) - 1]}"
            jobs.append(
                Job(
                    f"lit.c{ci}.{label}",
                    1,
                    2,
                    job_values([machine_ids[("c", ci)], machine_ids[lit]]),
                )
            )
        k = len(clause)
        if k < 3:
            jobs.append(
                Job(f"dummy.c{ci}", 3 - k, 2, job_values([machine_ids[("c", ci)]]))
            )
    return GeneratedCase(
        kind="sat3",
        instance=Instance(m, tuple(jobs)),
        targets=(0,) * m,
        expected=cnf_satisfiable(clauses, num_vars),
    )


def gen_ef_counterexample(n: int) -> Instance:
    """n-1 unit jobs worth 1 each plus one worthless job filling a whole
    machine; the only feasible schedules put all unit jobs together, so no
    bounded-envy allocation exists."""
    if n < 2:
        raise InputError("needs n >= 2")
    jobs = [Job(f"u{k}", 1, n - 1, (1, 1)) for k in range(1, n)]
    jobs.append(Job("filler", n - 1, n - 1, (0, 0)))
    return Instance(2, tuple(jobs))


# -- CNF text form ----------------------------------------------------------

def parse_cnf(text: str) -> tuple[list[list[int]], int, list[str]]:
    """Parse "x|~y & z" style CNF: '&' joins clauses, '|' literals, '~' or
    '!' negates. Returns (clauses, num_vars, variable names)."""
    names: list[str] = []
    index: dict[str, int] = {}
    clauses: list[list[int]] = []
    for chunk in text.split("&"):
        chunk = chunk.strip()
        if not chunk:
            raise InputError("empty clause")
        clause = []
        for raw in chunk.split("|"):
            raw = raw.strip()
            neg = False
            while raw[:1] in ("~", "!"):
                neg = not neg
                raw = raw[1:].strip()
            if not re.fullmatch(r"[A-Za-z_]\w*", raw or ""):
                raise InputError(f"bad literal {raw!r}")
            if raw not in index:
                index[raw] = len(names) + 1
                names.append(raw)
            clause.append(-index[raw] if neg else index[raw])
        clauses.append(clause)
    return clauses, len(names), names


# -- randomized corpus ------------------------------------------------------

def random_instance(
    rng: random.Random,
    n: int,
    m: int,
    p_hi: int = 6,
    d_hi: int = 6,
    v_abs: int = 5,
    groups: int = 1,
    with_penalties: bool = False,
    w_hi: int = 5,
) -> Instance:
    """Seeded random instance for cross-engine corpora."""
    jobs = []
    for t in range(n):
        jobs.append(
            Job(
                id=f"j{t}",
                p=rng.randint(0, p_hi),
                d=rng.randint(0, d_hi),
                values=tuple(rng.randint(-v_abs, v_abs) for _ in range(m)),
                group=rng.randrange(groups) if groups > 1 else 0,
                penalty=rng.randint(0, w_hi) if with_penalties else None,
            )
        )
    return Instance(m, tuple(jobs))
