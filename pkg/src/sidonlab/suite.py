"""One-shot reproducibility run: builds the construction grid, measures every
error statistic, and records a pass/fail line per check."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

import numpy as np

from . import core, primes, search
from .constructions import bose, erdos_turan, is_perfect_difference_set, singer
from .core import is_sidon_mod

ERROR_CAP = 5.0
KNOWN_S = {1: 1, 2: 2, 3: 2, 4: 3, 7: 4, 12: 5, 18: 6, 26: 7, 35: 8, 45: 9, 56: 10}


@dataclass(frozen=True)
class Check:
    id: int
    name: str
    passed: bool | None
    observed: object = None
    detail: str = ""


@dataclass(frozen=True)
class ConstructionRow:
    family: str
    parameter: int
    n: int
    size: int
    L_prime: float
    max_discrepancy_ratio: float
    max_element_error: float
    max_element_error_upper: float
    power_sum_normalized_1: float
    power_sum_normalized_2: float
    power_sum_normalized_3: float


@dataclass(frozen=True)
class ExceptionRow:
    N: int
    exception_count: int
    density: float
    ratio_to_N45: float


def quadruple_oracle(elems) -> bool:
    """Sidon test comparing every pair-sum a + b (a <= b) with every other one.

    All quadruples are compared at once by broadcasting; no early exit, no hashing.
    """
    e = np.asarray(elems, dtype=np.int64)
    i, j = np.triu_indices(len(e))
    sums = e[i] + e[j]
    eq = sums[:, None] == sums[None, :]
    np.fill_diagonal(eq, False)
    return not eq.any()


def _primes_in(lo, hi):
    return [p for p in range(lo, hi + 1) if primes.is_prime(p)]


def check_verification(samples: int, seed: int) -> Check:
    mismatches = 0
    for mask in range(1 << 12):
        elems = [i + 1 for i in range(12) if mask >> i & 1]
        mismatches += core.verify_sidon(elems).ok != quadruple_oracle(elems)
    rng = random.Random(seed)
    for _ in range(samples):
        elems = sorted(rng.sample(range(1, 10**4 + 1), rng.randint(0, 50)))
        mismatches += core.verify_sidon(elems).ok != quadruple_oracle(elems)
    return Check(1, "verification agrees with quadruple brute force", mismatches == 0,
                 mismatches, f"4096 subsets of [1,12] + {samples} random sets")


def check_exact_search(nmax: int) -> Check:
    got = {n: search.max_sidon(n).s_n for n in KNOWN_S if n <= nmax}
    bad = {n: s for n, s in got.items() if s != KNOWN_S[n]}
    return Check(2, "exact S(n) regression", not bad, got, f"mismatches: {bad}" if bad else "")


def check_constructions(pmax: int, pds_max: int) -> Check:
    failures = []
    for p in _primes_in(2, pmax):
        for name, build, size in (("bose", bose, p), ("singer", singer, p + 1),
                                  ("erdos_turan", erdos_turan, p)):
            A = build(p)
            if not (A.verified and len(A) == size and core.verify_sidon(A.elements).ok):
                failures.append((name, p))
        if p <= pds_max and not is_perfect_difference_set(singer(p).elements, p * p + p + 1):
            failures.append(("singer-pds", p))
        if not is_sidon_mod(bose(p).elements, p * p - 1):
            failures.append(("bose-mod", p))
    return Check(3, "construction validity", not failures, len(failures), str(failures[:10]))


def construction_grid(pmin: int, pmax: int):
    for p in _primes_in(pmin, pmax):
        yield "bose", p, bose(p)
        yield "singer", p, singer(p)
        yield "erdos_turan", p, erdos_turan(p)


def measure_grid(pmin: int, pmax: int) -> list[ConstructionRow]:
    rows = []
    for family, p, A in construction_grid(pmin, pmax):
        sweep = core.discrepancy_sweep(A)
        ee = core.element_errors(A)
        ps = [core.power_sum(A, ell).normalized for ell in (1, 2, 3)]
        rows.append(ConstructionRow(family, p, A.n, len(A), A.defect().L_prime, sweep.max_ratio,
                                    ee.max_normalized, ee.max_normalized_upper, *ps))
    return rows


def check_exceptions(Ns) -> tuple[Check, list[ExceptionRow]]:
    table = primes.sieve(max(100, math.isqrt(max(Ns) + 1) + 1))
    rows = []
    for N in Ns:
        rep = primes.exceptional_set(N, table)
        rows.append(ExceptionRow(N, rep.exception_count, rep.exception_count / N, rep.ratio_to_N45))
    dens = [r.density for r in rows]
    monotone = all(b <= a for a, b in zip(dens, dens[1:]))
    c30 = primes.exceptional_set(30, table).exception_count
    return (Check(8, "exceptional-set density is nonincreasing; count(30) = 16",
                  monotone and c30 == 16, {"densities": dens, "count_30": c30}), rows)


def _large_gap_sum_brute(x: int) -> int:
    ps = [p for p in range(2, x + 1) if primes.is_prime(p)]
    total = 0
    for p in ps:
        q = primes.next_prime(p)
        if (q - p) ** 2 >= p:
            total += q - p
    return total


def check_large_gap_sum(xmax: int) -> Check:
    table = primes.sieve(max(100, xmax))
    spots = {x: primes.large_gap_sum(table, x) for x in (2, 3, 10)}
    ok = spots == {2: 0, 3: 2, 10: 6}
    probes = [x for x in (50, 100, 500, 1000, 5000, xmax) if x <= xmax]
    bad = [x for x in probes if primes.large_gap_sum(table, x) != _large_gap_sum_brute(x)]
    return Check(9, "large prime-gap sum spot values and brute-force agreement",
                 ok and not bad, spots, f"brute-force mismatches at {bad}" if bad else "")


def check_ding() -> Check:
    rep = core.ding_condition(singer(101), 0.01)
    return Check(10, "density condition A(t) > sqrt(t) fails for singer(101)",
                 not rep.holds, rep.first_failing_t)


def run_suite(quick: bool = False, budget: float | None = None, seed: int = 0) -> dict:
    """Run every check; returns a JSON-ready dict (see ``sidonlab.io.report``).

    With ``budget`` seconds exceeded, remaining checks are skipped and the
    report is flagged incomplete.
    """
    cfg = {
        "quick": quick,
        "seed": seed,
        "budget": budget,
        "construction_primes": [11, 101 if quick else 251],
        "validity_pmax": 101 if quick else 251,
        "exact_nmax": 35 if quick else 56,
        "exception_N": [10**4] if quick else [10**4, 10**5, 10**6, 10**7],
        "random_sets": 1000 if quick else 10**4,
        "error_cap": ERROR_CAP,
    }
    t0 = time.perf_counter()
    checks: list[Check] = []
    tables: dict[str, list] = {}
    complete = True

    def over_budget() -> bool:
        return budget is not None and time.perf_counter() - t0 > budget

    rows: list[ConstructionRow] = []
    exc_rows: list[ExceptionRow] = []
    defect_rows: list[search.DefectRecord] = []

    def grid_checks():
        rows.extend(measure_grid(*cfg["construction_primes"]))
        tables["constructions"] = rows
        mr = max(r.max_discrepancy_ratio for r in rows)
        me = max(r.max_element_error for r in rows)
        mp = max(max(r.power_sum_normalized_1, r.power_sum_normalized_2, r.power_sum_normalized_3)
                 for r in rows)
        return [
            Check(4, "interval discrepancy within the constant-52 bound", mr <= 1.0, mr),
            Check(5, "m-th element error cap", me <= ERROR_CAP, me),
            Check(6, "power-sum error caps (ell = 1, 2, 3)", mp <= ERROR_CAP, mp),
        ]

    def defect_checks():
        defect_rows.extend(search.defect_table(range(1, cfg["exact_nmax"] + 1)))
        tables["defects"] = defect_rows
        bad = [r.n for r in defect_rows
               if not search.eq1_check(r) or r.L_prime < -r.n ** 0.25]
        return [Check(7, "upper bound S(n) < sqrt(n) + 0.998 n^(1/4) and L' >= -n^(1/4)",
                      not bad, len(defect_rows), f"violations at {bad}" if bad else "")]

    def exception_checks():
        chk, r = check_exceptions(cfg["exception_N"])
        exc_rows.extend(r)
        tables["exceptions"] = exc_rows
        return [chk]

    steps = [
        lambda: [check_verification(cfg["random_sets"], seed)],
        lambda: [check_exact_search(cfg["exact_nmax"])],
        lambda: [check_constructions(cfg["validity_pmax"], 100)],
        grid_checks,
        defect_checks,
        exception_checks,
        lambda: [check_large_gap_sum(10**4)],
        lambda: [check_ding()],
    ]
    for step in steps:
        if over_budget():
            complete = False
            break
        checks.extend(step())
    checks.sort(key=lambda c: c.id)
    return {
        "config": cfg,
        "complete": complete,
        "elapsed": time.perf_counter() - t0,
        "checks": checks,
        "all_passed": complete and all(c.passed for c in checks),
        "tables": tables,
    }
