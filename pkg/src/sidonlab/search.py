"""Exact S(n) = max |A| over Sidon subsets A of [n], by branch and bound.

S is built bottom-up.  Since S(n-1) <= S(n) <= S(n-1) + 1, the step at n
only asks whether a Sidon set of size k = S(n-1) + 1 fits in [n].  Such a set
must contain both 1 and n, or a translate would already fit in [n-1].  The
incumbent is S(n-1) and the search tries to beat it.

Pruning uses only values this table has already proved.  If G(j) is the
smallest m with S(m) >= j, then any j consecutive marks of a Sidon set span
at least G(j) - 1.  So a partial set whose last mark is x and which still needs
j - 1 further marks in (x, n] is dead once n - x + 1 < G(j).  Mirror images
are removed by requiring the first gap to be shorter than the last gap.
The published bound S(n) < sqrt(n) + 0.998 n^{1/4} is never used to prune.
It is only reported.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .core import SidonSet
from .primes import bose_prime

DEFAULT_LIMIT = 150
EQ1_COEFF = 0.998
# Parallel subtree search only pays off once single decisions take seconds.
PARALLEL_MIN_N = 48


@dataclass(frozen=True)
class SearchResult:
    n: int
    s_n: int
    witness: SidonSet
    nodes_expanded: int
    elapsed: float


class _Table:
    def __init__(self):
        self.S = [0, 1]
        self.first = {1: 1}  # G(k): smallest n with S(n) >= k
        self.witness: list[tuple[int, ...]] = [(), (1,)]
        self.nodes = [0, 0]

    @property
    def top(self) -> int:
        return len(self.S) - 1


_TABLE = _Table()


def _extend(first: dict[int, int], n: int, k: int, prefix=None):
    """Look for k marks in [1, n] containing 1 and n, first gap < last gap.

    ``prefix`` optionally fixes the second mark (used to split the search
    into independent subtrees).  Returns the marks or None.
    """
    nodes = 0
    marks = [1]

    def dfs(left: int, last: int, lst: int, dist: int, first_gap: int) -> bool:
        # ``left`` marks still to place after ``last``; the final one is n.
        # ``lst`` has bit d set iff some chosen mark lies d below ``last``.
        nonlocal nodes
        nodes += 1
        if left == 1:
            s = n - last
            if s <= first_gap:
                return False
            if ((lst << s) | (1 << s)) & dist:
                return False
            marks.append(n)
            return True
        need = first[left]
        hi = n - need + 1
        if left == 2:
            # the next mark must leave a last gap longer than the first gap
            hi = min(hi, n - first_gap - 1)
        for x in range(last + 1, hi + 1):
            s = x - last
            new = (lst << s) | (1 << s)
            if new & dist:
                continue
            marks.append(x)
            if dfs(left - 1, x, new, dist | new, first_gap):
                return True
            marks.pop()
        return False

    found = False
    if k == 1:
        found = n == 1
        marks = [1]
    elif k == 2:
        found = n >= 2
        marks = [1, n]
    elif prefix is not None:
        s = prefix - 1
        if n - prefix + 1 >= first[k - 1]:
            marks.append(prefix)
            found = dfs(k - 2, prefix, 1 << s, 1 << s, s)
    else:
        # second mark chosen here so the first gap is known below
        for x in range(2, n - first[k - 1] + 2):
            s = x - 1
            marks = [1, x]
            if dfs(k - 2, x, 1 << s, 1 << s, s):
                found = True
                break
    return (tuple(marks) if found else None), nodes


def _subtree(args):
    first, n, k, second = args
    return _extend(first, n, k, prefix=second)


def _decide(first, n, k, workers):
    if workers > 1 and n >= PARALLEL_MIN_N and k > 2:
        seconds = list(range(2, n - first[k - 1] + 2))
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_subtree, [(first, n, k, s) for s in seconds]))
        nodes = sum(r[1] for r in results)
        # lowest second mark wins, matching the sequential order
        for marks, _ in results:
            if marks is not None:
                return marks, nodes
        return None, nodes
    return _extend(first, n, k)


def _grow(table: _Table, n: int, workers: int) -> None:
    while table.top < n:
        m = table.top + 1
        k = table.S[m - 1] + 1
        marks, nodes = _decide(table.first, m, k, workers)
        if marks is not None:
            table.S.append(k)
            table.first[k] = m
            table.witness.append(marks)
        else:
            table.S.append(k - 1)
            table.witness.append(table.witness[m - 1])
        table.nodes.append(nodes)


def _lex_min(first: dict[int, int], n: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest Sidon subset of [n] of size k (k = S(n))."""
    marks = [1]

    def dfs(left: int, last: int, lst: int, dist: int) -> bool:
        if left == 0:
            return True
        hi = n - first[left] + 1
        for x in range(last + 1, hi + 1):
            s = x - last
            new = (lst << s) | (1 << s)
            if new & dist:
                continue
            marks.append(x)
            if dfs(left - 1, x, new, dist | new):
                return True
            marks.pop()
        return False

    if not dfs(k - 1, 1, 0, 0):
        raise RuntimeError(f"no Sidon set of size {k} in [{n}] although S({n}) = {k}")
    return tuple(marks)


def max_sidon(n: int, limit: int = DEFAULT_LIMIT, lex_witness: bool = False,
              workers: int = 1) -> SearchResult:
    """Exact maximum size of a Sidon subset of [1, n] with an optimal witness.

    ``nodes_expanded`` counts search nodes for the whole chain S(1..n),
    including work cached from earlier calls.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if n > limit:
        raise ValueError(f"n={n} exceeds the exact search limit {limit}; use bracket mode")
    t0 = time.perf_counter()
    _grow(_TABLE, n, workers)
    s_n = _TABLE.S[n]
    marks = _lex_min(_TABLE.first, n, s_n) if lex_witness else _TABLE.witness[n]
    witness = SidonSet.from_elements(marks, n)
    if len(witness) != s_n:
        raise RuntimeError("witness size disagrees with the table")
    return SearchResult(n, s_n, witness, sum(_TABLE.nodes[: n + 1]), time.perf_counter() - t0)


def exact_values(n: int, **kw) -> list[int]:
    """[S(1), ..., S(n)]."""
    max_sidon(n, **kw)
    return _TABLE.S[1: n + 1]


# --------------------------------------------------------------------------
# Defect records


def eq1_bound(n: int) -> float:
    return math.sqrt(n) + EQ1_COEFF * n ** 0.25


@dataclass(frozen=True)
class DefectRecord:
    """Exact mode: ``s_n`` and ``L_prime`` are numbers.  Bracket mode: both
    are ``(lo, hi)`` pairs from the Bose lower bound and the upper cap
    ``eq1_bound``."""

    n: int
    s_n: int | tuple[int, int]
    L_prime: float | tuple[float, float]
    bose_bracket: int
    eq1_bound: float
    mode: str = "exact"


def defect_record(n: int, exact: bool = True, limit: int = DEFAULT_LIMIT,
                  workers: int = 1) -> DefectRecord:
    bracket = bose_prime(n)
    bound = eq1_bound(n)
    root = math.sqrt(n)
    if exact:
        s = max_sidon(n, limit=limit, workers=workers).s_n
        return DefectRecord(n, s, root - s, bracket, bound, "exact")
    hi = math.ceil(bound) - 1  # largest integer strictly below the bound
    return DefectRecord(n, (bracket, hi), (root - hi, root - bracket), bracket, bound, "bracket")


def defect_table(n_values, exact: bool = True, limit: int = DEFAULT_LIMIT,
                 workers: int = 1) -> list[DefectRecord]:
    return [defect_record(n, exact, limit, workers) for n in n_values]


def eq1_check(record: DefectRecord) -> bool:
    """S(n) < sqrt(n) + 0.998 n^{1/4} for an exactly searched n."""
    if record.mode != "exact":
        raise ValueError("eq1_check is only defined for exact-mode records")
    return record.s_n < record.eq1_bound

