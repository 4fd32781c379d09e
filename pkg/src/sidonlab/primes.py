"""Prime sieve, prime-gap statistics, and the exceptional-gap machinery.

Gap conditions of the form ``gap >= sqrt(p)`` are evaluated as
``gap * gap >= p`` so there is no floating-point boundary.
"""

from __future__ import annotations

import math
import os
from bisect import bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

SEGMENT_SIZE = 1 << 22
GAP_EXPONENT = 0.525

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    c = max(2, n + 1)
    while not is_prime(c):
        c += 1
    return c


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorisation as (prime, exponent) pairs."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def worker_count() -> int:
    env = os.environ.get("SIDONLAB_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(cap, int(env)))
        except ValueError:
            pass
    return cap


def _small_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return np.flatnonzero(flags)


def _sieve_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi)."""
    flags = np.ones(hi - lo, dtype=bool)
    for p in base.tolist():
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo::p] = False
    return np.flatnonzero(flags) + lo


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes <= ``limit``; p(k) is 1-based (p(1) = 2)."""

    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def p(self, k: int) -> int:
        if not 1 <= k <= len(self.primes):
            raise IndexError(f"p_{k} is outside this table")
        return int(self.primes[k - 1])

    def gap(self, k: int) -> int:
        """p_{k+1} - p_k (the successor may lie past the limit)."""
        return self.successor(self.p(k)) - self.p(k)

    def pi(self, x: float) -> int:
        return int(np.searchsorted(self.primes, math.floor(x), side="right"))

    def predecessor(self, x: float) -> int:
        """Largest prime <= x."""
        if x > self.limit:
            raise ValueError(f"{x} exceeds table limit {self.limit}")
        k = self.pi(x)
        if k == 0:
            raise ValueError(f"no prime <= {x}")
        return int(self.primes[k - 1])

    def successor(self, x: int) -> int:
        """Smallest prime > x, falling back to a primality scan past the limit."""
        k = self.pi(x)
        if k < len(self.primes):
            return int(self.primes[k])
        return next_prime(max(x, self.limit))

    def tolist(self) -> list[int]:
        return self.primes.tolist()


def sieve(limit: int, workers: int | None = None) -> PrimeTable:
    """Segmented sieve of Eratosthenes.

    Segments are independent and may run on a thread pool; results are
    concatenated in segment order.
    """
    if limit < 2:
        raise ValueError(f"sieve limit must be at least 2, got {limit}")
    base = _small_sieve(math.isqrt(limit) + 1)
    if limit < SEGMENT_SIZE:
        return PrimeTable(limit, _sieve_segment(2, limit + 1, base).astype(np.int64))
    bounds = [(lo, min(lo + SEGMENT_SIZE, limit + 1)) for lo in range(2, limit + 1, SEGMENT_SIZE)]
    workers = workers or worker_count()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda b: _sieve_segment(b[0], b[1], base), bounds))
    else:
        parts = [_sieve_segment(lo, hi, base) for lo, hi in bounds]
    return PrimeTable(limit, np.concatenate(parts).astype(np.int64))


# --------------------------------------------------------------------------
# Gap statistics


def _pairs_upto(table: PrimeTable, x: int) -> tuple[list[int], list[int]]:
    """Consecutive prime pairs (p_k, p_{k+1}) with p_k <= x."""
    k = table.pi(x)
    ps = table.primes[:k].tolist()
    if not ps:
        return [], []
    nxt = ps[1:] + [table.successor(ps[-1])]
    return ps, nxt


@dataclass(frozen=True)
class GapExponentReport:
    limit: int
    min_prime: int
    max_exponent: float
    argmax_prime: int
    argmax_gap: int
    threshold: float
    exceeding: tuple[tuple[int, int], ...]
    exceeding_count: int
    note: str = ("empirical trend only: the gap bound hides an unspecified constant, "
                 "so exceedances at small primes do not contradict it")


def gap_exponent_report(table: PrimeTable, min_prime: int = 11,
                        threshold: float = GAP_EXPONENT) -> GapExponentReport:
    """Max over p_k >= min_prime of log(gap)/log(p_k), and the gaps above p_k^threshold."""
    if table.limit < 100:
        raise ValueError("gap exponent report needs a table limit of at least 100")
    ps = table.primes.astype(np.float64)
    gaps = np.diff(table.primes).astype(np.float64)
    ps = ps[:-1]
    keep = ps >= min_prime
    ps, gaps = ps[keep], gaps[keep]
    expo = np.log(gaps) / np.log(ps)
    i = int(np.argmax(expo))
    over = np.flatnonzero(gaps > ps ** threshold)
    exceeding = tuple((int(ps[j]), int(gaps[j])) for j in over)
    return GapExponentReport(table.limit, min_prime, float(expo[i]), int(ps[i]), int(gaps[i]),
                             threshold, exceeding, len(exceeding))


def large_gap_sum(table: PrimeTable, x: int) -> int:
    """Sum of p_{k+1} - p_k over p_k <= x with (p_{k+1} - p_k)^2 >= p_k."""
    if x > table.limit:
        raise ValueError(f"x={x} exceeds table limit {table.limit}")
    k = table.pi(x)
    if k == 0:
        return 0
    ps = table.primes[:k]
    nxt = np.empty_like(ps)
    nxt[:-1] = ps[1:]
    nxt[-1] = table.successor(int(ps[-1]))
    g = nxt - ps
    return int(g[g * g >= ps].sum())


@dataclass(frozen=True)
class HeathBrownReport:
    x: int
    total: int
    # (x_decade, sum up to x_decade, log(sum)/log(x_decade))
    decades: tuple[tuple[int, int, float | None], ...]
    note: str = ("fitted exponents are descriptive; the asymptotic exponent 3/5 + eps "
                 "has an unknown constant and is not asserted")


def heath_brown_sum(table: PrimeTable, x: int) -> HeathBrownReport:
    total = large_gap_sum(table, x)
    decades = []
    xd = 1000
    while xd <= x:
        s = large_gap_sum(table, xd)
        decades.append((xd, s, math.log(s) / math.log(xd) if s > 0 else None))
        xd *= 10
    return HeathBrownReport(x, total, tuple(decades))


# --------------------------------------------------------------------------
# Exceptional n


@dataclass(frozen=True)
class ExceptionalInterval:
    p_m: int
    p_next: int
    lo: int
    hi: int


@dataclass(frozen=True)
class ExceptionReport:
    N: int
    intervals: tuple[ExceptionalInterval, ...]
    exception_count: int
    ratio_to_N45: float


def exceptional_set(N: int, table: PrimeTable) -> ExceptionReport:
    """n in [p_m^2 - 1, p_{m+1}^2 - 1) with p_{m+1} - p_m >= sqrt(p_m), clipped to [1, N].

    Intervals are half-open so consecutive ones partition the integers.
    """
    if N < 1:
        raise ValueError("N must be positive")
    root = math.isqrt(N + 1)
    if table.limit < root:
        raise ValueError(f"prime table up to {table.limit} cannot cover sqrt(N+1) = {root}")
    ps, nxt = _pairs_upto(table, root)
    intervals = []
    count = 0
    for p, q in zip(ps, nxt):
        lo = p * p - 1
        if lo > N:
            break
        if (q - p) ** 2 >= p:
            hi = q * q - 1
            intervals.append(ExceptionalInterval(p, q, lo, hi))
            count += max(0, min(hi, N + 1) - max(lo, 1))
    return ExceptionReport(N, tuple(intervals), count, count / N ** 0.8)


def is_exceptional(n: int, report: ExceptionReport) -> bool:
    los = [iv.lo for iv in report.intervals]
    k = bisect_right(los, n)
    return k > 0 and n < report.intervals[k - 1].hi


def bose_prime(n: int, table: PrimeTable | None = None) -> int:
    """Largest prime p with p^2 - 1 <= n, or 0 when there is none."""
    r = math.isqrt(n + 1)
    if r < 2:
        return 0
    if table is not None and table.limit >= r:
        return table.predecessor(r)
    while not is_prime(r):
        r -= 1
    return r


def defect_upper_envelope(n: int, table: PrimeTable) -> float:
    """sqrt(n) - p_k with p_k the largest prime such that p_k^2 - 1 <= n.

    Since a Bose set of size p_k fits in [n], this bounds sqrt(n) - S(n) from above.
    """
    r = math.isqrt(n + 1)
    if r < 2:
        raise ValueError(f"no prime p with p^2 - 1 <= {n}")
    if table.limit < r:
        raise ValueError(f"prime table up to {table.limit} cannot cover sqrt(n+1) = {r}")
    return math.sqrt(n) - table.predecessor(r)

